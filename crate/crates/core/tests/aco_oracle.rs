mod common;

use std::collections::HashSet;

use common::oracle::dijkstra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use replan_core::aco::{plan_subpath, roulette_select, AcoMode, AcoParams};
use replan_core::baselines::{apf_step, ApfError, ApfParams};
use replan_core::grid::{CellGrid, Passability};
use replan_core::local_grid::LocalGrid;
use replan_core::{Cell, Point, Pose};

#[test]
fn empty_grid_corner_to_corner_matches_dijkstra() {
    let grid = CellGrid::open(9, 9, 1.0);
    let start = Cell::new(0, 0);
    let goal = Cell::new(8, 8);
    let best = dijkstra(9, 9, 1.0, |_, _| true, (0, 0), (8, 8)).unwrap();
    let params = AcoParams::default();
    let mut optimal = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = plan_subpath(&grid, start, goal, &params, &mut rng).unwrap();
        if (out.best.length - best).abs() < 1e-9 {
            optimal += 1;
        }
    }
    assert!(optimal >= 95, "optimal in {optimal}/100 runs, need 95");
}

/// Wall across rows 6 of a 9x9 local grid; the goal sits behind it.
fn detour_grid() -> LocalGrid {
    let wall = (0..6).map(|c| Cell::new(6, c));
    LocalGrid::from_occupied(Pose::new(0.0, 0.0, 0.0), 1.0, 4, 1, wall).unwrap()
}

#[test]
fn wall_detour_paths_are_feasible() {
    let grid = detour_grid();
    let start = grid.robot_cell();
    let goal = Cell::new(8, 1);
    let best = dijkstra(9, 9, 1.0, |r, c| grid.is_passable(Cell::new(r, c)), (4, 4), (8, 1)).unwrap();
    for mode in [AcoMode::Improved, AcoMode::Conventional] {
        let params = AcoParams::default().with_mode(mode);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = plan_subpath(&grid, start, goal, &params, &mut rng).unwrap();
            let cells = &out.best.cells;
            assert_eq!((cells[0], *cells.last().unwrap()), (start, goal));
            assert!(cells.iter().all(|c| grid.is_passable(*c)), "{cells:?}");
            assert!(cells.windows(2).all(|w| w[0].is_adjacent(&w[1])));
            assert_eq!(cells.iter().collect::<HashSet<_>>().len(), cells.len());
            assert!(out.best.length >= best - 1e-9);
        }
    }
}

#[test]
fn same_seed_same_search() {
    let grid = detour_grid();
    let params = AcoParams::default();
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        plan_subpath(&grid, grid.robot_cell(), Cell::new(8, 1), &params, &mut rng).unwrap()
    };
    assert_eq!(run(9), run(9));
    let parallel = AcoParams { parallel: true, ..params.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = plan_subpath(&grid, grid.robot_cell(), Cell::new(8, 1), &parallel, &mut rng).unwrap();
    assert_eq!(p, run(9));
}

#[test]
fn conventional_baseline_is_the_same_search_with_another_mode() {
    assert_eq!(AcoParams::conventional(), AcoParams::default().with_mode(AcoMode::Conventional));
}

#[test]
fn roulette_frequencies() {
    let probs = [0.2, 0.3, 0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut counts = [0usize; 3];
    const N: usize = 1_000_000;
    for _ in 0..N {
        counts[roulette_select(&probs, rng.gen())] += 1;
    }
    for (c, p) in counts.iter().zip(probs) {
        let f = *c as f64 / N as f64;
        assert!((f - p).abs() <= 0.01, "{f} vs {p}");
    }
}

/// Potential evaluated from scratch over every occupied cell.
fn brute_potential(grid: &LocalGrid, p: Point, goal: Point, k: &ApfParams) -> f64 {
    let side = grid.side();
    let mut d = f64::INFINITY;
    for r in 0..side {
        for c in 0..side {
            let cell = Cell::new(r, c);
            if grid.state(cell) == replan_core::local_grid::CellState::Occupied {
                let o = grid.world_of(cell);
                d = d.min(((p.x - o.x).powi(2) + (p.y - o.y).powi(2)).sqrt());
            }
        }
    }
    let g2 = (p.x - goal.x).powi(2) + (p.y - goal.y).powi(2);
    let rep = if d < k.d0 { 0.5 * k.k_rep * (1.0 / d - 1.0 / k.d0).powi(2) } else { 0.0 };
    0.5 * k.k_att * g2 + rep
}

#[test]
fn apf_matches_exhaustive_potential_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = ApfParams::for_cell_size(0.5);
    for _ in 0..500 {
        let occupied: Vec<Cell> = (0..rng.gen_range(0..6))
            .map(|_| Cell::new(rng.gen_range(0..9), rng.gen_range(0..9)))
            .collect();
        let grid = LocalGrid::from_occupied(Pose::new(3.0, -1.0, 0.0), 0.5, 4, 1, occupied).unwrap();
        let goal = Point::new(rng.gen_range(-10.0..16.0), rng.gen_range(-14.0..12.0));
        let robot = grid.robot_cell();
        let here = brute_potential(&grid, grid.world_of(robot), goal, &params);
        let mut best: Option<(usize, Cell, f64)> = None;
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if (dr, dc) == (0, 0) {
                    continue;
                }
                let c = Cell::new((robot.row as i64 + dr) as usize, (robot.col as i64 + dc) as usize);
                if !grid.is_passable(c) {
                    continue;
                }
                let u = brute_potential(&grid, grid.world_of(c), goal, &params);
                let key = c.row * 9 + c.col;
                let better = match best {
                    None => true,
                    Some((k, _, b)) => u < b || (u == b && key < k),
                };
                if better {
                    best = Some((key, c, u));
                }
            }
        }
        let got = apf_step(&grid, goal, &params);
        match best {
            None => assert_eq!(got, Err(ApfError::NoNeighbors)),
            Some((_, _, u)) if u >= here => assert_eq!(got, Err(ApfError::LocalMinimum)),
            Some((_, c, _)) => assert_eq!(got, Ok(c)),
        }
    }
}
