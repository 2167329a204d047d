//! Benchmark fixtures.

use replan_core::{parse_scenario, Cell, CellGrid, Scenario, WorldCell};

const BENCH20: &str = include_str!("../../../scenarios/bench20.map");
const MULTI: &str = include_str!("../../../scenarios/multi_obstacle.map");

/// The 20 x 20 convergence benchmark as a plain grid, with its start and goal cells.
pub fn bench20() -> (CellGrid, Cell, Cell) {
    let s = parse_scenario(BENCH20).expect("bench20 fixture parses");
    let w = &s.world;
    let mut grid = CellGrid::open(w.height(), w.width(), w.cell_size());
    for r in 0..w.height() {
        for c in 0..w.width() {
            if w.is_static_occupied(WorldCell::new(c as i64, r as i64)) {
                grid.set_blocked(Cell::new(r, c), true);
            }
        }
    }
    let cell = |p| {
        let wc = WorldCell::containing(&p, w.cell_size());
        Cell::new(wc.row as usize, wc.col as usize)
    };
    (grid, cell(s.start.position()), cell(s.goal))
}

/// The 27 x 27 multi-obstacle scenario.
pub fn multi_obstacle() -> Scenario {
    parse_scenario(MULTI).expect("multi-obstacle fixture parses")
}
