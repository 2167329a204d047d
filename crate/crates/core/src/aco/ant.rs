//! Ant state, transition rule and path construction.

use std::f64::consts::SQRT_2;

use rand::Rng;

use super::{AcoError, AcoMode, AcoParams, CornerModel, PheromoneField};
use crate::geometry::{count_turns, Cell, Direction};
use crate::grid::Passability;

/// A walked cell sequence and its length (m) and corner count.
#[derive(Clone, Debug, PartialEq)]
pub struct AntPath {
    pub cells: Vec<Cell>,
    pub length: f64,
    pub corners: usize,
    pub reached: bool,
    /// Filled in once the path is scored.
    pub score: Option<f64>,
}

impl AntPath {
    pub fn new(cells: Vec<Cell>, cell_size: f64, reached: bool) -> Self {
        let dirs = directions(&cells);
        let length = dirs.iter().map(|d| d.step_length(cell_size)).sum();
        let corners = count_turns(dirs.iter().copied());
        Self {
            cells,
            length,
            corners,
            reached,
            score: None,
        }
    }

    pub fn start(&self) -> Cell {
        self.cells[0]
    }

    pub fn end(&self) -> Cell {
        *self.cells.last().expect("paths hold at least the start cell")
    }

    pub fn steps(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn directions(&self) -> Vec<Direction> {
        directions(&self.cells)
    }
}

fn directions(cells: &[Cell]) -> Vec<Direction> {
    cells
        .windows(2)
        .map(|w| w[0].direction_to(&w[1]).expect("path cells must be 8-adjacent"))
        .collect()
}

/// Distance heuristic `1 / d` between adjacent cell centers.
pub fn heuristic(from: Cell, to: Cell, cell_size: f64) -> f64 {
    let dir = from.direction_to(&to).expect("cells must be adjacent");
    heuristic_dir(dir, cell_size)
}

pub(crate) fn heuristic_dir(dir: Direction, cell_size: f64) -> f64 {
    if dir.is_diagonal() {
        1.0 / (cell_size * SQRT_2)
    } else {
        1.0 / cell_size
    }
}

/// Corner factor of a hop: the inverse of its angle, or 1 when the angle is zero.
///
/// With [`CornerModel::TurnAngle`] the angle is the turn relative to the
/// previous hop (the first hop is never penalized); with
/// [`CornerModel::Azimuth`] it is the absolute heading of the hop itself.
pub fn corner_heuristic(prev: Option<Direction>, dir: Direction, model: CornerModel) -> f64 {
    let theta = match model {
        CornerModel::TurnAngle => match prev {
            None => return 1.0,
            Some(p) => dir.turn_angle(p),
        },
        CornerModel::Azimuth => dir.angle().abs(),
    };
    if theta == 0.0 {
        1.0
    } else {
        1.0 / theta
    }
}

/// Where an ant is and what it may no longer visit.
#[derive(Clone, Debug)]
pub struct AntState {
    pub current: Cell,
    pub prev_dir: Option<Direction>,
    visited: Vec<bool>,
    cols: usize,
}

impl AntState {
    pub fn new(start: Cell, rows: usize, cols: usize) -> Self {
        let mut visited = vec![false; rows * cols];
        visited[start.index(cols)] = true;
        Self {
            current: start,
            prev_dir: None,
            visited,
            cols,
        }
    }

    pub fn is_tabu(&self, cell: Cell) -> bool {
        self.visited[cell.index(self.cols)]
    }

    pub fn advance(&mut self, dir: Direction, to: Cell) {
        self.visited[to.index(self.cols)] = true;
        self.current = to;
        self.prev_dir = Some(dir);
    }
}

/// One admissible hop and its probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub dir: Direction,
    pub cell: Cell,
    pub p: f64,
}

/// Unnormalized desirability of a hop.
pub(crate) fn attractiveness(
    field: &PheromoneField,
    state: &AntState,
    dir: Direction,
    cell_size: f64,
    params: &AcoParams,
) -> f64 {
    let tau = field.get(state.current, dir).powf(params.phi);
    let eta = heuristic_dir(dir, cell_size).powf(params.gamma);
    match params.mode {
        AcoMode::Improved => tau * eta * corner_heuristic(state.prev_dir, dir, params.corner),
        AcoMode::Conventional => tau * eta,
    }
}

/// Distribution over the passable, non-tabu neighbors, in canonical direction order.
pub fn transition_probabilities<G: Passability + ?Sized>(
    field: &PheromoneField,
    grid: &G,
    state: &AntState,
    params: &AcoParams,
) -> Result<Vec<Transition>, AcoError> {
    let mut out: Vec<Transition> = grid
        .passable_neighbors(state.current)
        .into_iter()
        .filter(|(_, c)| !state.is_tabu(*c))
        .map(|(dir, cell)| Transition {
            dir,
            cell,
            p: attractiveness(field, state, dir, grid.cell_size(), params),
        })
        .collect();
    if out.is_empty() {
        return Err(AcoError::DeadEnd(state.current));
    }
    let total: f64 = out.iter().map(|t| t.p).sum();
    if total > 0.0 && total.is_finite() {
        for t in &mut out {
            t.p /= total;
        }
    } else {
        let u = 1.0 / out.len() as f64;
        for t in &mut out {
            t.p = u;
        }
    }
    Ok(out)
}

/// Inverse-CDF pick: the first index whose cumulative probability exceeds `draw`.
pub fn roulette_select(probs: &[f64], draw: f64) -> usize {
    assert!(!probs.is_empty(), "empty distribution");
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            return i;
        }
    }
    // Rounding left the total just under the draw: take the last non-zero entry.
    probs
        .iter()
        .rposition(|p| *p > 0.0)
        .unwrap_or(probs.len() - 1)
}

/// Walks one ant from `start` until it reaches `goal`, dead-ends or runs out of steps.
pub fn walk<G: Passability + ?Sized, R: Rng>(
    grid: &G,
    field: &PheromoneField,
    start: Cell,
    goal: Cell,
    params: &AcoParams,
    max_steps: usize,
    rng: &mut R,
) -> AntPath {
    let mut state = AntState::new(start, grid.rows(), grid.cols());
    let mut cells = vec![start];
    let mut reached = false;
    for _ in 0..max_steps {
        let options = match transition_probabilities(field, grid, &state, params) {
            Ok(o) => o,
            Err(_) => break,
        };
        let probs: Vec<f64> = options.iter().map(|t| t.p).collect();
        let pick = options[roulette_select(&probs, rng.gen::<f64>())];
        state.advance(pick.dir, pick.cell);
        cells.push(pick.cell);
        if pick.cell == goal {
            reached = true;
            break;
        }
    }
    AntPath::new(cells, grid.cell_size(), reached)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CellGrid;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn heuristic_values() {
        let a = Cell::new(3, 3);
        assert_eq!(heuristic(a, Cell::new(4, 3), 1.0), 1.0);
        assert!((heuristic(a, Cell::new(4, 4), 1.0) - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((heuristic(a, Cell::new(3, 2), 1.5) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn corner_factor_cases() {
        use Direction::*;
        let m = CornerModel::TurnAngle;
        assert_eq!(corner_heuristic(None, NE, m), 1.0);
        assert_eq!(corner_heuristic(Some(E), E, m), 1.0);
        assert!((corner_heuristic(Some(E), N, m) - 1.0 / FRAC_PI_2).abs() < 1e-15);
        assert!((corner_heuristic(Some(E), N, m) - 0.636_619_772_367_581_3).abs() < 1e-15);
        assert!((corner_heuristic(Some(E), NE, m) - 1.0 / FRAC_PI_4).abs() < 1e-15);
        let lit = CornerModel::Azimuth;
        assert_eq!(corner_heuristic(Some(N), E, lit), 1.0);
        assert!((corner_heuristic(None, S, lit) - 1.0 / FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn single_neighbor_gets_everything() {
        let g = CellGrid::from_ascii(
            "###
             #.#
             #.#",
            1.0,
        );
        let field = PheromoneField::uniform(3, 3, 1.0);
        let state = AntState::new(Cell::new(0, 1), 3, 3);
        let t = transition_probabilities(&field, &g, &state, &AcoParams::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].cell, Cell::new(1, 1));
        assert_eq!(t[0].p, 1.0);
    }

    #[test]
    fn symmetric_neighbors_are_uniform() {
        // Only straight neighbors open, uniform pheromone, first step.
        let g = CellGrid::from_ascii(
            "#.#
             ...
             #.#",
            1.0,
        );
        let field = PheromoneField::uniform(3, 3, 0.5);
        let state = AntState::new(Cell::new(1, 1), 3, 3);
        let t = transition_probabilities(&field, &g, &state, &AcoParams::default()).unwrap();
        assert_eq!(t.len(), 4);
        for x in &t {
            assert!((x.p - 0.25).abs() < 1e-15);
        }
        let order: Vec<_> = t.iter().map(|x| x.dir).collect();
        assert_eq!(order, vec![Direction::N, Direction::E, Direction::S, Direction::W]);
    }

    #[test]
    fn dead_end_is_reported() {
        let g = CellGrid::from_ascii(
            "###
             #.#
             ###",
            1.0,
        );
        let field = PheromoneField::uniform(3, 3, 1.0);
        let state = AntState::new(Cell::new(1, 1), 3, 3);
        assert_eq!(
            transition_probabilities(&field, &g, &state, &AcoParams::default()),
            Err(AcoError::DeadEnd(Cell::new(1, 1)))
        );
    }

    #[test]
    fn roulette_arithmetic() {
        assert_eq!(roulette_select(&[1.0], 0.0), 0);
        assert_eq!(roulette_select(&[1.0], 0.999_999), 0);
        assert_eq!(roulette_select(&[0.5, 0.5], 0.75), 1);
        assert_eq!(roulette_select(&[0.5, 0.5], 0.25), 0);
        assert_eq!(roulette_select(&[0.3, 0.7, 0.0], 0.999_999_999_999_999_9), 1);
    }

    #[test]
    fn path_length_and_corners() {
        let cells = vec![
            Cell::new(0, 0),
            Cell::new(0, 1),
            Cell::new(1, 2),
            Cell::new(2, 3),
            Cell::new(3, 3),
        ];
        let p = AntPath::new(cells, 1.5, true);
        assert!((p.length - (1.5 + 2.0 * 1.5 * SQRT_2 + 1.5)).abs() < 1e-12);
        assert_eq!(p.corners, 2);
        assert_eq!(p.steps(), 4);
    }
}
