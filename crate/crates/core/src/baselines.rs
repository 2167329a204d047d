//! Comparison planners. The conventional ant colony baseline is the [`crate::aco`]
//! module run with [`crate::AcoMode::Conventional`]; this module adds a
//! textbook artificial potential field step.

use thiserror::Error;

use crate::geometry::{Cell, Point};
use crate::grid::Passability;
use crate::local_grid::{CellState, LocalGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApfError {
    #[error("invalid potential field parameters: {0}")]
    InvalidParams(String),
    #[error("no free neighbor to move to")]
    NoNeighbors,
    #[error("local minimum: no neighbor lowers the potential")]
    LocalMinimum,
}

/// Gains of the attractive and repulsive potentials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApfParams {
    pub k_att: f64,
    pub k_rep: f64,
    /// Repulsion cutoff distance in meters.
    pub d0: f64,
}

impl ApfParams {
    /// `k_att = 1`, `k_rep = 100`, `d0 = 2` cells.
    pub fn for_cell_size(cell_size: f64) -> Self {
        Self {
            k_att: 1.0,
            k_rep: 100.0,
            d0: 2.0 * cell_size,
        }
    }

    pub fn validate(&self) -> Result<(), ApfError> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if ok(self.k_att) && ok(self.k_rep) && ok(self.d0) {
            Ok(())
        } else {
            Err(ApfError::InvalidParams(format!("{self:?}")))
        }
    }
}

/// `U_att + U_rep` at `p`, where `obstacles` are world points of occupied cells.
pub fn potential(p: Point, goal: Point, obstacles: &[Point], params: &ApfParams) -> f64 {
    let d_goal = p.distance(&goal);
    let att = 0.5 * params.k_att * d_goal * d_goal;
    let d = obstacles
        .iter()
        .map(|o| p.distance(o))
        .fold(f64::INFINITY, f64::min);
    let rep = if d < params.d0 {
        let k = 1.0 / d - 1.0 / params.d0;
        0.5 * params.k_rep * k * k
    } else {
        0.0
    };
    att + rep
}

/// World points of the occupied cells of a local grid.
pub fn occupied_points(grid: &LocalGrid) -> Vec<Point> {
    let side = grid.side();
    (0..side * side)
        .map(|i| Cell::from_index(i, side))
        .filter(|&c| grid.state(c) == CellState::Occupied)
        .map(|c| grid.world_of(c))
        .collect()
}

/// The free 8-neighbor of the robot with the lowest potential. Ties go to
/// the lowest row-major index.
pub fn apf_step(grid: &LocalGrid, goal: Point, params: &ApfParams) -> Result<Cell, ApfError> {
    params.validate()?;
    let obstacles = occupied_points(grid);
    let robot = grid.robot_cell();
    let here = potential(grid.world_of(robot), goal, &obstacles, params);
    let mut neighbors: Vec<Cell> = grid
        .passable_neighbors(robot)
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    if neighbors.is_empty() {
        return Err(ApfError::NoNeighbors);
    }
    neighbors.sort_by_key(|c| c.index(grid.side()));
    let mut best: Option<(Cell, f64)> = None;
    for c in neighbors {
        let u = potential(grid.world_of(c), goal, &obstacles, params);
        if best.is_none_or(|(_, b)| u < b) {
            best = Some((c, u));
        }
    }
    let (cell, u) = best.expect("non-empty");
    if u >= here {
        return Err(ApfError::LocalMinimum);
    }
    Ok(cell)
}
