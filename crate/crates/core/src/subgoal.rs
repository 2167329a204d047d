//! Multi-constraint sub-goal selection.
//!
//! Every candidate cell is scored on three constraints: its distance to the
//! goal (`ds`), how far it deviates from the robot heading (`theta1`) and how
//! far the direction from it to the goal deviates from the robot heading
//! (`theta2`). Each family is normalized to sum to one across candidates and
//! the weighted sum `beta*theta1 + alpha*ds + omega*theta2` is minimized.

use thiserror::Error;

use crate::geometry::{wrap_angle, Cell, Point, Pose};
use crate::local_grid::{CandidateSet, CellState, LocalGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubGoalError {
    #[error("no candidate cells to choose from")]
    EmptyCandidates,
    #[error("invalid cost weights: {0}")]
    InvalidWeights(String),
}

/// Weights of the sub-goal cost: `alpha` on distance, `beta` on the
/// robot-to-cell azimuth, `omega` on the cell-to-goal azimuth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostWeights {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
}

impl CostWeights {
    pub fn new(alpha: f64, beta: f64, omega: f64) -> Result<Self, SubGoalError> {
        let w = Self { alpha, beta, omega };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), SubGoalError> {
        let all = [self.alpha, self.beta, self.omega];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(SubGoalError::InvalidWeights(format!(
                "weights must be finite and >= 0, got {all:?}"
            )));
        }
        if all.iter().sum::<f64>() <= 0.0 {
            return Err(SubGoalError::InvalidWeights("weights sum to zero".into()));
        }
        Ok(())
    }
}

impl Default for CostWeights {
    /// The best-performing tuning: alpha 4, beta 1.8, omega 1.
    fn default() -> Self {
        Self {
            alpha: 4.0,
            beta: 1.8,
            omega: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubGoal {
    pub cell: Cell,
    pub world: Point,
    pub cost: f64,
}

/// Raw, un-normalized constraint values of one candidate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constraints {
    pub ds: f64,
    pub theta1: f64,
    pub theta2: f64,
}

pub fn raw_constraints(robot: &Pose, cell: Point, goal: Point) -> Constraints {
    let here = robot.position();
    Constraints {
        ds: cell.distance(&goal),
        theta1: wrap_angle(here.azimuth_to(&cell) - robot.psi).abs(),
        theta2: wrap_angle(cell.azimuth_to(&goal) - robot.psi).abs(),
    }
}

/// Divides each value by the sum; an all-zero input maps to the uniform vector.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let sum: f64 = values.iter().sum();
    if sum > 0.0 {
        values.iter().map(|v| v / sum).collect()
    } else {
        vec![1.0 / n as f64; n]
    }
}

/// Normalized cost of every candidate, in candidate order.
pub fn candidate_costs(
    candidates: &CandidateSet,
    robot: &Pose,
    goal: Point,
    w: &CostWeights,
) -> Vec<f64> {
    let raw: Vec<Constraints> = candidates
        .cells
        .iter()
        .map(|c| raw_constraints(robot, c.world, goal))
        .collect();
    let ds = normalize(&raw.iter().map(|c| c.ds).collect::<Vec<_>>());
    let t1 = normalize(&raw.iter().map(|c| c.theta1).collect::<Vec<_>>());
    let t2 = normalize(&raw.iter().map(|c| c.theta2).collect::<Vec<_>>());
    (0..raw.len())
        .map(|j| w.beta * t1[j] + w.alpha * ds[j] + w.omega * t2[j])
        .collect()
}

/// Picks the minimum-cost candidate. Ties go to the lowest row-major index.
pub fn select_subgoal(
    grid: &LocalGrid,
    candidates: &CandidateSet,
    robot: &Pose,
    goal: Point,
    w: &CostWeights,
) -> Result<SubGoal, SubGoalError> {
    if candidates.is_empty() {
        return Err(SubGoalError::EmptyCandidates);
    }
    let costs = candidate_costs(candidates, robot, goal, w);
    let side = grid.side();
    let best = candidates
        .cells
        .iter()
        .zip(&costs)
        .min_by(|(a, ca), (b, cb)| {
            ca.total_cmp(cb)
                .then_with(|| a.cell.index(side).cmp(&b.cell.index(side)))
        })
        .expect("non-empty");
    debug_assert_eq!(grid.state(best.0.cell), CellState::Free);
    Ok(SubGoal {
        cell: best.0.cell,
        world: best.0.world,
        cost: *best.1,
    })
}
