//! Real-time obstacle avoidance for a LiDAR-equipped mobile robot.
//!
//! Every cycle the robot scans its surroundings, rasterizes the scan into a
//! small local grid, picks the cheapest marginal free cell as a sub-goal,
//! plans a sub-path to it with an ant colony, and executes only the first
//! hop before replanning.

pub mod aco;
pub mod baselines;
pub mod experiment;
pub mod geometry;
pub mod grid;
pub mod local_grid;
pub mod metrics;
pub mod planner;
pub mod scan;
pub mod scenario;
pub mod subgoal;
pub mod world;

pub use aco::{plan_subpath, AcoMode, AcoOutcome, AcoParams, AntPath, CornerModel};
pub use baselines::{apf_step, ApfParams};
pub use experiment::{run_repeats, ParamGroup};
pub use geometry::{Cell, Direction, Point, Pose, WorldCell};
pub use grid::{CellGrid, Passability};
pub use local_grid::{build_local_grid, candidate_cells, CandidateSet, CellState, LocalGrid};
pub use metrics::{aggregate, parse_trajectory_csv, Aggregate, RunMetrics};
pub use planner::{plan_cycle, run, run_with, PlannerConfig, PlannerKind, PlannerState, RunResult, Scenario, Status};
pub use scan::{polar_to_world, simulate_scan, Scan, ScanSample};
pub use scenario::{load_scenario, parse_scenario, ParseError};
pub use subgoal::{select_subgoal, CostWeights, SubGoal};
pub use world::{MoverPolicy, MovingObstacle, WorldMap};
