//! The receding-horizon loop: scan, rasterize, pick a sub-goal, plan a
//! sub-path, execute its first hop, repeat.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aco::{plan_subpath, AcoMode, AcoParams};
use crate::baselines::{apf_step, ApfError, ApfParams};
use crate::geometry::{Cell, Point, Pose, WorldCell};
use crate::local_grid::{build_local_grid_with, candidate_cells, CellState, GridSpec, LocalGrid};
use crate::metrics::{corner_count, path_length, RunMetrics};
use crate::scan::{simulate_scan, ScanError};
use crate::subgoal::{select_subgoal, CostWeights};
use crate::world::WorldMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlannerKind {
    /// Sub-goal selection plus the improved ant colony.
    Proposed,
    /// Sub-goal selection plus the conventional ant colony.
    ConventionalAco,
    /// Artificial potential field, one hop per cycle.
    Apf,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 3] = [Self::Proposed, Self::ConventionalAco, Self::Apf];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::ConventionalAco => "conventional",
            Self::Apf => "apf",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" | "improved" => Ok(Self::Proposed),
            "conventional" | "conventional-aco" | "aco" => Ok(Self::ConventionalAco),
            "apf" => Ok(Self::Apf),
            other => Err(format!("unknown planner '{other}' (expected proposed, conventional or apf)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Running,
    GoalReached,
    Stuck,
    StepBudgetExhausted,
    LocalMinimum,
    CollisionDetected,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Running => "Running",
            Status::GoalReached => "GoalReached",
            Status::Stuck => "Stuck",
            Status::StepBudgetExhausted => "StepBudgetExhausted",
            Status::LocalMinimum => "LocalMinimum",
            Status::CollisionDetected => "CollisionDetected",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig {
    pub lidar_radius: f64,
    pub n_rays: usize,
    pub grid: GridSpec,
    pub weights: CostWeights,
    pub aco: AcoParams,
    pub apf: ApfParams,
    /// The goal counts as reached when the robot's cell center is this close.
    pub goal_tolerance: f64,
    pub max_robot_steps: usize,
}

impl PlannerConfig {
    /// Defaults for a map of `map_side` cells of `cell_size` meters: a
    /// four-cell scan radius, 360 rays, a 9x9 grid, half-cell goal tolerance
    /// and a budget of ten steps per map cell along a side.
    pub fn new(cell_size: f64, map_side: usize) -> Self {
        let grid = GridSpec::new(cell_size, 4);
        Self {
            lidar_radius: 4.0 * cell_size,
            n_rays: 360,
            grid,
            weights: CostWeights::default(),
            aco: AcoParams::default(),
            apf: ApfParams::for_cell_size(cell_size),
            goal_tolerance: 0.5 * cell_size,
            max_robot_steps: 10 * map_side,
        }
    }

    /// The ant colony parameters with the mode a planner kind implies.
    pub fn aco_for(&self, kind: PlannerKind) -> AcoParams {
        match kind {
            PlannerKind::ConventionalAco => self.aco.clone().with_mode(AcoMode::Conventional),
            _ => self.aco.clone().with_mode(AcoMode::Improved),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerState {
    pub pose: Pose,
    pub step_index: usize,
    /// Executed trajectory, starting with the initial position.
    pub desired_path: Vec<Point>,
    pub status: Status,
}

impl PlannerState {
    pub fn new(pose: Pose) -> Self {
        Self {
            pose,
            step_index: 0,
            desired_path: vec![pose.position()],
            status: Status::Running,
        }
    }

    fn cell(&self, cell_size: f64) -> WorldCell {
        WorldCell::containing(&self.pose.position(), cell_size)
    }
}

/// What one cycle saw and decided.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord {
    pub cycle: usize,
    /// Pose after the executed hop.
    pub pose: Pose,
    pub subgoal: Option<Point>,
    /// World-frame centers of the planned sub-path, robot cell first.
    pub subpath: Vec<Point>,
    pub dist_to_goal: f64,
    /// Best-so-far objective per ant colony iteration.
    pub aco_series: Vec<f64>,
}

/// World cell of the local cell `target`, given the robot's world cell.
fn world_cell_of(robot: WorldCell, grid: &LocalGrid, target: Cell) -> WorldCell {
    let h = grid.half_extent() as i64;
    robot.offset(target.col as i64 - h, target.row as i64 - h)
}

/// The goal's local cell when it lies inside the grid, is free and reachable.
fn terminal_capture(grid: &LocalGrid, goal: Point) -> Option<Cell> {
    let cell = grid.cell_of(&goal)?;
    if grid.state(cell) != CellState::Free {
        return None;
    }
    grid.reachable()[cell.index(grid.side())].then_some(cell)
}

/// One cycle against the world snapshot `world`.
pub fn plan_cycle<R: Rng>(
    world: &WorldMap,
    state: &PlannerState,
    goal: Point,
    kind: PlannerKind,
    config: &PlannerConfig,
    rng: &mut R,
) -> (PlannerState, Option<CycleRecord>) {
    let mut next = state.clone();
    if state.status != Status::Running {
        return (next, None);
    }
    if state.step_index >= config.max_robot_steps {
        next.status = Status::StepBudgetExhausted;
        return (next, None);
    }
    let cs = world.cell_size();
    let robot = state.cell(cs);
    let scan = match simulate_scan(world, &state.pose, config.lidar_radius, config.n_rays) {
        Ok(s) => s,
        Err(ScanError::PoseInObstacle { .. }) => {
            next.status = Status::CollisionDetected;
            return (next, None);
        }
        Err(_) => {
            next.status = Status::Stuck;
            return (next, None);
        }
    };
    let grid = match build_local_grid_with(&scan, &config.grid) {
        Ok(g) => g,
        Err(_) => {
            next.status = Status::Stuck;
            return (next, None);
        }
    };

    let mut subgoal = None;
    let mut subpath = Vec::new();
    let mut series = Vec::new();
    let hop: Cell = match kind {
        PlannerKind::Apf => match apf_step(&grid, goal, &config.apf) {
            Ok(c) => c,
            Err(ApfError::LocalMinimum) => {
                next.status = Status::LocalMinimum;
                return (next, None);
            }
            Err(_) => {
                next.status = Status::Stuck;
                return (next, None);
            }
        },
        PlannerKind::Proposed | PlannerKind::ConventionalAco => {
            let target = match terminal_capture(&grid, goal) {
                Some(c) => c,
                None => {
                    let picked = candidate_cells(&grid).ok().and_then(|cands| {
                        select_subgoal(&grid, &cands, &state.pose, goal, &config.weights).ok()
                    });
                    match picked {
                        Some(sg) => sg.cell,
                        None => {
                            next.status = Status::Stuck;
                            return (next, None);
                        }
                    }
                }
            };
            subgoal = Some(world_cell_of(robot, &grid, target).center(cs));
            let params = config.aco_for(kind);
            match plan_subpath(&grid, grid.robot_cell(), target, &params, rng) {
                Ok(out) => {
                    subpath = out
                        .best
                        .cells
                        .iter()
                        .map(|&c| world_cell_of(robot, &grid, c).center(cs))
                        .collect();
                    series = out.series;
                    out.best.cells[1]
                }
                Err(_) => {
                    next.status = Status::Stuck;
                    return (next, None);
                }
            }
        }
    };

    let dir = grid
        .robot_cell()
        .direction_to(&hop)
        .expect("the executed hop is adjacent to the robot");
    let cell = world_cell_of(robot, &grid, hop);
    let p = cell.center(cs);
    next.pose = Pose::new(p.x, p.y, dir.angle());
    next.step_index += 1;
    next.desired_path.push(p);
    let dist = p.distance(&goal);
    if dist <= config.goal_tolerance {
        next.status = Status::GoalReached;
    }
    let record = CycleRecord {
        cycle: next.step_index,
        pose: next.pose,
        subgoal,
        subpath,
        dist_to_goal: dist,
        aco_series: series,
    };
    (next, Some(record))
}

/// A complete problem: world, endpoints, planner and its configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub world: WorldMap,
    pub start: Pose,
    pub goal: Point,
    pub seed: u64,
    pub planner: PlannerKind,
    pub config: PlannerConfig,
}

impl Scenario {
    /// Start pose at the center of `start`, goal at the center of `goal`.
    pub fn new(world: WorldMap, start: WorldCell, psi: f64, goal: WorldCell) -> Self {
        let cs = world.cell_size();
        let side = world.width().max(world.height());
        let s = start.center(cs);
        Self {
            start: Pose::new(s.x, s.y, psi),
            goal: goal.center(cs),
            seed: 0,
            planner: PlannerKind::Proposed,
            config: PlannerConfig::new(cs, side),
            world,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub planner: PlannerKind,
    pub seed: u64,
    pub trajectory: Vec<Pose>,
    pub cycles: Vec<CycleRecord>,
    /// World tick at which each trajectory pose was occupied.
    pub ticks: Vec<u64>,
    pub metrics: RunMetrics,
}

/// Runs the scenario's own planner with its own seed.
pub fn run(scenario: &Scenario) -> RunResult {
    run_with(scenario, scenario.planner, scenario.seed)
}

/// Runs until the goal is reached or a failure verdict. Movers advance one
/// tick before every scan; a robot cell shared with an obstacle at any tick
/// ends the run with [`Status::CollisionDetected`].
pub fn run_with(scenario: &Scenario, kind: PlannerKind, seed: u64) -> RunResult {
    let started = Instant::now();
    let cs = scenario.world.cell_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = scenario.world.clone();
    let mut state = PlannerState::new(scenario.start);
    let mut trajectory = vec![scenario.start];
    let mut ticks = vec![world.tick()];
    let mut cycles = Vec::new();

    if world.is_blocked(state.cell(cs)) {
        state.status = Status::CollisionDetected;
    } else if scenario.start.position().distance(&scenario.goal) <= scenario.config.goal_tolerance {
        state.status = Status::GoalReached;
    }
    while state.status == Status::Running {
        if state.step_index >= scenario.config.max_robot_steps {
            state.status = Status::StepBudgetExhausted;
            break;
        }
        world = world.advance();
        if world.is_blocked(state.cell(cs)) {
            state.status = Status::CollisionDetected;
            break;
        }
        let (next, record) = plan_cycle(&world, &state, scenario.goal, kind, &scenario.config, &mut rng);
        state = next;
        if let Some(r) = record {
            trajectory.push(r.pose);
            ticks.push(world.tick());
            cycles.push(r);
            if world.is_blocked(state.cell(cs)) {
                state.status = Status::CollisionDetected;
            }
        }
    }

    let mut dist_series = vec![scenario.start.position().distance(&scenario.goal)];
    dist_series.extend(cycles.iter().map(|c| c.dist_to_goal));
    let metrics = RunMetrics {
        path_length: path_length(&trajectory),
        corners: corner_count(&trajectory, cs),
        cycles: cycles.len(),
        dist_series,
        aco_series: cycles.iter().map(|c| c.aco_series.clone()).collect(),
        status: state.status,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    RunResult {
        planner: kind,
        seed,
        trajectory,
        cycles,
        ticks,
        metrics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor(len: usize) -> Scenario {
        // A one-cell-wide east-west corridor with walls above and below.
        let (w, h) = (len + 2, 5);
        let mut cells = vec![true; w * h];
        for c in 1..=len {
            cells[2 * w + c] = false;
        }
        let world = WorldMap::new(w, h, 1.0, cells, vec![]).unwrap();
        let mut s = Scenario::new(world, WorldCell::new(1, 2), 0.0, WorldCell::new(len as i64, 2));
        s.config.grid.inflation_rings = 0;
        s
    }

    #[test]
    fn goal_one_cell_away() {
        let world = WorldMap::empty(12, 12, 1.0);
        let s = Scenario::new(world, WorldCell::new(5, 5), 0.0, WorldCell::new(6, 5));
        let r = run(&s);
        assert_eq!(r.metrics.status, Status::GoalReached);
        assert_eq!(r.metrics.cycles, 1);
        assert_eq!(r.trajectory.last().unwrap().position(), Point::new(6.5, 5.5));
    }

    #[test]
    fn straight_corridor_one_cell_per_cycle() {
        let s = corridor(10);
        let r = run(&s);
        assert_eq!(r.metrics.status, Status::GoalReached);
        assert_eq!(r.metrics.cycles, 9);
        for (i, p) in r.trajectory.iter().enumerate() {
            assert_eq!(p.position(), Point::new(1.5 + i as f64, 2.5));
            if i > 0 {
                assert_eq!(p.psi, 0.0);
            }
        }
        assert_eq!(r.metrics.path_length, 9.0);
        assert_eq!(r.metrics.corners, 0);
    }

    #[test]
    fn sealed_room_is_stuck() {
        let mut world = WorldMap::empty(20, 20, 1.0);
        for i in 2..=8 {
            for c in [WorldCell::new(i, 2), WorldCell::new(i, 8), WorldCell::new(2, i), WorldCell::new(8, i)] {
                world.set_static(c, true).unwrap();
            }
        }
        let s = Scenario::new(world, WorldCell::new(5, 5), 0.0, WorldCell::new(16, 16));
        let r = run(&s);
        assert!(
            matches!(r.metrics.status, Status::Stuck | Status::StepBudgetExhausted),
            "{:?}",
            r.metrics.status
        );
        assert!(r.metrics.cycles <= s.config.max_robot_steps);
    }

    #[test]
    fn same_seed_same_run() {
        let mut world = WorldMap::empty(16, 16, 1.0);
        for r in 4..11 {
            world.set_static(WorldCell::new(8, r), true).unwrap();
        }
        let mut s = Scenario::new(world, WorldCell::new(2, 7), 0.0, WorldCell::new(13, 7));
        s.seed = 11;
        let a = run(&s);
        let b = run(&s);
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.metrics.aco_series, b.metrics.aco_series);
        assert_eq!(a.metrics.status, Status::GoalReached);
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = corridor(10);
        s.config.max_robot_steps = 3;
        let r = run(&s);
        assert_eq!(r.metrics.status, Status::StepBudgetExhausted);
        assert_eq!(r.metrics.cycles, 3);
    }

    #[test]
    fn start_inside_obstacle_is_a_collision() {
        let mut world = WorldMap::empty(8, 8, 1.0);
        world.set_static(WorldCell::new(3, 3), true).unwrap();
        let s = Scenario::new(world, WorldCell::new(3, 3), 0.0, WorldCell::new(6, 6));
        assert_eq!(run(&s).metrics.status, Status::CollisionDetected);
    }

    #[test]
    fn planner_names_round_trip() {
        for k in PlannerKind::ALL {
            assert_eq!(k.name().parse::<PlannerKind>(), Ok(k));
        }
        assert!("bfo".parse::<PlannerKind>().is_err());
    }
}
