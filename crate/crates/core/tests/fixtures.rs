use std::fs;
use std::path::{Path, PathBuf};

use replan_core::metrics::corner_count;
use replan_core::{load_scenario, run, run_with, PlannerKind, Scenario, Status, WorldCell};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn fixture(name: &str) -> Scenario {
    load_scenario(&dir().join(name)).unwrap()
}

#[test]
fn every_shipped_map_parses() {
    let mut n = 0;
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "map") {
            load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 6);
}

#[test]
fn static_run_invariants() {
    let s = fixture("multi_obstacle.map");
    let r = run(&s);
    let m = &r.metrics;
    assert_eq!(m.status, Status::GoalReached);
    assert!(*m.dist_series.last().unwrap() <= s.config.goal_tolerance);
    assert_eq!(m.dist_series.len(), r.trajectory.len());
    assert_eq!(m.corners, corner_count(&r.trajectory, s.world.cell_size()));
    assert_eq!(m.cycles, r.cycles.len());

    let cs = s.world.cell_size();
    for (i, c) in r.cycles.iter().enumerate() {
        let before = r.trajectory[i].position();
        let after = c.pose.position();
        // One hop of the planned sub-path is executed per cycle.
        assert!(c.subpath.len() >= 2);
        assert!(c.subpath[0].distance(&before) < 1e-9);
        assert!(c.subpath[1].distance(&after) < 1e-9);
        let a = WorldCell::containing(&before, cs);
        let b = WorldCell::containing(&after, cs);
        assert!(a.is_adjacent_or_same(&b) && a != b);
        // Heading follows the executed hop.
        let heading = (after.y - before.y).atan2(after.x - before.x);
        assert!((heading - c.pose.psi).abs() < 1e-9, "cycle {}", c.cycle);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let s = fixture("crossing.map");
    let a = run_with(&s, PlannerKind::Proposed, 11);
    let b = run_with(&s, PlannerKind::Proposed, 11);
    assert_eq!(a.trajectory, b.trajectory);
    assert_eq!(a.metrics.aco_series, b.metrics.aco_series);
}

#[test]
fn crossing_movers_are_dodged() {
    let s = fixture("crossing.map");
    let r = run(&s);
    assert_eq!(r.metrics.status, Status::GoalReached);
    let cs = s.world.cell_size();
    let start_row = WorldCell::containing(&s.start.position(), cs).row;
    assert!(
        r.trajectory.iter().any(|p| WorldCell::containing(&p.position(), cs).row != start_row),
        "expected a deviation from the straight route"
    );
    for (p, t) in r.trajectory.iter().zip(&r.ticks) {
        assert!(!s.world.at_tick(*t).is_blocked(WorldCell::containing(&p.position(), cs)));
    }
}

#[test]
fn failures_end_with_a_verdict() {
    let sealed = run(&fixture("sealed_room.map"));
    assert_ne!(sealed.metrics.status, Status::GoalReached);
    assert_ne!(sealed.metrics.status, Status::CollisionDetected);

    let trap = fixture("u_trap.map");
    let apf = run_with(&trap, PlannerKind::Apf, trap.seed);
    assert_eq!(apf.metrics.status, Status::LocalMinimum);
    assert!(apf.metrics.aco_series.iter().all(Vec::is_empty));
}

#[test]
fn conventional_and_proposed_share_the_loop() {
    let s = fixture("corridor.map");
    for kind in [PlannerKind::Proposed, PlannerKind::ConventionalAco] {
        let r = run_with(&s, kind, 4);
        assert_eq!(r.planner, kind);
        assert_eq!(r.metrics.status, Status::GoalReached);
        assert!(r.metrics.aco_series.iter().all(|v| v.len() == s.config.aco.n_iters));
    }
}
