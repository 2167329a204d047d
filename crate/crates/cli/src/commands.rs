use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use replan_core::experiment::{parse_groups, run_repeats};
use replan_core::metrics::{aco_series_csv, aggregate_csv, summary_text, trajectory_csv};
use replan_core::planner::run as run_scenario;
use replan_core::{aggregate, load_scenario, PlannerKind, RunResult, Scenario, Status};

use crate::{svg, CompareArgs, Common, PlotFlag, RunArgs, SweepArgs};

impl PlotFlag {
    fn enabled(&self) -> bool {
        !self.no_plot
    }
}

/// Worker threads from `REPLAN_THREADS`: `Some(0)` means serial.
fn thread_setting() -> Result<Option<usize>> {
    match std::env::var("REPLAN_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .with_context(|| format!("REPLAN_THREADS must be a number, got '{v}'")),
        _ => Ok(None),
    }
}

/// Runs `f` under the configured thread policy; the flag says whether
/// parallel work is allowed at all.
fn with_threads<T: Send>(f: impl FnOnce(bool) -> T + Send) -> Result<T> {
    match thread_setting()? {
        Some(0) => Ok(f(false)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(|| f(true)))
        }
        None => Ok(f(true)),
    }
}

fn load(common: &Common) -> Result<Scenario> {
    let mut s = load_scenario(&common.scenario)
        .map_err(|e| anyhow::anyhow!("{}: {e}", common.scenario.display()))?;
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    fs::create_dir_all(&common.out)
        .with_context(|| format!("cannot create {}", common.out.display()))?;
    Ok(s)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn parse_planners(list: &str) -> Result<Vec<PlannerKind>> {
    let kinds: Vec<PlannerKind> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    if kinds.is_empty() {
        bail!("no planner given");
    }
    Ok(kinds)
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::GoalReached => 0,
        Status::CollisionDetected => 3,
        _ => 2,
    }
}

fn subgoals_csv(run: &RunResult) -> String {
    let mut out = String::from("cycle,subgoal_x,subgoal_y\n");
    for c in &run.cycles {
        if let Some(p) = c.subgoal {
            writeln!(out, "{},{},{}", c.cycle, p.x, p.y).unwrap();
        }
    }
    out
}

pub fn run(args: &RunArgs) -> Result<u8> {
    let mut scenario = load(&args.common)?;
    if let Some(p) = &args.planner {
        scenario.planner = p.parse().map_err(anyhow::Error::msg)?;
    }
    let result = with_threads(|par| {
        let mut s = scenario.clone();
        s.config.aco.parallel = par;
        run_scenario(&s)
    })?;
    let out = &args.common.out;
    write(out, "trajectory.csv", &trajectory_csv(&result.trajectory, scenario.goal))?;
    write(out, "aco_series.csv", &aco_series_csv(&result.metrics.aco_series))?;
    write(out, "subgoals.csv", &subgoals_csv(&result))?;
    let summary = format!(
        "scenario: {}\nplanner: {}\nseed: {}\n{}",
        args.common.scenario.display(),
        result.planner,
        result.seed,
        summary_text(&result.metrics)
    );
    write(out, "summary.txt", &summary)?;
    if args.plot.enabled() {
        write(out, "plot.svg", &svg::render(&scenario, &result))?;
    }
    println!(
        "{}: {} after {} cycles, path {:.3} m, {} corners",
        result.planner,
        result.metrics.status,
        result.metrics.cycles,
        result.metrics.path_length,
        result.metrics.corners
    );
    Ok(exit_code(result.metrics.status))
}

pub fn compare(args: &CompareArgs) -> Result<u8> {
    let kinds = parse_planners(&args.planner)?;
    if args.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    if !(args.speed > 0.0 && args.speed.is_finite()) {
        bail!("--speed must be positive");
    }
    let scenario = load(&args.common)?;
    let out = &args.common.out;

    let mut table = String::from("planner,runs,goal_reached,optimal_length,average_length,average_time\n");
    let mut raw = String::from("planner,seed,status,path_length,corners,cycles\n");
    let mut timing = String::new();
    for kind in kinds {
        let started = std::time::Instant::now();
        let runs = with_threads(|par| {
            let mut s = scenario.clone();
            s.config.aco.parallel = par;
            run_repeats(&s, kind, args.repeats, par)
        })?;
        let wall = started.elapsed().as_secs_f64();

        let reached: Vec<f64> = runs
            .iter()
            .filter(|r| r.metrics.status == Status::GoalReached)
            .map(|r| r.metrics.path_length)
            .collect();
        let (best, avg) = if reached.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            let best = reached.iter().copied().fold(f64::INFINITY, f64::min);
            (best, reached.iter().sum::<f64>() / reached.len() as f64)
        };
        writeln!(
            table,
            "{kind},{},{},{best},{avg},{}",
            runs.len(),
            reached.len(),
            avg / args.speed
        )
        .unwrap();

        let mut dist = String::from("seed,cycle,dist_to_goal\n");
        let mut series = String::from("seed,cycle,iteration,best\n");
        for r in &runs {
            let m = &r.metrics;
            writeln!(raw, "{kind},{},{},{},{},{}", r.seed, m.status, m.path_length, m.corners, m.cycles).unwrap();
            for (c, d) in m.dist_series.iter().enumerate() {
                writeln!(dist, "{},{c},{d}", r.seed).unwrap();
            }
            for (c, s) in m.aco_series.iter().enumerate() {
                for (i, v) in s.iter().enumerate() {
                    writeln!(series, "{},{},{},{v}", r.seed, c + 1, i + 1).unwrap();
                }
            }
        }
        write(out, &format!("dist_{kind}.csv"), &dist)?;
        if kind != PlannerKind::Apf {
            write(out, &format!("aco_series_{kind}.csv"), &series)?;
        }
        if args.plot.enabled() {
            write(out, &format!("plot_{kind}.svg"), &svg::render(&scenario, &runs[0]))?;
        }
        writeln!(timing, "{kind}: {:.3} s wall clock for {} runs", wall, runs.len()).unwrap();
        println!("{kind}: {}/{} reached the goal, average length {avg:.3} m", reached.len(), runs.len());
    }
    write(out, "compare.csv", &table)?;
    write(out, "compare_runs.csv", &raw)?;
    write(out, "timing.txt", &timing)?;
    Ok(0)
}

pub fn sweep(args: &SweepArgs) -> Result<u8> {
    if args.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    let text = fs::read_to_string(&args.groups)
        .with_context(|| format!("cannot read {}", args.groups.display()))?;
    let groups = parse_groups(&text).map_err(|e| anyhow::anyhow!("{}: {e}", args.groups.display()))?;
    if groups.is_empty() {
        bail!("{}: no parameter groups", args.groups.display());
    }
    let scenario = load(&args.common)?;
    let out = &args.common.out;

    let mut table = String::from(
        "group,alpha,beta,omega,delta,zeta,runs,goal_reached,length_best,length_worst,length_average,corners_best,corners_worst,corners_average\n",
    );
    let mut raw = String::from("group,seed,status,path_length,corners\n");
    for g in &groups {
        let s = g.apply(&scenario);
        let runs = with_threads(|par| {
            let mut s = s.clone();
            s.config.aco.parallel = par;
            run_repeats(&s, s.planner, args.repeats, par)
        })?;
        let metrics: Vec<_> = runs.iter().map(|r| r.metrics.clone()).collect();
        let agg = aggregate(&metrics)?;
        let reached = metrics.iter().filter(|m| m.status == Status::GoalReached).count();
        let w = g.weights;
        writeln!(
            table,
            "{},{},{},{},{},{},{},{reached},{},{},{},{},{},{}",
            g.name,
            w.alpha,
            w.beta,
            w.omega,
            g.delta,
            g.zeta,
            runs.len(),
            agg.path_length.best,
            agg.path_length.worst,
            agg.path_length.average,
            agg.corners.best,
            agg.corners.worst,
            agg.corners.average
        )
        .unwrap();
        for r in &runs {
            writeln!(raw, "{},{},{},{},{}", g.name, r.seed, r.metrics.status, r.metrics.path_length, r.metrics.corners).unwrap();
        }
        write(out, &format!("sweep_{}.csv", g.name), &aggregate_csv(&agg))?;
        println!(
            "{}: average length {:.3} m, average corners {:.2}",
            g.name, agg.path_length.average, agg.corners.average
        );
    }
    write(out, "sweep.csv", &table)?;
    write(out, "sweep_runs.csv", &raw)?;
    Ok(0)
}
