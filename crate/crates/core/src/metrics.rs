//! Run metrics, multi-run aggregates and their text serializations.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{count_turns, Direction, Point, Pose, WorldCell};
use crate::planner::Status;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("cannot aggregate zero runs")]
    EmptyRuns,
    #[error("trajectory line {line}: {message}")]
    BadTrajectory { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunMetrics {
    /// Sum of executed hop lengths, meters.
    pub path_length: f64,
    /// Direction changes along the executed trajectory.
    pub corners: usize,
    pub cycles: usize,
    /// Distance to the goal at the start and after every cycle.
    pub dist_series: Vec<f64>,
    /// Best-so-far ant colony objective per iteration, one list per cycle.
    pub aco_series: Vec<Vec<f64>>,
    pub status: Status,
    pub wall_ms: f64,
}

/// Hop directions between consecutive trajectory poses, snapped to world cells.
pub fn step_directions(trajectory: &[Pose], cell_size: f64) -> Vec<Direction> {
    trajectory
        .windows(2)
        .filter_map(|w| {
            let a = WorldCell::containing(&w[0].position(), cell_size);
            let b = WorldCell::containing(&w[1].position(), cell_size);
            Direction::from_offset(b.col - a.col, b.row - a.row)
        })
        .collect()
}

pub fn path_length(trajectory: &[Pose]) -> f64 {
    trajectory
        .windows(2)
        .map(|w| w[0].position().distance(&w[1].position()))
        .sum()
}

pub fn corner_count(trajectory: &[Pose], cell_size: f64) -> usize {
    count_turns(step_directions(trajectory, cell_size))
}

/// Best (min), worst (max) and mean of one metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub best: f64,
    pub worst: f64,
    pub average: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyRuns);
    }
    Ok(Summary {
        best: values.iter().copied().fold(f64::INFINITY, f64::min),
        worst: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        average: values.iter().sum::<f64>() / values.len() as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregate {
    pub path_length: Summary,
    pub corners: Summary,
}

pub fn aggregate(runs: &[RunMetrics]) -> Result<Aggregate, MetricsError> {
    let lengths: Vec<f64> = runs.iter().map(|r| r.path_length).collect();
    let corners: Vec<f64> = runs.iter().map(|r| r.corners as f64).collect();
    Ok(Aggregate {
        path_length: summarize(&lengths)?,
        corners: summarize(&corners)?,
    })
}

/// `cycle,x,y,psi,dist_to_goal`, one row per pose; row 0 is the start.
pub fn trajectory_csv(trajectory: &[Pose], goal: Point) -> String {
    let mut out = String::from("cycle,x,y,psi,dist_to_goal\n");
    for (i, p) in trajectory.iter().enumerate() {
        let d = p.position().distance(&goal);
        writeln!(out, "{i},{},{},{},{d}", p.x, p.y, p.psi).unwrap();
    }
    out
}

/// Reads a trajectory written by [`trajectory_csv`] or by an external
/// planner. The header must name `x` and `y` columns; `psi` is optional and
/// defaults to 0. Other columns are ignored.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<Pose>, MetricsError> {
    let bad = |line: usize, message: String| MetricsError::BadTrajectory { line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |n: &str| names.iter().position(|h| *h == n);
    let (x, y) = match (col("x"), col("y")) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(bad(1, "header needs x and y columns".into())),
    };
    let psi = col("psi");
    let mut out = Vec::new();
    for (i, raw) in lines {
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        let num = |k: usize| -> Result<f64, MetricsError> {
            let f = fields
                .get(k)
                .ok_or_else(|| bad(i + 1, format!("expected {} fields", names.len())))?;
            f.parse().map_err(|_| bad(i + 1, format!("bad number '{f}'")))
        };
        out.push(Pose::new(num(x)?, num(y)?, psi.map(num).transpose()?.unwrap_or(0.0)));
    }
    Ok(out)
}

/// `cycle,iteration,best`, one row per ant colony iteration.
pub fn aco_series_csv(series: &[Vec<f64>]) -> String {
    let mut out = String::from("cycle,iteration,best\n");
    for (c, s) in series.iter().enumerate() {
        for (i, v) in s.iter().enumerate() {
            writeln!(out, "{},{},{v}", c + 1, i + 1).unwrap();
        }
    }
    out
}

/// `key: value` lines.
pub fn summary_text(m: &RunMetrics) -> String {
    let final_dist = m.dist_series.last().copied().unwrap_or(f64::NAN);
    format!(
        "status: {}\npath_length: {}\ncorners: {}\ncycles: {}\nfinal_dist_to_goal: {final_dist}\nwall_ms: {:.3}\n",
        m.status, m.path_length, m.corners, m.cycles, m.wall_ms
    )
}

/// `metric,best,worst,average` rows for path length and corners.
pub fn aggregate_csv(agg: &Aggregate) -> String {
    let mut out = String::from("metric,best,worst,average\n");
    for (name, s) in [("path_length", agg.path_length), ("corners", agg.corners)] {
        writeln!(out, "{name},{},{},{}", s.best, s.worst, s.average).unwrap();
    }
    out
}
