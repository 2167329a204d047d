//! LiDAR scans: polar samples around a pose, sector bookkeeping and a
//! ray-casting scan simulator over a [`WorldMap`].
//!
//! Bearings are measured clockwise from the robot heading, so a sample
//! `(d, θ)` lies at world azimuth `ψ - θ`.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::geometry::{Point, Pose, WorldCell};
use crate::world::WorldMap;

/// Chords shorter than this only graze a cell corner and do not count as a hit.
const GRAZE_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("pose ({x:.3}, {y:.3}) lies outside the world")]
    PoseOutOfBounds { x: f64, y: f64 },
    #[error("pose ({x:.3}, {y:.3}) lies inside an occupied cell")]
    PoseInObstacle { x: f64, y: f64 },
    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),
}

/// One returned LiDAR point: distance `d` (m) and clockwise bearing `theta` in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSample {
    pub d: f64,
    pub theta: f64,
}

/// One revolution of returned samples. Rays that hit nothing produce no sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Scan {
    pub samples: Vec<ScanSample>,
    pub radius: f64,
    pub n_rays: usize,
    pub origin: Pose,
}

impl Scan {
    /// A scan with no returns.
    pub fn empty(origin: Pose, radius: f64, n_rays: usize) -> Self {
        Self {
            samples: Vec::new(),
            radius,
            n_rays,
            origin,
        }
    }
}

/// World position of a sample: `(x_r + d cos(ψ - θ), y_r + d sin(ψ - θ))`.
pub fn polar_to_world(origin: &Pose, sample: &ScanSample) -> Point {
    let a = origin.psi - sample.theta;
    Point::new(
        origin.x + sample.d * a.cos(),
        origin.y + sample.d * a.sin(),
    )
}

/// 1-based sector id of a sample when the revolution is cut into `n_sectors` equal wedges.
pub fn sector_of(sample: &ScanSample, n_sectors: usize) -> usize {
    assert!(n_sectors >= 1, "need at least one sector");
    let width = TAU / n_sectors as f64;
    let theta = sample.theta.rem_euclid(TAU);
    let k = (theta / width).floor() as usize;
    k.min(n_sectors - 1) + 1
}

/// Samples grouped by sector; entry `i` holds sector `i + 1`.
pub fn group_by_sector(scan: &Scan, n_sectors: usize) -> Vec<Vec<ScanSample>> {
    let mut groups = vec![Vec::new(); n_sectors];
    for s in &scan.samples {
        groups[sector_of(s, n_sectors) - 1].push(*s);
    }
    groups
}

/// Casts `n_rays` rays at bearings `2πk / n_rays` and reports the first
/// occupied world cell along each, up to `radius`.
///
/// Cells outside the map are solid. The reported distance is the midpoint of
/// the ray's chord through the hit cell (clamped to `radius`), so that the
/// sample maps back strictly inside that cell.
pub fn simulate_scan(
    world: &WorldMap,
    pose: &Pose,
    radius: f64,
    n_rays: usize,
) -> Result<Scan, ScanError> {
    if !(radius > 0.0 && radius.is_finite()) || n_rays == 0 {
        return Err(ScanError::InvalidConfig(format!(
            "radius {radius}, n_rays {n_rays}"
        )));
    }
    let cs = world.cell_size();
    let start = WorldCell::containing(&pose.position(), cs);
    if !world.in_bounds(start) {
        return Err(ScanError::PoseOutOfBounds {
            x: pose.x,
            y: pose.y,
        });
    }
    if world.is_blocked(start) {
        return Err(ScanError::PoseInObstacle {
            x: pose.x,
            y: pose.y,
        });
    }
    let mut samples = Vec::new();
    for k in 0..n_rays {
        let theta = TAU * k as f64 / n_rays as f64;
        let azimuth = pose.psi - theta;
        if let Some(d) = cast_ray(world, pose.position(), azimuth, radius) {
            samples.push(ScanSample { d, theta });
        }
    }
    Ok(Scan {
        samples,
        radius,
        n_rays,
        origin: *pose,
    })
}

/// Exact grid-line traversal (Amanatides & Woo). Returns the hit distance.
fn cast_ray(world: &WorldMap, origin: Point, azimuth: f64, radius: f64) -> Option<f64> {
    let cs = world.cell_size();
    let (dx, dy) = (azimuth.cos(), azimuth.sin());
    let mut cell = WorldCell::containing(&origin, cs);

    let axis = |pos: f64, dir: f64, idx: i64| -> (i64, f64, f64) {
        if dir > 0.0 {
            let boundary = (idx + 1) as f64 * cs;
            (1, (boundary - pos) / dir, cs / dir)
        } else if dir < 0.0 {
            let boundary = idx as f64 * cs;
            (-1, (boundary - pos) / dir, -cs / dir)
        } else {
            (0, f64::INFINITY, f64::INFINITY)
        }
    };
    let (step_x, mut t_max_x, t_delta_x) = axis(origin.x, dx, cell.col);
    let (step_y, mut t_max_y, t_delta_y) = axis(origin.y, dy, cell.row);

    loop {
        let t_entry;
        if t_max_x < t_max_y {
            t_entry = t_max_x;
            cell.col += step_x;
            t_max_x += t_delta_x;
        } else {
            t_entry = t_max_y;
            cell.row += step_y;
            t_max_y += t_delta_y;
        }
        if t_entry >= radius {
            return None;
        }
        if world.is_blocked(cell) {
            let t_exit = t_max_x.min(t_max_y);
            if t_exit - t_entry > GRAZE_EPS {
                return Some((0.5 * (t_entry + t_exit)).min(radius));
            }
            // Only touched a corner: keep walking.
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn polar_to_world_identity_cases() {
        let p = polar_to_world(&Pose::new(0.0, 0.0, 0.0), &ScanSample { d: 1.0, theta: 0.0 });
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        let p = polar_to_world(
            &Pose::new(2.0, 3.0, FRAC_PI_2),
            &ScanSample {
                d: 2.0,
                theta: FRAC_PI_2,
            },
        );
        assert!((p.x - 4.0).abs() < 1e-12 && (p.y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn polar_to_world_general_case() {
        // Frozen from a standalone evaluation of x = 1 + 5cos(-0.7), y = 1 + 5sin(-0.7).
        let p = polar_to_world(&Pose::new(1.0, 1.0, 0.3), &ScanSample { d: 5.0, theta: 1.0 });
        assert!((p.x - 4.824_210_936_422_443).abs() < 1e-12, "{}", p.x);
        assert!((p.y - -2.221_088_436_188_455).abs() < 1e-12, "{}", p.y);
    }

    #[test]
    fn sectors_at_the_edges() {
        assert_eq!(sector_of(&ScanSample { d: 1.0, theta: 0.0 }, 8), 1);
        let below = ScanSample {
            d: 1.0,
            theta: TAU - 1e-12,
        };
        assert_eq!(sector_of(&below, 8), 8);
        assert_eq!(sector_of(&ScanSample { d: 1.0, theta: PI }, 8), 5);
        assert_eq!(sector_of(&ScanSample { d: 1.0, theta: 3.0 }, 1), 1);
    }

    #[test]
    fn empty_world_returns_nothing() {
        let w = WorldMap::empty(40, 40, 1.0);
        let s = simulate_scan(&w, &Pose::new(20.5, 20.5, 0.3), 4.0, 360).unwrap();
        assert!(s.samples.is_empty());
    }

    #[test]
    fn wall_beyond_radius_is_invisible() {
        let mut w = WorldMap::empty(40, 40, 1.0);
        for r in 0..40 {
            w.set_static(WorldCell::new(30, r), true).unwrap();
        }
        let s = simulate_scan(&w, &Pose::new(20.5, 20.5, 0.0), 4.0, 360).unwrap();
        assert!(s.samples.is_empty());
    }

    #[test]
    fn rejects_bad_poses() {
        let mut w = WorldMap::empty(5, 5, 1.0);
        w.set_static(WorldCell::new(2, 2), true).unwrap();
        assert!(matches!(
            simulate_scan(&w, &Pose::new(2.5, 2.5, 0.0), 3.0, 8),
            Err(ScanError::PoseInObstacle { .. })
        ));
        assert!(matches!(
            simulate_scan(&w, &Pose::new(-0.5, 2.5, 0.0), 3.0, 8),
            Err(ScanError::PoseOutOfBounds { .. })
        ));
    }

    #[test]
    fn single_cell_ahead() {
        // Robot at the center of cell (10, 10) facing +x; occupied cell two cells ahead.
        let mut w = WorldMap::empty(21, 21, 1.0);
        w.set_static(WorldCell::new(12, 10), true).unwrap();
        let pose = Pose::new(10.5, 10.5, 0.0);
        let s = simulate_scan(&w, &pose, 4.0, 360).unwrap();
        assert!(!s.samples.is_empty());
        // Cell spans x in [12, 13], y in [10, 11]: bearings within atan(0.5/1.5).
        let half_width = (0.5f64 / 1.5).atan();
        for smp in &s.samples {
            let off = if smp.theta > PI { TAU - smp.theta } else { smp.theta };
            assert!(off <= half_width + 1e-9, "theta {}", smp.theta);
            assert!((smp.d - 2.0).abs() <= 0.5 * 2f64.sqrt(), "d {}", smp.d);
            let p = polar_to_world(&pose, smp);
            assert_eq!(WorldCell::containing(&p, 1.0), WorldCell::new(12, 10));
        }
        // Every ray strictly inside the cell's angular extent must have hit.
        let expected = (0..360)
            .filter(|k| {
                let t = TAU * *k as f64 / 360.0;
                let off = if t > PI { TAU - t } else { t };
                off < half_width - 1e-9
            })
            .count();
        assert_eq!(s.samples.len(), expected);
    }

    #[test]
    fn map_edge_is_solid() {
        let w = WorldMap::empty(5, 5, 1.0);
        let s = simulate_scan(&w, &Pose::new(0.5, 2.5, 0.0), 2.0, 4).unwrap();
        // theta = π looks along world azimuth -π (west) and meets the edge at 0.5.
        assert_eq!(s.samples.len(), 1);
        assert!((s.samples[0].theta - PI).abs() < 1e-12);
        assert!((s.samples[0].d - 1.0).abs() < 1e-12);
    }
}
