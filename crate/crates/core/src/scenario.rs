//! Line-oriented scenario files.
//!
//! ```text
//! format 1
//! ; comments start with a semicolon
//! cellsize 1.5
//! start 1 1 90          ; col row heading in degrees
//! goal 10 10
//! seed 7
//! planner proposed      ; proposed | conventional | apf
//! lidar 6 360           ; radius (m), rays
//! grid 4 1 36           ; half extent, inflation rings, sectors
//! weights 4 1.8 1       ; alpha beta omega
//! score 0.7 0.3         ; delta zeta
//! aco 1 5 0.3 1 20 50   ; phi gamma rho Q ants iterations
//! tau0 1
//! elite 19
//! max_steps 324         ; per-ant step cap
//! apf 1 100 3           ; k_att k_rep d0 (m)
//! goal_tolerance 0.75
//! max_robot_steps 270
//! map 12 12             ; width height, followed by `height` rows, top row first
//! ............
//! ...
//! mover 2 pingpong      ; ticks per move, loop | pingpong | stop
//! footprint 0 0         ; optional, defaults to the single cell 0 0
//! wp 3 4
//! wp 3 5
//! ```
//!
//! Only `format`, `cellsize`, `start`, `goal` and `map` are required.

use std::fmt;
use std::path::Path;

use crate::aco::AcoParams;
use crate::baselines::ApfParams;
use crate::geometry::WorldCell;
use crate::planner::{PlannerConfig, PlannerKind, Scenario};
use crate::subgoal::CostWeights;
use crate::world::{MoverPolicy, MovingObstacle, WorldMap};

/// A parse or validation failure, tied to a 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(0, format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
}

struct MoverDraft {
    line: usize,
    ticks_per_move: u32,
    policy: MoverPolicy,
    footprint: Vec<(i64, i64)>,
    waypoints: Vec<WorldCell>,
}

/// Numbers following the key on one line.
struct Args<'a> {
    line: usize,
    key: &'a str,
    rest: Vec<&'a str>,
}

impl<'a> Args<'a> {
    fn expect(&self, n: usize) -> Result<(), ParseError> {
        if self.rest.len() == n {
            Ok(())
        } else {
            Err(err(
                self.line,
                format!("'{}' takes {n} value(s), got {}", self.key, self.rest.len()),
            ))
        }
    }

    fn get<T: std::str::FromStr>(&self, i: usize) -> Result<T, ParseError> {
        self.rest[i]
            .parse()
            .map_err(|_| err(self.line, format!("'{}': bad value '{}'", self.key, self.rest[i])))
    }

    fn positive(&self, i: usize) -> Result<f64, ParseError> {
        let v: f64 = self.get(i)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(err(self.line, format!("'{}': value must be > 0, got {v}", self.key)))
        }
    }
}

#[derive(Default)]
struct Draft {
    format: bool,
    cellsize: Option<(usize, f64)>,
    start: Option<(usize, i64, i64, f64)>,
    goal: Option<(usize, i64, i64)>,
    seed: Option<u64>,
    planner: Option<PlannerKind>,
    lidar: Option<(usize, f64, usize)>,
    grid: Option<(usize, usize, usize, usize)>,
    weights: Option<CostWeights>,
    score: Option<(f64, f64)>,
    aco: Option<(f64, f64, f64, f64, usize, usize)>,
    aco_line: usize,
    tau0: Option<f64>,
    elite: Option<usize>,
    max_steps: Option<usize>,
    apf: Option<ApfParams>,
    goal_tolerance: Option<f64>,
    max_robot_steps: Option<usize>,
    map: Option<(usize, usize, usize, Vec<bool>)>,
    movers: Vec<MoverDraft>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut d = Draft::default();
    let mut i = 0;
    while i < lines.len() {
        let n = i + 1;
        let content = lines[i].split(';').next().unwrap_or("").trim();
        i += 1;
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let key = words.next().expect("non-empty line");
        let a = Args {
            line: n,
            key,
            rest: words.collect(),
        };
        if !d.format {
            if key == "format" && a.rest == ["1"] {
                d.format = true;
                continue;
            }
            return Err(err(n, "expected 'format 1' as the first line"));
        }
        match key {
            "format" => return Err(err(n, "duplicate 'format' line")),
            "cellsize" => {
                a.expect(1)?;
                d.cellsize = Some((n, a.positive(0)?));
            }
            "start" => {
                a.expect(3)?;
                d.start = Some((n, a.get(0)?, a.get(1)?, a.get(2)?));
            }
            "goal" => {
                a.expect(2)?;
                d.goal = Some((n, a.get(0)?, a.get(1)?));
            }
            "seed" => {
                a.expect(1)?;
                d.seed = Some(a.get(0)?);
            }
            "planner" => {
                a.expect(1)?;
                d.planner = Some(a.rest[0].parse().map_err(|e: String| err(n, e))?);
            }
            "lidar" => {
                a.expect(2)?;
                d.lidar = Some((n, a.positive(0)?, a.get(1)?));
            }
            "grid" => {
                a.expect(3)?;
                d.grid = Some((n, a.get(0)?, a.get(1)?, a.get(2)?));
            }
            "weights" => {
                a.expect(3)?;
                let w = CostWeights::new(a.get(0)?, a.get(1)?, a.get(2)?)
                    .map_err(|e| err(n, e.to_string()))?;
                d.weights = Some(w);
            }
            "score" => {
                a.expect(2)?;
                d.score = Some((a.get(0)?, a.get(1)?));
                d.aco_line = d.aco_line.max(n);
            }
            "aco" => {
                a.expect(6)?;
                d.aco = Some((a.get(0)?, a.get(1)?, a.get(2)?, a.get(3)?, a.get(4)?, a.get(5)?));
                d.aco_line = d.aco_line.max(n);
            }
            "tau0" => {
                a.expect(1)?;
                d.tau0 = Some(a.positive(0)?);
            }
            "elite" => {
                a.expect(1)?;
                d.elite = Some(a.get(0)?);
                d.aco_line = d.aco_line.max(n);
            }
            "max_steps" => {
                a.expect(1)?;
                d.max_steps = Some(a.get(0)?);
            }
            "apf" => {
                a.expect(3)?;
                d.apf = Some(ApfParams {
                    k_att: a.positive(0)?,
                    k_rep: a.positive(1)?,
                    d0: a.positive(2)?,
                });
            }
            "goal_tolerance" => {
                a.expect(1)?;
                d.goal_tolerance = Some(a.positive(0)?);
            }
            "max_robot_steps" => {
                a.expect(1)?;
                d.max_robot_steps = Some(a.get(0)?);
            }
            "map" => {
                a.expect(2)?;
                if d.map.is_some() {
                    return Err(err(n, "duplicate 'map' block"));
                }
                let (w, h): (usize, usize) = (a.get(0)?, a.get(1)?);
                if w == 0 || h == 0 {
                    return Err(err(n, "map must be at least 1x1"));
                }
                let mut cells = vec![false; w * h];
                for k in 0..h {
                    let ln = i + 1;
                    let row = lines
                        .get(i)
                        .map(|l| l.trim())
                        .ok_or_else(|| err(ln, format!("map ends after {k} of {h} rows")))?;
                    i += 1;
                    if row.chars().count() != w {
                        return Err(err(
                            ln,
                            format!("map row has {} cells, expected {w}", row.chars().count()),
                        ));
                    }
                    let r = h - 1 - k;
                    for (c, ch) in row.chars().enumerate() {
                        cells[r * w + c] = match ch {
                            '#' => true,
                            '.' => false,
                            other => return Err(err(ln, format!("unexpected map character '{other}'"))),
                        };
                    }
                }
                d.map = Some((n, w, h, cells));
            }
            "mover" => {
                a.expect(2)?;
                let tpm: u32 = a.get(0)?;
                let policy = a.rest[1].parse().map_err(|e: String| err(n, e))?;
                d.movers.push(MoverDraft {
                    line: n,
                    ticks_per_move: tpm,
                    policy,
                    footprint: vec![],
                    waypoints: vec![],
                });
            }
            "wp" | "footprint" => {
                a.expect(2)?;
                let m = d
                    .movers
                    .last_mut()
                    .ok_or_else(|| err(n, format!("'{key}' outside a mover block")))?;
                let (x, y): (i64, i64) = (a.get(0)?, a.get(1)?);
                if key == "wp" {
                    m.waypoints.push(WorldCell::new(x, y));
                } else {
                    m.footprint.push((x, y));
                }
            }
            other => return Err(err(n, format!("unknown key '{other}'"))),
        }
    }
    finish(d, lines.len())
}

fn finish(d: Draft, last_line: usize) -> Result<Scenario, ParseError> {
    if !d.format {
        return Err(err(last_line.max(1), "missing 'format 1' header"));
    }
    let missing = |what: &str| err(last_line, format!("missing required '{what}'"));
    let (cs_line, cs) = d.cellsize.ok_or_else(|| missing("cellsize"))?;
    let (map_line, w, h, cells) = d.map.ok_or_else(|| missing("map"))?;
    let (s_line, sc, sr, psi_deg) = d.start.ok_or_else(|| missing("start"))?;
    let (g_line, gc, gr) = d.goal.ok_or_else(|| missing("goal"))?;

    let mut movers = Vec::new();
    for m in d.movers {
        let footprint = if m.footprint.is_empty() { vec![(0, 0)] } else { m.footprint };
        let mover = MovingObstacle::new(footprint, m.waypoints, m.ticks_per_move, m.policy)
            .map_err(|e| err(m.line, e.to_string()))?;
        movers.push(mover);
    }
    let world = WorldMap::new(w, h, cs, cells, movers).map_err(|e| err(map_line, e.to_string()))?;
    for (line, what, c, r) in [(s_line, "start", sc, sr), (g_line, "goal", gc, gr)] {
        let cell = WorldCell::new(c, r);
        if !world.in_bounds(cell) {
            return Err(err(line, format!("{what} ({c}, {r}) is outside the {w}x{h} map")));
        }
        if world.is_static_occupied(cell) {
            return Err(err(line, format!("{what} ({c}, {r}) is inside an obstacle")));
        }
    }

    let mut s = Scenario::new(world, WorldCell::new(sc, sr), psi_deg.to_radians(), WorldCell::new(gc, gr));
    let cfg: &mut PlannerConfig = &mut s.config;
    let mut fit_line = cs_line;
    if let Some((line, he, rings, sectors)) = d.grid {
        if he == 0 || sectors == 0 {
            return Err(err(line, "grid half extent and sector count must be >= 1"));
        }
        cfg.grid.half_extent = he;
        cfg.grid.inflation_rings = rings;
        cfg.grid.n_sectors = sectors;
        cfg.lidar_radius = he as f64 * cs;
        fit_line = line;
    }
    if let Some((line, radius, rays)) = d.lidar {
        if rays == 0 {
            return Err(err(line, "lidar needs at least one ray"));
        }
        fit_line = fit_line.max(line);
        cfg.lidar_radius = radius;
        cfg.n_rays = rays;
    }
    if cfg.grid.half_extent as f64 * cs > cfg.lidar_radius + 1e-9 {
        return Err(err(
            fit_line,
            format!(
                "local grid ({} cells of {cs} m) does not fit inside the lidar radius {}",
                cfg.grid.half_extent, cfg.lidar_radius
            ),
        ));
    }
    if let Some(wts) = d.weights {
        cfg.weights = wts;
    }
    let mut aco = AcoParams::default();
    if let Some((phi, gamma, rho, q, ants, iters)) = d.aco {
        aco.phi = phi;
        aco.gamma = gamma;
        aco.rho = rho;
        aco.q = q;
        aco.n_ants = ants;
        aco.n_iters = iters;
    }
    if let Some((delta, zeta)) = d.score {
        aco.delta = delta;
        aco.zeta = zeta;
    }
    if let Some(t) = d.tau0 {
        aco.tau0 = t;
    }
    aco.elite_cutoff = d.elite;
    aco.max_steps = d.max_steps;
    aco.validate().map_err(|e| err(d.aco_line.max(1), e.to_string()))?;
    cfg.aco = aco;
    if let Some(apf) = d.apf {
        cfg.apf = apf;
    }
    if let Some(t) = d.goal_tolerance {
        cfg.goal_tolerance = t;
    }
    if let Some(m) = d.max_robot_steps {
        cfg.max_robot_steps = m;
    }
    if let Some(seed) = d.seed {
        s.seed = seed;
    }
    if let Some(p) = d.planner {
        s.planner = p;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    const SMALL: &str = "format 1
cellsize 0.5
start 1 1 90
goal 4 3
seed 9
map 6 5
######
#....#
#.##.#
#....#
######
mover 3 pingpong
wp 1 3
wp 2 3
";

    #[test]
    fn parses_small_file() {
        let s = parse_scenario(SMALL).unwrap();
        assert_eq!(s.world.width(), 6);
        assert_eq!(s.world.height(), 5);
        assert_eq!(s.world.cell_size(), 0.5);
        // The second map line is row 3.
        assert!(!s.world.is_static_occupied(WorldCell::new(1, 3)));
        assert!(s.world.is_static_occupied(WorldCell::new(2, 2)));
        assert!(s.world.is_static_occupied(WorldCell::new(0, 3)));
        assert_eq!(s.start.position(), Point::new(0.75, 0.75));
        assert!((s.start.psi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(s.goal, Point::new(2.25, 1.75));
        assert_eq!(s.seed, 9);
        assert_eq!(s.planner, PlannerKind::Proposed);
        assert_eq!(s.world.movers().len(), 1);
        assert_eq!(s.world.movers()[0].footprint, vec![(0, 0)]);
        assert_eq!(s.config.lidar_radius, 2.0);
        assert_eq!(s.config.max_robot_steps, 60);
    }

    #[test]
    fn optional_keys_override_defaults() {
        let text = SMALL.replace(
            "seed 9\n",
            "seed 9\nplanner apf\nweights 4 2 3\nscore 1 0\naco 1 2 0.5 2 10 30\ntau0 0.5\nelite 5\ngrid 2 0 12\nlidar 1.5 180\nmax_robot_steps 40\ngoal_tolerance 0.3\napf 2 50 1\n",
        );
        let s = parse_scenario(&text).unwrap();
        let c = &s.config;
        assert_eq!(s.planner, PlannerKind::Apf);
        assert_eq!(c.weights, CostWeights::new(4.0, 2.0, 3.0).unwrap());
        assert_eq!((c.aco.delta, c.aco.zeta), (1.0, 0.0));
        assert_eq!((c.aco.gamma, c.aco.rho, c.aco.q, c.aco.n_ants, c.aco.n_iters), (2.0, 0.5, 2.0, 10, 30));
        assert_eq!(c.aco.tau0, 0.5);
        assert_eq!(c.aco.elite_cutoff, Some(5));
        assert_eq!((c.grid.half_extent, c.grid.inflation_rings, c.grid.n_sectors), (2, 0, 12));
        assert_eq!((c.lidar_radius, c.n_rays), (1.5, 180));
        assert_eq!(c.max_robot_steps, 40);
        assert_eq!(c.goal_tolerance, 0.3);
        assert_eq!(c.apf.k_rep, 50.0);
    }

    fn line_of(text: &str) -> usize {
        parse_scenario(text).unwrap_err().line
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(line_of("cellsize 1\n"), 1);
        assert_eq!(line_of(&SMALL.replace("start 1 1 90", "start 1 x 90")), 3);
        assert_eq!(line_of(&SMALL.replace("goal 4 3", "goal 4")), 4);
        assert_eq!(line_of(&SMALL.replace("#.##.#", "#.#.#")), 9);
        assert_eq!(line_of(&SMALL.replace("#.##.#", "#.#x.#")), 9);
        assert_eq!(line_of(&SMALL.replace("seed 9", "bogus 9")), 5);
        assert_eq!(line_of(&SMALL.replace("wp 2 3", "wp 4 3")), 12);
        assert_eq!(line_of(&SMALL.replace("goal 4 3", "goal 2 2")), 4);
        assert_eq!(line_of(&SMALL.replace("goal 4 3", "goal 9 3")), 4);
        assert_eq!(line_of(&SMALL.replace("seed 9", "planner bfo")), 5);
        assert_eq!(line_of(&SMALL.replace("seed 9", "weights 0 0 0")), 5);
    }

    #[test]
    fn missing_required_key() {
        let e = parse_scenario("format 1\ncellsize 1\n").unwrap_err();
        assert!(e.message.contains("missing"), "{e}");
        assert!(e.to_string().starts_with("line 2:"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("; a scenario\n\n{}", SMALL.replace("seed 9", "seed 9 ; trailing"));
        assert_eq!(parse_scenario(&text).unwrap().seed, 9);
    }
}
