//! Ant colony sub-path planning over a local grid.
//!
//! Two rule sets share one implementation:
//!
//! * [`AcoMode::Improved`] multiplies the transition weight by a corner
//!   factor, scores finished ants by `delta * length + zeta * corners`, lets
//!   only the `elite_cutoff` best-ranked ants deposit `Q / score`, and every
//!   iteration hands the best path found so far to one ant (preferably one
//!   that failed to arrive).
//! * [`AcoMode::Conventional`] is the textbook rule set: `tau^phi * eta^gamma`
//!   transitions and a `Q / length` deposit from every finished ant.
//!
//! Ant walks within an iteration are independent. Ant `k` draws from
//! substream `k` of a per-iteration ChaCha seed, so serial and parallel
//! construction produce identical colonies.

mod ant;
mod pheromone;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::Cell;
use crate::grid::Passability;

pub use ant::{
    corner_heuristic, heuristic, roulette_select, transition_probabilities, walk, AntPath,
    AntState, Transition,
};
pub use pheromone::PheromoneField;

/// Consecutive colonies without a single arrival tolerated before giving up,
/// while no incumbent path exists yet.
pub const MAX_FAILED_COLONIES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcoError {
    #[error("invalid ACO parameters: {0}")]
    InvalidParams(String),
    #[error("invalid endpoints: {0}")]
    InvalidEndpoints(String),
    #[error("ant stuck at {0:?} with no admissible neighbor")]
    DeadEnd(Cell),
    #[error("path did not reach the sub-goal")]
    UnfinishedPath,
    #[error("no incumbent best path to repair with")]
    NoBestPathYet,
    #[error("no ant reached the sub-goal")]
    NoPathFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcoMode {
    Improved,
    Conventional,
}

/// What angle the corner factor is computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerModel {
    /// Turn between consecutive hops.
    TurnAngle,
    /// Absolute heading of the hop.
    Azimuth,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcoParams {
    /// Pheromone exponent.
    pub phi: f64,
    /// Distance-heuristic exponent.
    pub gamma: f64,
    /// Evaporation rate, in (0, 1).
    pub rho: f64,
    /// Deposit constant.
    pub q: f64,
    pub n_ants: usize,
    pub n_iters: usize,
    /// Score weight on path length.
    pub delta: f64,
    /// Score weight on corner count.
    pub zeta: f64,
    /// Initial pheromone on every edge.
    pub tau0: f64,
    /// Per-ant step cap; `None` means four times the grid's cell count.
    pub max_steps: Option<usize>,
    /// Ranks allowed to deposit; `None` means `n_ants - 1`.
    pub elite_cutoff: Option<usize>,
    pub mode: AcoMode,
    pub corner: CornerModel,
    /// Construct ants on the rayon pool. Results do not depend on this flag.
    pub parallel: bool,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            phi: 1.0,
            gamma: 5.0,
            rho: 0.3,
            q: 1.0,
            n_ants: 20,
            n_iters: 50,
            delta: 0.7,
            zeta: 0.3,
            tau0: 1.0,
            max_steps: None,
            elite_cutoff: None,
            mode: AcoMode::Improved,
            corner: CornerModel::TurnAngle,
            parallel: false,
        }
    }
}

impl AcoParams {
    pub fn conventional() -> Self {
        Self {
            mode: AcoMode::Conventional,
            ..Self::default()
        }
    }

    pub fn with_mode(mut self, mode: AcoMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn elite_cutoff(&self) -> usize {
        self.elite_cutoff.unwrap_or(self.n_ants.saturating_sub(1))
    }

    pub fn max_steps_for<G: Passability + ?Sized>(&self, grid: &G) -> usize {
        self.max_steps.unwrap_or(4 * grid.rows() * grid.cols())
    }

    pub fn validate(&self) -> Result<(), AcoError> {
        let bad = |m: String| Err(AcoError::InvalidParams(m));
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if self.n_ants < 2 {
            return bad(format!("need at least 2 ants, got {}", self.n_ants));
        }
        if self.n_iters == 0 {
            return bad("n_iters must be >= 1".into());
        }
        let cutoff = self.elite_cutoff();
        if cutoff == 0 || cutoff > self.n_ants - 1 {
            return bad(format!(
                "elite_cutoff must lie in 1..={}, got {cutoff}",
                self.n_ants - 1
            ));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return bad(format!("q must be > 0, got {}", self.q));
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return bad(format!("tau0 must be > 0, got {}", self.tau0));
        }
        if !(self.phi.is_finite() && self.gamma.is_finite()) {
            return bad("phi and gamma must be finite".into());
        }
        if !(self.delta >= 0.0 && self.zeta >= 0.0 && self.delta + self.zeta > 0.0) {
            return bad(format!(
                "need delta, zeta >= 0 and delta + zeta > 0, got {} and {}",
                self.delta, self.zeta
            ));
        }
        if self.mode == AcoMode::Improved && self.delta <= 0.0 {
            // A straight path would score zero and deposit Q / 0.
            return bad("improved mode needs delta > 0".into());
        }
        if self.max_steps == Some(0) {
            return bad("max_steps must be >= 1".into());
        }
        Ok(())
    }
}

/// Weighted score `delta * length + zeta * corners` of a finished path.
pub fn score(path: &AntPath, params: &AcoParams) -> Result<f64, AcoError> {
    if !path.reached {
        return Err(AcoError::UnfinishedPath);
    }
    Ok(params.delta * path.length + params.zeta * path.corners as f64)
}

/// The quantity a mode minimizes: the weighted score, or plain length.
pub fn objective(path: &AntPath, params: &AcoParams) -> Result<f64, AcoError> {
    match params.mode {
        AcoMode::Improved => score(path, params),
        AcoMode::Conventional if path.reached => Ok(path.length),
        AcoMode::Conventional => Err(AcoError::UnfinishedPath),
    }
}

/// Evaporates every edge, then lets finished ants deposit.
///
/// Improved mode ranks finished ants by ascending score (ties by ant index)
/// and only ranks `<= elite_cutoff` deposit `Q / score`. Conventional mode
/// lets every finished ant deposit `Q / length`. Unfinished ants never deposit.
pub fn update_pheromone(field: &mut PheromoneField, paths: &[AntPath], params: &AcoParams) {
    field.evaporate(params.rho);
    match params.mode {
        AcoMode::Improved => {
            let mut ranked: Vec<(f64, usize)> = paths
                .iter()
                .enumerate()
                .filter_map(|(k, p)| score(p, params).ok().map(|w| (w, k)))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (w, k) in ranked.into_iter().take(params.elite_cutoff()) {
                field.deposit_path(&paths[k].cells, params.q / w);
            }
        }
        AcoMode::Conventional => {
            for p in paths.iter().filter(|p| p.reached) {
                field.deposit_path(&p.cells, params.q / p.length);
            }
        }
    }
}

/// Overwrites one ant's path with `best`: a random unfinished ant if there is
/// one, otherwise any ant. Returns the index of the overwritten ant.
pub fn repair<R: Rng>(paths: &mut [AntPath], best: &AntPath, rng: &mut R) -> usize {
    assert!(!paths.is_empty(), "no ants to repair");
    let unfinished: Vec<usize> = (0..paths.len()).filter(|&k| !paths[k].reached).collect();
    let s = if unfinished.is_empty() {
        rng.gen_range(0..paths.len())
    } else {
        unfinished[rng.gen_range(0..unfinished.len())]
    };
    paths[s] = best.clone();
    s
}

/// Result of one sub-path search.
#[derive(Clone, Debug, PartialEq)]
pub struct AcoOutcome {
    /// Best finished path, scored.
    pub best: AntPath,
    /// Best objective found so far, after each iteration.
    pub series: Vec<f64>,
    /// Colonies discarded because nobody arrived before any incumbent existed.
    pub retries: usize,
}

/// Builds one colony of `n_ants` walks from a per-colony seed.
pub fn construct_colony<G: Passability + Sync + ?Sized>(
    grid: &G,
    field: &PheromoneField,
    start: Cell,
    goal: Cell,
    params: &AcoParams,
    seed: u64,
) -> Vec<AntPath> {
    let max_steps = params.max_steps_for(grid);
    let one = |k: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        walk(grid, field, start, goal, params, max_steps, &mut rng)
    };
    if params.parallel {
        (0..params.n_ants).into_par_iter().map(one).collect()
    } else {
        (0..params.n_ants).map(one).collect()
    }
}

/// Searches for a path from `start` to `goal`.
pub fn plan_subpath<G: Passability + Sync + ?Sized, R: Rng>(
    grid: &G,
    start: Cell,
    goal: Cell,
    params: &AcoParams,
    rng: &mut R,
) -> Result<AcoOutcome, AcoError> {
    params.validate()?;
    if start == goal {
        return Err(AcoError::InvalidEndpoints("start equals goal".into()));
    }
    for (name, c) in [("start", start), ("goal", goal)] {
        if !grid.is_passable(c) {
            return Err(AcoError::InvalidEndpoints(format!(
                "{name} {c:?} is not a free cell"
            )));
        }
    }

    let mut field = PheromoneField::uniform(grid.rows(), grid.cols(), params.tau0);
    let mut incumbent: Option<AntPath> = None;
    let mut series = Vec::with_capacity(params.n_iters);
    let mut retries = 0;

    for _ in 0..params.n_iters {
        let mut failed = 0;
        let mut paths = loop {
            let paths = construct_colony(grid, &field, start, goal, params, rng.gen());
            if incumbent.is_some() || paths.iter().any(|p| p.reached) {
                break paths;
            }
            failed += 1;
            retries += 1;
            if failed >= MAX_FAILED_COLONIES {
                return Err(AcoError::NoPathFound);
            }
        };

        if params.mode == AcoMode::Improved {
            if let Some(best) = &incumbent {
                repair(&mut paths, best, rng);
            }
        }
        for p in &mut paths {
            p.score = objective(p, params).ok();
        }
        for p in &paths {
            if let Some(s) = p.score {
                if incumbent.as_ref().is_none_or(|b| s < b.score.expect("scored")) {
                    incumbent = Some(p.clone());
                }
            }
        }
        update_pheromone(&mut field, &paths, params);
        series.push(incumbent.as_ref().and_then(|b| b.score).expect("incumbent exists"));
    }

    Ok(AcoOutcome {
        best: incumbent.expect("at least one iteration ran"),
        series,
        retries,
    })
}
