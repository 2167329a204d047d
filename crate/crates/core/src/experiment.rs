//! Repeated seeded runs and parameter groups.

use rayon::prelude::*;

use crate::planner::{run_with, PlannerKind, RunResult, Scenario};
use crate::scenario::ParseError;
use crate::subgoal::CostWeights;

/// `repeats` runs with seeds `seed, seed + 1, ...`, returned in seed order
/// whether or not they ran in parallel.
pub fn run_repeats(
    scenario: &Scenario,
    kind: PlannerKind,
    repeats: usize,
    parallel: bool,
) -> Vec<RunResult> {
    let one = |i: usize| run_with(scenario, kind, scenario.seed.wrapping_add(i as u64));
    if parallel {
        (0..repeats).into_par_iter().map(one).collect()
    } else {
        (0..repeats).map(one).collect()
    }
}

/// A named setting of the sub-goal weights and the ant score weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGroup {
    pub name: String,
    pub weights: CostWeights,
    pub delta: f64,
    pub zeta: f64,
}

impl ParamGroup {
    /// The scenario with this group's weights applied.
    pub fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        s.config.weights = self.weights;
        s.config.aco.delta = self.delta;
        s.config.aco.zeta = self.zeta;
        s
    }
}

/// One group per line: `name alpha beta omega delta zeta`. `;` starts a comment.
pub fn parse_groups(text: &str) -> Result<Vec<ParamGroup>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let fail = |message: String| ParseError { line, message };
        if words.len() != 6 {
            return Err(fail(format!(
                "expected 'name alpha beta omega delta zeta', got {} fields",
                words.len()
            )));
        }
        let mut v = [0.0; 5];
        for (k, w) in words[1..].iter().enumerate() {
            v[k] = w.parse().map_err(|_| fail(format!("bad number '{w}'")))?;
        }
        let weights = CostWeights::new(v[0], v[1], v[2]).map_err(|e| fail(e.to_string()))?;
        if !(v[3] > 0.0 && v[3].is_finite() && v[4] >= 0.0 && v[4].is_finite()) {
            return Err(fail(format!("need delta > 0 and zeta >= 0, got {} {}", v[3], v[4])));
        }
        out.push(ParamGroup {
            name: words[0].to_string(),
            weights,
            delta: v[3],
            zeta: v[4],
        });
    }
    Ok(out)
}
