//! Design search: island-model GA, Hooke-Jeeves pattern search, and the
//! vessel evaluation pipeline they drive.

mod chromosome;
mod design;
mod evaluate;
mod hooke_jeeves;
mod miga;
mod pareto;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use chromosome::Encoding;
pub use design::{DesignVector, StackLayout, WindingParams};
pub use evaluate::{analyze, evaluate, scalarize, Analysis, EvalContext, EvaluationRecord, ObjectiveConfig, VesselProblem};
pub use hooke_jeeves::{run_hooke_jeeves, HookeJeevesConfig};
pub use miga::{run_miga, MigaConfig};
pub use pareto::{dominates, pareto_front};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarBounds {
    pub lo: f64,
    pub hi: f64,
}

impl VarBounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidOptimizer(format!("invalid variable bounds [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// Outcome of one objective evaluation. `violation` measures how far an
/// infeasible point is from feasibility and orders infeasible points when
/// nothing feasible exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scored<T> {
    pub fitness: f64,
    pub feasible: bool,
    pub violation: f64,
    pub outcome: T,
}

impl<T> Scored<T> {
    /// Feasible before infeasible; then fitness (feasible) or violation
    /// (infeasible), lower first.
    pub fn rank_cmp<U>(&self, other: &Scored<U>) -> Ordering {
        match (self.feasible, other.feasible) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (true, true) => self.fitness.total_cmp(&other.fitness),
            (false, false) => self
                .violation
                .total_cmp(&other.violation)
                .then(self.fitness.total_cmp(&other.fitness)),
        }
    }
}

/// A minimization problem over a box.
pub trait Problem: Sync {
    type Outcome: Clone + Send;

    fn bounds(&self) -> &[VarBounds];
    fn evaluate(&self, x: &[f64]) -> Scored<Self::Outcome>;
}

/// One evaluation in run order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial<T> {
    pub k: usize,
    /// Island index for GA runs.
    pub island: Option<usize>,
    /// Generation (GA) or pattern-search iteration count at evaluation time.
    pub generation: usize,
    pub x: Vec<f64>,
    pub scored: Scored<T>,
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub history: Vec<Trial<T>>,
    /// Index into `history` of the best-ranked trial.
    pub best: usize,
    /// Per island (one row for single-point searches), the best fitness held
    /// after each generation, starting with the initial population.
    pub island_best: Vec<Vec<f64>>,
}

impl<T> RunResult<T> {
    pub fn best_trial(&self) -> &Trial<T> {
        &self.history[self.best]
    }

    pub fn any_feasible(&self) -> bool {
        self.history.iter().any(|t| t.scored.feasible)
    }

    /// History indices sorted feasibility-first.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.history.len()).collect();
        idx.sort_by(|&a, &b| self.history[a].scored.rank_cmp(&self.history[b].scored).then(a.cmp(&b)));
        idx
    }

    /// SHA-256 over the evaluated points and their scores, in run order.
    pub fn history_hash(&self) -> String {
        let mut h = Sha256::new();
        for t in &self.history {
            h.update((t.k as u64).to_le_bytes());
            for x in &t.x {
                h.update(x.to_bits().to_le_bytes());
            }
            h.update(t.scored.fitness.to_bits().to_le_bytes());
            h.update(t.scored.violation.to_bits().to_le_bytes());
            h.update([u8::from(t.scored.feasible)]);
        }
        hex::encode(h.finalize())
    }
}

pub(crate) fn best_index<T>(history: &[Trial<T>]) -> usize {
    (0..history.len())
        .min_by(|&a, &b| history[a].scored.rank_cmp(&history[b].scored).then(a.cmp(&b)))
        .unwrap_or(0)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn s(fitness: f64, feasible: bool, violation: f64) -> Scored<()> {
        Scored { fitness, feasible, violation, outcome: () }
    }

    #[test]
    fn feasible_always_outranks_infeasible() {
        assert_eq!(s(100.0, true, 0.0).rank_cmp(&s(-100.0, false, 0.01)), Ordering::Less);
        assert_eq!(s(1.0, false, 0.5).rank_cmp(&s(0.0, false, 2.0)), Ordering::Less);
    }

    #[test]
    fn bounds_validation() {
        assert!(VarBounds::new(1.0, 1.0).is_err());
        assert!(VarBounds::new(0.0, f64::NAN).is_err());
        assert_eq!(VarBounds::new(0.0, 2.0).unwrap().clamp(3.0), 2.0);
    }
}
