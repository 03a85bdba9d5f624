use serde::{Deserialize, Serialize};

use super::{best_index, Problem, RunResult, Scored, Trial};
use crate::error::{Error, Result};

/// Pattern-search settings. Steps are fractions of each variable's range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HookeJeevesConfig {
    pub initial_step: f64,
    pub tolerance: f64,
    pub shrink: f64,
    pub max_evaluations: usize,
}

impl Default for HookeJeevesConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            tolerance: 1e-4,
            shrink: 0.5,
            max_evaluations: 200,
        }
    }
}

impl HookeJeevesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step <= 1.0) {
            return Err(Error::InvalidOptimizer(format!("initial_step {} outside (0, 1]", self.initial_step)));
        }
        if !(self.tolerance > 0.0) || !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidOptimizer("tolerance must be positive and shrink in (0, 1)".into()));
        }
        if self.max_evaluations == 0 {
            return Err(Error::InvalidOptimizer("max_evaluations must be at least 1".into()));
        }
        Ok(())
    }
}

struct Search<'a, P: Problem> {
    problem: &'a P,
    cap: usize,
    iteration: usize,
    history: Vec<Trial<P::Outcome>>,
}

impl<P: Problem> Search<'_, P> {
    fn to_x(&self, u: &[f64]) -> Vec<f64> {
        self.problem
            .bounds()
            .iter()
            .zip(u)
            .map(|(b, &v)| b.clamp(b.lo + b.width() * v.clamp(0.0, 1.0)))
            .collect()
    }

    /// Fitness at `u`, or `None` once the budget is spent.
    fn eval(&mut self, u: &[f64]) -> Option<f64> {
        if self.history.len() >= self.cap {
            return None;
        }
        let x = self.to_x(u);
        let scored: Scored<P::Outcome> = self.problem.evaluate(&x);
        let f = scored.fitness;
        self.history.push(Trial {
            k: self.history.len(),
            island: None,
            generation: self.iteration,
            x,
            scored,
        });
        Some(f)
    }

    /// One-axis-at-a-time probing around `u`, keeping every improvement.
    fn explore(&mut self, mut u: Vec<f64>, mut f: f64, step: f64) -> (Vec<f64>, f64) {
        for i in 0..u.len() {
            for dir in [1.0, -1.0] {
                let mut trial = u.clone();
                trial[i] = (trial[i] + dir * step).clamp(0.0, 1.0);
                if trial[i] == u[i] {
                    continue;
                }
                match self.eval(&trial) {
                    Some(ft) if ft < f => {
                        u = trial;
                        f = ft;
                        break;
                    }
                    Some(_) => {}
                    None => return (u, f),
                }
            }
        }
        (u, f)
    }
}

/// Hooke-Jeeves direct search in the unit-scaled box. Every probe is clipped
/// to the bounds. Stops when the step falls below the tolerance or the
/// evaluation budget is used up.
pub fn run_hooke_jeeves<P: Problem>(problem: &P, start: &[f64], cfg: &HookeJeevesConfig) -> Result<RunResult<P::Outcome>> {
    cfg.validate()?;
    let bounds = problem.bounds();
    if start.len() != bounds.len() {
        return Err(Error::InvalidOptimizer(format!(
            "start point has {} values, problem has {} variables",
            start.len(),
            bounds.len()
        )));
    }
    if let Some((i, b)) = bounds.iter().enumerate().find(|(i, b)| !b.contains(start[*i])) {
        return Err(Error::OutOfBounds(format!("start value {} of variable {i} outside [{}, {}]", start[i], b.lo, b.hi)));
    }

    let mut s = Search {
        problem,
        cap: cfg.max_evaluations,
        iteration: 0,
        history: Vec::new(),
    };
    let mut base: Vec<f64> = bounds.iter().zip(start).map(|(b, &x)| (x - b.lo) / b.width()).collect();
    let mut f_base = s.eval(&base).expect("budget of at least one evaluation");
    let mut best_track = vec![f_base];
    let mut step = cfg.initial_step;

    while step >= cfg.tolerance && s.history.len() < s.cap {
        s.iteration += 1;
        let (mut u, mut f) = s.explore(base.clone(), f_base, step);
        if f < f_base {
            loop {
                let pattern: Vec<f64> = u.iter().zip(&base).map(|(a, b)| (2.0 * a - b).clamp(0.0, 1.0)).collect();
                base = u.clone();
                f_base = f;
                let Some(fp) = s.eval(&pattern) else { break };
                let (u2, f2) = s.explore(pattern, fp, step);
                if f2 < f_base {
                    u = u2;
                    f = f2;
                } else {
                    break;
                }
            }
        } else {
            step *= cfg.shrink;
        }
        best_track.push(f_base);
    }

    let best = best_index(&s.history);
    Ok(RunResult {
        history: s.history,
        best,
        island_best: vec![best_track],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::testing::{OneD, Sphere};
    use crate::optimize::VarBounds;

    #[test]
    fn quadratic_converges_to_three() {
        let p = OneD {
            bounds: vec![VarBounds::new(-10.0, 10.0).unwrap()],
            f: |x: f64| (x - 3.0).powi(2),
        };
        let cfg = HookeJeevesConfig {
            max_evaluations: 1000,
            ..HookeJeevesConfig::default()
        };
        let res = run_hooke_jeeves(&p, &[0.0], &cfg).unwrap();
        let x = res.best_trial().x[0];
        // final step in real units
        assert!((x - 3.0).abs() <= cfg.tolerance * 20.0, "x = {x}");
    }

    #[test]
    fn stays_in_the_starting_well() {
        // global minimum at -2, local minimum at +2
        let p = OneD {
            bounds: vec![VarBounds::new(-4.0, 4.0).unwrap()],
            f: |x: f64| ((x + 2.0).powi(2)).min((x - 2.0).powi(2) + 0.5),
        };
        let res = run_hooke_jeeves(&p, &[2.0], &HookeJeevesConfig::default()).unwrap();
        assert!((res.best_trial().x[0] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn budget_and_bounds_respected() {
        let p = Sphere::new(6);
        let cfg = HookeJeevesConfig {
            max_evaluations: 50,
            ..HookeJeevesConfig::default()
        };
        let res = run_hooke_jeeves(&p, &[5.0, -5.0, 4.0, 3.0, -2.0, 1.0], &cfg).unwrap();
        assert!(res.history.len() <= 50);
        assert!(res.history.iter().all(|t| t.x.iter().all(|x| (-5.0..=5.0).contains(x))));
        assert!(res.island_best[0].windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn start_outside_bounds_rejected() {
        assert!(matches!(
            run_hooke_jeeves(&Sphere::new(1), &[9.0], &HookeJeevesConfig::default()),
            Err(Error::OutOfBounds(_))
        ));
    }
}
