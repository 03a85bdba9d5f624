use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{best_index, Encoding, Problem, RunResult, Scored, Trial};
use crate::error::{Error, Result};

/// Island-model GA settings. Each generation an island keeps its single best
/// individual and breeds `subpopulation - 1` children, so a run costs
/// `islands * subpopulation * (1 + generations) - islands * generations`
/// evaluations (1000 for 10 x 10 x 10).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MigaConfig {
    pub islands: usize,
    pub subpopulation: usize,
    pub generations: usize,
    /// Generations between migrations.
    pub migration_interval: usize,
    /// Individuals sent to the next island in the ring per migration.
    pub migration_rate: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1 / chromosome length`.
    pub mutation_rate: Option<f64>,
    pub bits: u32,
    pub tournament: usize,
    /// Not read from config files; run configurations carry one top-level seed.
    #[serde(skip)]
    pub seed: u64,
}

impl Default for MigaConfig {
    fn default() -> Self {
        Self {
            islands: 10,
            subpopulation: 10,
            generations: 10,
            migration_interval: 2,
            migration_rate: 1,
            crossover_rate: 0.9,
            mutation_rate: None,
            bits: 16,
            tournament: 2,
            seed: 1,
        }
    }
}

impl MigaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidOptimizer(m));
        if self.islands == 0 || self.generations == 0 || self.migration_interval == 0 || self.tournament == 0 {
            return bad("islands, generations, migration_interval and tournament must be at least 1".into());
        }
        if self.subpopulation < 2 {
            return bad(format!("subpopulation must be at least 2, got {}", self.subpopulation));
        }
        if self.migration_rate >= self.subpopulation {
            return bad(format!(
                "migration_rate {} must be below the subpopulation size {}",
                self.migration_rate, self.subpopulation
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!("crossover_rate {} outside [0, 1]", self.crossover_rate));
        }
        if let Some(p) = self.mutation_rate {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("mutation_rate {p} outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn evaluations(&self) -> usize {
        self.islands * self.subpopulation + self.islands * self.generations * (self.subpopulation - 1)
    }
}

#[derive(Clone)]
struct Individual<T> {
    genes: Vec<bool>,
    x: Vec<f64>,
    scored: Scored<T>,
}

struct Island<T> {
    rng: ChaCha8Rng,
    pop: Vec<Individual<T>>,
    /// Individuals evaluated during the latest step, in evaluation order.
    fresh: Vec<Individual<T>>,
}

impl<T: Clone> Island<T> {
    fn best(&self) -> usize {
        (0..self.pop.len())
            .min_by(|&a, &b| self.pop[a].scored.fitness.total_cmp(&self.pop[b].scored.fitness))
            .expect("non-empty population")
    }

    fn worst(&self) -> usize {
        (0..self.pop.len())
            .max_by(|&a, &b| self.pop[a].scored.fitness.total_cmp(&self.pop[b].scored.fitness))
            .expect("non-empty population")
    }

    fn best_fitness(&self) -> f64 {
        self.pop[self.best()].scored.fitness
    }

    fn tournament(&mut self, size: usize) -> usize {
        let mut pick = self.rng.gen_range(0..self.pop.len());
        for _ in 1..size {
            let c = self.rng.gen_range(0..self.pop.len());
            if self.pop[c].scored.fitness < self.pop[pick].scored.fitness {
                pick = c;
            }
        }
        pick
    }
}

fn express<P: Problem>(problem: &P, enc: &Encoding, genes: Vec<bool>) -> Individual<P::Outcome> {
    let x = enc.decode(&genes);
    let scored = problem.evaluate(&x);
    Individual { genes, x, scored }
}

fn breed<P: Problem>(island: &mut Island<P::Outcome>, problem: &P, enc: &Encoding, cfg: &MigaConfig, pm: f64) {
    let n = cfg.subpopulation;
    let len = enc.len();
    let elite = island.pop[island.best()].clone();
    let mut children: Vec<Vec<bool>> = Vec::with_capacity(n - 1);
    while children.len() < n - 1 {
        let a = island.tournament(cfg.tournament);
        let b = island.tournament(cfg.tournament);
        let (mut c1, mut c2) = (island.pop[a].genes.clone(), island.pop[b].genes.clone());
        if len > 1 && island.rng.gen::<f64>() < cfg.crossover_rate {
            let cut = island.rng.gen_range(1..len);
            c1[cut..].swap_with_slice(&mut c2[cut..]);
        }
        for child in [&mut c1, &mut c2] {
            for g in child.iter_mut() {
                if island.rng.gen::<f64>() < pm {
                    *g = !*g;
                }
            }
        }
        children.push(c1);
        if children.len() < n - 1 {
            children.push(c2);
        }
    }
    island.fresh = children.into_iter().map(|g| express(problem, enc, g)).collect();
    island.pop = std::iter::once(elite).chain(island.fresh.iter().cloned()).collect();
}

/// Ring migration: each island sends copies of its `rate` best individuals
/// to the next island, where each replaces the current worst if better.
fn migrate<T: Clone>(islands: &mut [Island<T>], rate: usize) {
    let n = islands.len();
    if n < 2 {
        return;
    }
    let emigrants: Vec<Vec<Individual<T>>> = islands
        .iter()
        .map(|isl| {
            let mut order: Vec<usize> = (0..isl.pop.len()).collect();
            order.sort_by(|&a, &b| isl.pop[a].scored.fitness.total_cmp(&isl.pop[b].scored.fitness));
            order.iter().take(rate).map(|&i| isl.pop[i].clone()).collect()
        })
        .collect();
    for (i, group) in emigrants.into_iter().enumerate() {
        let dest = &mut islands[(i + 1) % n];
        for m in group {
            let w = dest.worst();
            if m.scored.fitness < dest.pop[w].scored.fitness {
                dest.pop[w] = m;
            }
        }
    }
}

/// Runs the island GA. Islands evolve in parallel on independent seeded
/// streams; history is assembled in island order, so results do not depend
/// on the thread count.
pub fn run_miga<P: Problem>(problem: &P, cfg: &MigaConfig) -> Result<RunResult<P::Outcome>> {
    cfg.validate()?;
    let enc = Encoding::new(problem.bounds(), cfg.bits)?;
    let len = enc.len();
    let pm = cfg.mutation_rate.unwrap_or(1.0 / len as f64);

    let mut islands: Vec<Island<P::Outcome>> = (0..cfg.islands)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            Island {
                rng,
                pop: Vec::new(),
                fresh: Vec::new(),
            }
        })
        .collect();

    islands.par_iter_mut().for_each(|isl| {
        let genomes: Vec<Vec<bool>> = (0..cfg.subpopulation)
            .map(|_| (0..len).map(|_| isl.rng.gen::<bool>()).collect())
            .collect();
        isl.fresh = genomes.into_iter().map(|g| express(problem, &enc, g)).collect();
        isl.pop = isl.fresh.clone();
    });

    let mut history = Vec::with_capacity(cfg.evaluations());
    let mut island_best = vec![Vec::with_capacity(cfg.generations + 1); cfg.islands];
    let mut collect = |islands: &mut [Island<P::Outcome>], generation: usize| {
        for (i, isl) in islands.iter_mut().enumerate() {
            for ind in isl.fresh.drain(..) {
                history.push(Trial {
                    k: history.len(),
                    island: Some(i),
                    generation,
                    x: ind.x,
                    scored: ind.scored,
                });
            }
        }
    };
    collect(&mut islands, 0);
    for (i, isl) in islands.iter().enumerate() {
        island_best[i].push(isl.best_fitness());
    }

    for generation in 1..=cfg.generations {
        islands.par_iter_mut().for_each(|isl| breed(isl, problem, &enc, cfg, pm));
        collect(&mut islands, generation);
        if generation % cfg.migration_interval == 0 {
            migrate(&mut islands, cfg.migration_rate);
        }
        debug_assert!(islands.iter().all(|isl| isl.pop.len() == cfg.subpopulation));
        for (i, isl) in islands.iter().enumerate() {
            island_best[i].push(isl.best_fitness());
        }
    }

    let best = best_index(&history);
    Ok(RunResult {
        history,
        best,
        island_best,
    })
}
