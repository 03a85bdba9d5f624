//! The batch commands behind the CLI, usable from library code and tests.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::{OptimizerKind, RunConfig};
use crate::error::{Error, Result};
use crate::failure::netting_thickness;
use crate::materials::{MaterialDb, Property};
use crate::optimize::{
    analyze, evaluate, run_hooke_jeeves, run_miga, DesignVector, EvaluationRecord, RunResult, VesselProblem,
};
use crate::report::{self, RunSummary};
use crate::winding::build_layup;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NettingRow {
    pub material: String,
    pub xt: f64,
    pub thickness: f64,
}

/// Fiber-only cylinder thickness for the configured (or every) material.
pub fn cmd_netting(cfg: &RunConfig, db: &MaterialDb) -> Result<Vec<NettingRow>> {
    let names: Vec<String> = if cfg.netting_materials.is_empty() {
        db.composites.iter().map(|c| c.name.clone()).collect()
    } else {
        cfg.netting_materials.clone()
    };
    names
        .iter()
        .map(|name| {
            let card = cfg.material_system(db, name)?;
            Ok(NettingRow {
                material: name.clone(),
                xt: card.xt,
                thickness: netting_thickness(cfg.load.internal_pressure, cfg.geometry.radius, card.xt),
            })
        })
        .collect()
}

pub fn format_netting(rows: &[NettingRow]) -> String {
    let mut s = format!("{:<10} {:>10} {:>14}\n", "material", "Xt [MPa]", "netting [mm]");
    for r in rows {
        let _ = writeln!(s, "{:<10} {:>10.1} {:>14.3}", r.material, r.xt, r.thickness);
    }
    s
}

/// Composite cards with each property's provenance, and the isotropic cards.
pub fn cmd_materials(db: &MaterialDb) -> String {
    let mut s = String::new();
    for card in &db.composites {
        let _ = writeln!(s, "{} (vf = {})", card.name, card.vf);
        for p in Property::ALL {
            let _ = writeln!(s, "  {:<5} {:>12.6e}  {:?}", p.key(), card.get(p), card.provenance(p));
        }
    }
    for card in &db.isotropic {
        let _ = writeln!(s, "{} (isotropic): E = {}, nu = {}", card.name, card.e, card.nu);
    }
    s
}

pub fn load_design(path: &Path) -> Result<DesignVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Full analysis of one design, written under `out`.
pub fn cmd_evaluate(cfg: &RunConfig, db: &MaterialDb, design: &DesignVector, out: &Path) -> Result<EvaluationRecord> {
    let ctx = cfg.context(db)?;
    ctx.check(design)?;
    let analysis = analyze(&ctx, design)?;
    let record = evaluate(&ctx, design);
    report::ensure_dir(out)?;
    report::write_config_snapshot(out, cfg)?;
    let text = serde_json::to_string_pretty(&record)? + "\n";
    let path = out.join("evaluation.json");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    report::write_layup(&out.join(report::LAYUP_FILE), &ctx.layout, &analysis)?;
    report::write_stations(&out.join(report::STATIONS_FILE), &analysis)?;
    Ok(record)
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub summary: RunSummary,
    pub records: Vec<EvaluationRecord>,
}

/// Best-ranked history index among `idx`.
fn best_of(result: &RunResult<EvaluationRecord>, idx: &[usize], feasible_only: bool) -> Option<usize> {
    idx.iter()
        .copied()
        .filter(|&i| !feasible_only || result.history[i].scored.feasible)
        .min_by(|&a, &b| result.history[a].scored.rank_cmp(&result.history[b].scored).then(a.cmp(&b)))
}

/// Runs the configured optimizer and, when `out` is given, writes every run
/// artifact there.
pub fn cmd_optimize(cfg: &RunConfig, db: &MaterialDb, out: Option<&Path>) -> Result<OptimizeOutcome> {
    let ctx = cfg.context(db)?;
    let netting = netting_thickness(cfg.load.internal_pressure, cfg.geometry.radius, ctx.material.xt);
    let problem = VesselProblem::new(ctx)?;
    let layout = problem.ctx.layout.clone();
    let result = match cfg.optimizer {
        OptimizerKind::Miga => run_miga(&problem, &cfg.miga_config())?,
        OptimizerKind::HookeJeeves => {
            let start = match &cfg.start {
                Some(d) => {
                    problem.ctx.check(d)?;
                    layout.encode(d)?
                }
                None => problem.bounds_center(),
            };
            run_hooke_jeeves(&problem, &start, &cfg.hooke_jeeves)?
        }
    };
    let records = VesselProblem::records(&result);
    let first: Vec<usize> = match cfg.optimizer {
        OptimizerKind::Miga => (0..result.history.len()).filter(|&i| result.history[i].generation == 0).collect(),
        OptimizerKind::HookeJeeves => vec![0],
    };
    let initial = best_of(&result, &first, false).expect("initial population is not empty");
    let summary = RunSummary {
        material: cfg.material.clone(),
        criterion: cfg.criterion,
        optimizer: cfg.optimizer.label().to_string(),
        seed: cfg.seed,
        evaluations: result.history.len(),
        history_hash: result.history_hash(),
        netting_thickness: netting,
        any_feasible: result.any_feasible(),
        initial: records[initial].clone(),
        best: records[result.best].clone(),
        initial_feasible: best_of(&result, &first, true).map(|i| records[i].clone()),
    };

    if let Some(out) = out {
        report::ensure_dir(out)?;
        report::write_config_snapshot(out, cfg)?;
        report::write_history(&out.join(report::HISTORY_FILE), &layout, &result)?;
        report::write_convergence(&out.join(report::CONVERGENCE_FILE), &layout, &result)?;
        report::write_pareto(&out.join(report::PARETO_FILE), &records)?;
        report::write_summary(&out.join(report::SUMMARY_FILE), &summary)?;
        let ctx = &problem.ctx;
        let last = analyze(ctx, &summary.best.design)?;
        report::write_layup(&out.join(report::LAYUP_FILE), &layout, &last)?;
        report::write_stations(&out.join(report::STATIONS_FILE), &last)?;
        let on_base = |d: &DesignVector| {
            let layers = d.layers(&layout, &ctx.winding, ctx.geometry.radius());
            build_layup(&ctx.geometry, &layers, &ctx.sections)
        };
        report::write_angle_distribution(
            &out.join(report::ANGLES_FILE),
            &ctx.geometry,
            &layout,
            &on_base(&summary.initial.design)?,
            &on_base(&summary.best.design)?,
        )?;
    }
    Ok(OptimizeOutcome { summary, records })
}

pub fn format_summary(s: &RunSummary) -> String {
    let line = |tag: &str, r: &EvaluationRecord| {
        format!(
            "{tag:<8} mass {:>8.3} kg  Th_c {:>7.3} mm  U {:>11.4e} mJ  FI {:>8.4}  feasible {}\n",
            r.mass, r.th_c, r.energy, r.fi, r.feasible
        )
    };
    let mut out = format!(
        "{} / {} / {}  seed {}  evaluations {}  netting {:.3} mm\n",
        s.material,
        s.criterion.label(),
        s.optimizer,
        s.seed,
        s.evaluations,
        s.netting_thickness
    );
    out += &line("initial", &s.initial);
    out += &line("best", &s.best);
    let _ = writeln!(out, "history sha256 {}", s.history_hash);
    out
}
