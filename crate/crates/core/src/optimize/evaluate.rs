use serde::{Deserialize, Serialize};

use super::{pareto_front, DesignVector, Problem, RunResult, Scored, StackLayout, VarBounds, WindingParams};
use crate::error::{Error, Result};
use crate::failure::{evaluate_failure, Criterion, FailureSummary, Strengths};
use crate::materials::MaterialSystem;
use crate::mechanics::{solve_vessel, total_mass, total_strain_energy, EnergySummary, Lamina, LaminateState, LinerPly, LoadCase};
use crate::winding::{build_layup, feature_radii, DomeSide, LayupField, SectionPartition, VesselGeometry};

/// Weighted-sum objective with a quadratic exterior penalty on the failure
/// index. Each objective is divided by its reference scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObjectiveConfig {
    pub w_mass: f64,
    pub w_thickness: f64,
    pub w_energy: f64,
    /// kg
    pub mass_ref: f64,
    /// mm
    pub thickness_ref: f64,
    /// mJ
    pub energy_ref: f64,
    pub penalty: f64,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self {
            w_mass: 1.0,
            w_thickness: 1.0,
            w_energy: 1.0,
            mass_ref: 10.0,
            thickness_ref: 5.0,
            energy_ref: 1.0e6,
            penalty: 1.0e3,
        }
    }
}

impl ObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        let w = [self.w_mass, self.w_thickness, self.w_energy];
        if w.iter().any(|v| !(*v >= 0.0)) || w.iter().all(|v| *v == 0.0) {
            return Err(Error::Config("objective weights must be non-negative and not all zero".into()));
        }
        if [self.mass_ref, self.thickness_ref, self.energy_ref].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Config("objective reference scales must be positive".into()));
        }
        if !(self.penalty >= 0.0) {
            return Err(Error::Config("penalty must be non-negative".into()));
        }
        Ok(())
    }
}

/// Everything a design evaluation needs besides the design itself.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub geometry: VesselGeometry,
    pub layout: StackLayout,
    pub winding: WindingParams,
    pub sections: SectionPartition,
    pub material: MaterialSystem,
    pub liner: Option<LinerPly>,
    pub load: LoadCase,
    pub criterion: Criterion,
    pub objective: ObjectiveConfig,
}

impl EvalContext {
    pub fn bounds(&self) -> Result<Vec<VarBounds>> {
        self.layout.bounds(self.geometry.radius(), self.winding.bandwidth)
    }

    pub fn check(&self, design: &DesignVector) -> Result<()> {
        self.layout.check(design, self.geometry.radius(), self.winding.bandwidth)
    }
}

/// Full per-station result of one design, for exports.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Stations the design was analyzed on: the context geometry, refined
    /// at the design's feature radii when enabled.
    pub geometry: VesselGeometry,
    pub layup: LayupField,
    pub states: Vec<LaminateState>,
    pub failure: FailureSummary,
    pub energy: EnergySummary,
    pub mass: f64,
}

pub fn analyze(ctx: &EvalContext, design: &DesignVector) -> Result<Analysis> {
    let layers = design.layers(&ctx.layout, &ctx.winding, ctx.geometry.radius());
    let geometry = if ctx.geometry.params.feature_refinement {
        ctx.geometry
            .refined(&feature_radii(&layers, DomeSide::Up), &feature_radii(&layers, DomeSide::Down))?
    } else {
        ctx.geometry.clone()
    };
    let layup = build_layup(&geometry, &layers, &ctx.sections)?;
    let lamina = Lamina::from(&ctx.material);
    let states = solve_vessel(&geometry, &layup, &lamina, ctx.liner.as_ref(), &ctx.load)?;
    let failure = evaluate_failure(&layup, &states, &Strengths::from(&ctx.material), ctx.criterion);
    let energy = total_strain_energy(&geometry, &states);
    let mass = total_mass(&layup, &geometry, ctx.material.rho);
    Ok(Analysis {
        geometry,
        layup,
        states,
        failure,
        energy,
        mass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRecord {
    pub k: usize,
    pub design: DesignVector,
    /// Composite mass, kg.
    pub mass: f64,
    /// Total composite thickness on the cylinder, mm.
    pub th_c: f64,
    /// Strain energy integral, mJ.
    pub energy: f64,
    /// Peak strain energy density, mJ/mm^2.
    pub energy_peak: f64,
    /// Worst index under the constraining criterion.
    pub fi: f64,
    pub fi_tsai_wu: f64,
    pub fi_max_principal: f64,
    /// Station index on the analysis geometry, which is design-specific
    /// when feature refinement is on; `worst_s` locates it on the meridian.
    pub worst_station: usize,
    /// Arc length of the worst station from the bottom boss, mm.
    pub worst_s: f64,
    pub worst_ply: usize,
    pub feasible: bool,
    pub fitness: f64,
    /// Why the pipeline failed, when it did.
    pub diagnostic: Option<String>,
}

impl EvaluationRecord {
    pub fn objectives(&self) -> Vec<f64> {
        vec![self.mass, self.th_c, -self.energy]
    }
}

/// `w_M M/M_ref + w_Th Th/Th_ref - w_U U/U_ref + penalty max(0, FI - 1)^2`.
pub fn scalarize(record: &EvaluationRecord, objective: &ObjectiveConfig) -> f64 {
    let o = objective;
    let excess = (record.fi - 1.0).max(0.0);
    o.w_mass * record.mass / o.mass_ref + o.w_thickness * record.th_c / o.thickness_ref
        - o.w_energy * record.energy / o.energy_ref
        + o.penalty * excess * excess
}

/// Runs the pipeline for one design. Pipeline errors do not propagate: the
/// record is marked infeasible with infinite fitness and a diagnostic.
pub fn evaluate(ctx: &EvalContext, design: &DesignVector) -> EvaluationRecord {
    let th_c = design.cylinder_thickness(&ctx.layout);
    match analyze(ctx, design) {
        Ok(a) => {
            let mut rec = EvaluationRecord {
                k: 0,
                design: design.clone(),
                mass: a.mass,
                th_c,
                energy: a.energy.total,
                energy_peak: a.energy.peak_density,
                fi: a.failure.worst,
                fi_tsai_wu: a.failure.worst_for(Criterion::TsaiWu),
                fi_max_principal: a.failure.worst_for(Criterion::MaxPrincipal),
                worst_station: a.failure.worst_station,
                worst_s: a.geometry.stations[a.failure.worst_station].s,
                worst_ply: a.failure.worst_ply,
                feasible: a.failure.feasible(),
                fitness: 0.0,
                diagnostic: None,
            };
            rec.fitness = scalarize(&rec, &ctx.objective);
            rec
        }
        Err(e) => EvaluationRecord {
            k: 0,
            design: design.clone(),
            mass: f64::NAN,
            th_c,
            energy: f64::NAN,
            energy_peak: f64::NAN,
            fi: f64::INFINITY,
            fi_tsai_wu: f64::INFINITY,
            fi_max_principal: f64::INFINITY,
            worst_station: 0,
            worst_s: f64::NAN,
            worst_ply: 0,
            feasible: false,
            fitness: f64::INFINITY,
            diagnostic: Some(e.to_string()),
        },
    }
}

/// The vessel design problem over the decoded design vector.
pub struct VesselProblem {
    pub ctx: EvalContext,
    bounds: Vec<VarBounds>,
}

impl VesselProblem {
    pub fn new(ctx: EvalContext) -> Result<Self> {
        ctx.objective.validate()?;
        let bounds = ctx.bounds()?;
        Ok(Self { ctx, bounds })
    }

    /// Midpoint of the design box.
    pub fn bounds_center(&self) -> Vec<f64> {
        self.bounds.iter().map(|b| 0.5 * (b.lo + b.hi)).collect()
    }

    /// History records with their run-order index filled in.
    pub fn records(result: &RunResult<EvaluationRecord>) -> Vec<EvaluationRecord> {
        result
            .history
            .iter()
            .map(|t| EvaluationRecord {
                k: t.k,
                ..t.scored.outcome.clone()
            })
            .collect()
    }

    /// Feasible, non-dominated records over (M, Th_c, -U).
    pub fn pareto_archive(records: &[EvaluationRecord]) -> Vec<EvaluationRecord> {
        let feasible: Vec<&EvaluationRecord> = records.iter().filter(|r| r.feasible).collect();
        let points: Vec<Vec<f64>> = feasible.iter().map(|r| r.objectives()).collect();
        pareto_front(&points).into_iter().map(|i| feasible[i].clone()).collect()
    }
}

impl Problem for VesselProblem {
    type Outcome = EvaluationRecord;

    fn bounds(&self) -> &[VarBounds] {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Scored<EvaluationRecord> {
        let record = evaluate(&self.ctx, &self.ctx.layout.decode(x));
        Scored {
            fitness: record.fitness,
            feasible: record.feasible,
            violation: if record.fi.is_nan() { f64::INFINITY } else { (record.fi - 1.0).max(0.0) },
            outcome: record,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(mass: f64, th_c: f64, energy: f64, fi: f64) -> EvaluationRecord {
        EvaluationRecord {
            k: 0,
            design: DesignVector {
                r0_up: vec![20.0],
                r0_d: vec![125.0],
                th: vec![0.5],
            },
            mass,
            th_c,
            energy,
            energy_peak: 0.0,
            fi,
            fi_tsai_wu: fi,
            fi_max_principal: fi,
            worst_station: 0,
            worst_s: 0.0,
            worst_ply: 0,
            feasible: fi < 1.0,
            fitness: 0.0,
            diagnostic: None,
        }
    }

    #[test]
    fn feasible_records_carry_no_penalty() {
        let o = ObjectiveConfig::default();
        let r = rec(10.0, 5.0, 1e6, 0.999);
        assert_eq!(scalarize(&r, &o), 1.0 + 1.0 - 1.0);
    }

    #[test]
    fn without_energy_weight_order_follows_mass_and_thickness() {
        let o = ObjectiveConfig {
            w_energy: 0.0,
            ..ObjectiveConfig::default()
        };
        let a = rec(12.0, 6.0, 5e6, 0.5);
        let b = rec(11.0, 6.5, 1e3, 0.7);
        let plain = |r: &EvaluationRecord| r.mass / 10.0 + r.th_c / 5.0;
        assert_eq!(
            scalarize(&a, &o) < scalarize(&b, &o),
            plain(&a) < plain(&b)
        );
    }

    #[test]
    fn huge_penalty_ranks_infeasible_last() {
        let o = ObjectiveConfig {
            penalty: 1e9,
            ..ObjectiveConfig::default()
        };
        let heavy_feasible = rec(40.0, 12.0, 1e4, 0.99);
        let light_infeasible = rec(2.0, 1.0, 9e6, 1.01);
        assert!(scalarize(&heavy_feasible, &o) < scalarize(&light_infeasible, &o));
    }

    #[test]
    fn weights_are_validated() {
        let zero = ObjectiveConfig {
            w_mass: 0.0,
            w_thickness: 0.0,
            w_energy: 0.0,
            ..ObjectiveConfig::default()
        };
        assert!(zero.validate().is_err());
        assert!(ObjectiveConfig { energy_ref: 0.0, ..ObjectiveConfig::default() }.validate().is_err());
    }
}
