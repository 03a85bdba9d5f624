//! Failure indices and the netting-analysis thickness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::materials::MaterialSystem;
use crate::mechanics::LaminateState;
use crate::winding::LayupField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    TsaiWu,
    MaxPrincipal,
}

impl Criterion {
    pub fn label(self) -> &'static str {
        match self {
            Criterion::TsaiWu => "tsai_wu",
            Criterion::MaxPrincipal => "max_principal",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "tsai_wu" | "tsai-wu" => Ok(Criterion::TsaiWu),
            "max_principal" | "max-principal" => Ok(Criterion::MaxPrincipal),
            other => Err(Error::Config(format!("unknown criterion `{other}`"))),
        }
    }
}

/// Ply strengths in material axes, MPa. Compressive values are magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strengths {
    pub xt: f64,
    pub xc: f64,
    pub yt: f64,
    pub yc: f64,
    pub s12: f64,
}

impl From<&MaterialSystem> for Strengths {
    fn from(m: &MaterialSystem) -> Self {
        Self {
            xt: m.xt,
            xc: m.xc,
            yt: m.yt,
            yc: m.yc,
            s12: m.s12,
        }
    }
}

impl Strengths {
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            xt: self.xt * k,
            xc: self.xc * k,
            yt: self.yt * k,
            yc: self.yc * k,
            s12: self.s12 * k,
        }
    }
}

/// Plane-stress Tsai-Wu left-hand side for `(sigma1, sigma2, sigma6)`,
/// with `F12 = -sqrt(F11 F22) / 2`.
pub fn tsai_wu(sigma: [f64; 3], s: &Strengths) -> f64 {
    let [s1, s2, s6] = sigma;
    let f1 = 1.0 / s.xt - 1.0 / s.xc;
    let f2 = 1.0 / s.yt - 1.0 / s.yc;
    let f11 = 1.0 / (s.xt * s.xc);
    let f22 = 1.0 / (s.yt * s.yc);
    let f66 = 1.0 / (s.s12 * s.s12);
    let f12 = -0.5 * (f11 * f22).sqrt();
    f1 * s1 + f2 * s2 + f11 * s1 * s1 + f22 * s2 * s2 + f66 * s6 * s6 + 2.0 * f12 * s1 * s2
}

/// Fiber-direction stress ratio `sigma1 / Xt`. Compression gives a negative
/// index and is therefore never critical.
pub fn max_principal_check(sigma1: f64, xt: f64) -> f64 {
    sigma1 / xt
}

/// Fiber-only cylinder thickness `3 P R / (2 Xt)`.
pub fn netting_thickness(pressure: f64, radius: f64, xt: f64) -> f64 {
    3.0 * pressure * radius / (2.0 * xt)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlyFailure {
    pub tsai_wu: f64,
    pub max_stress: f64,
}

impl PlyFailure {
    pub fn get(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::TsaiWu => self.tsai_wu,
            Criterion::MaxPrincipal => self.max_stress,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureSummary {
    pub criterion: Criterion,
    /// `fields[station][ply]`; `None` for absent plies.
    pub fields: Vec<Vec<Option<PlyFailure>>>,
    pub worst: f64,
    pub worst_station: usize,
    pub worst_ply: usize,
}

impl FailureSummary {
    pub fn feasible(&self) -> bool {
        self.worst < 1.0
    }

    /// Worst index under a criterion other than the constraining one.
    pub fn worst_for(&self, criterion: Criterion) -> f64 {
        self.fields
            .iter()
            .flatten()
            .flatten()
            .map(|f| f.get(criterion))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Indices for every present composite ply. Plies beyond the layup (the
/// liner) are not checked.
pub fn evaluate_failure(
    layup: &LayupField,
    states: &[LaminateState],
    strengths: &Strengths,
    criterion: Criterion,
) -> FailureSummary {
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    let fields = states
        .iter()
        .enumerate()
        .map(|(i, state)| {
            layup.cells[i]
                .iter()
                .zip(&state.plies)
                .enumerate()
                .map(|(p, (cell, stress))| {
                    if !cell.is_present() {
                        return None;
                    }
                    let f = PlyFailure {
                        tsai_wu: tsai_wu(stress.material, strengths),
                        max_stress: max_principal_check(stress.material[0], strengths.xt),
                    };
                    let v = f.get(criterion);
                    if v > worst.0 {
                        worst = (v, i, p);
                    }
                    Some(f)
                })
                .collect()
        })
        .collect();
    FailureSummary {
        criterion,
        fields,
        worst: worst.0,
        worst_station: worst.1,
        worst_ply: worst.2,
    }
}
