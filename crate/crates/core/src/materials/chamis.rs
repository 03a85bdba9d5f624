//! Chamis micromechanics: closed-form ply constants from fiber and matrix data.

use super::{FiberCard, MatrixCard, MaterialSystem, PartialMaterial, Property, Provenance};
use crate::error::{Error, Result};

/// Rule of mixtures, `vf * fiber + (1 - vf) * matrix`.
pub fn rule_of_mixtures(vf: f64, fiber: f64, matrix: f64) -> f64 {
    vf * fiber + (1.0 - vf) * matrix
}

/// Matrix-dominated modulus `Em / (1 - sqrt(vf) (1 - Em / Ef))`, shared by
/// E22, G12 and G23.
pub fn matrix_dominated_modulus(vf: f64, fiber: f64, matrix: f64) -> f64 {
    matrix / (1.0 - vf.sqrt() * (1.0 - matrix / fiber))
}

pub fn major_poisson(vf: f64, nu12f: f64, num: f64) -> f64 {
    rule_of_mixtures(vf, nu12f, num)
}

pub fn transverse_poisson(e22: f64, g23: f64) -> f64 {
    e22 / (2.0 * g23) - 1.0
}

pub fn fiber_strength(vf: f64, fiber_strength: f64) -> f64 {
    fiber_strength * vf
}

/// Bracket `1 - (sqrt(vf) - vf) (1 - matrix / fiber)` scaling matrix strengths.
pub fn matrix_strength_factor(vf: f64, fiber_modulus: f64, matrix_modulus: f64) -> f64 {
    1.0 - (vf.sqrt() - vf) * (1.0 - matrix_modulus / fiber_modulus)
}

fn need(value: Option<f64>, field: &'static str, constituent: &'static str, constant: &'static str) -> Result<f64> {
    value.ok_or(Error::CannotDerive {
        field,
        constituent,
        constant,
    })
}

/// Fills every property missing from `measured` with its Chamis estimate.
///
/// Supplied values are kept untouched. A value flagged as estimated in the
/// partial card keeps `Chamis` provenance; everything computed here is tagged
/// `Chamis` too.
pub fn chamis_complete(
    name: &str,
    fiber: &FiberCard,
    matrix: &MatrixCard,
    vf: f64,
    measured: &PartialMaterial,
) -> Result<MaterialSystem> {
    if !(vf > 0.0 && vf < 1.0) {
        return Err(Error::InvalidCard {
            card: name.to_string(),
            field: "vf".into(),
            reason: "must lie in (0, 1)".into(),
        });
    }
    let mut values = [0.0; 13];
    let mut provenance = [Provenance::Measured; 13];

    let mut resolve = |p: Property, derive: &dyn Fn(&[f64; 13]) -> Result<f64>| -> Result<()> {
        let i = p as usize;
        match measured.get(p) {
            Some(v) => {
                values[i] = v;
                if measured.is_estimated(p) {
                    provenance[i] = Provenance::Chamis;
                }
            }
            None => {
                values[i] = derive(&values)?;
                provenance[i] = Provenance::Chamis;
            }
        }
        Ok(())
    };

    resolve(Property::E11, &|_| {
        let ef = need(fiber.e11, "E11", "fiber", "E11f")?;
        let em = need(matrix.e, "E11", "matrix", "Em")?;
        Ok(rule_of_mixtures(vf, ef, em))
    })?;
    resolve(Property::E22, &|_| {
        let ef = need(fiber.e22, "E22", "fiber", "E22f")?;
        let em = need(matrix.e, "E22", "matrix", "Em")?;
        Ok(matrix_dominated_modulus(vf, ef, em))
    })?;
    resolve(Property::Nu12, &|_| {
        let nf = need(fiber.nu12, "nu12", "fiber", "nu12f")?;
        let nm = need(matrix.nu, "nu12", "matrix", "num")?;
        Ok(major_poisson(vf, nf, nm))
    })?;
    resolve(Property::Nu13, &|_| {
        let nf = need(fiber.nu12, "nu13", "fiber", "nu12f")?;
        let nm = need(matrix.nu, "nu13", "matrix", "num")?;
        Ok(major_poisson(vf, nf, nm))
    })?;
    resolve(Property::G12, &|_| {
        let gf = need(fiber.g12, "G12", "fiber", "G12f")?;
        let gm = need(matrix.g, "G12", "matrix", "Gm")?;
        Ok(matrix_dominated_modulus(vf, gf, gm))
    })?;
    resolve(Property::G23, &|_| {
        let gf = need(fiber.g23, "G23", "fiber", "G23f")?;
        let gm = need(matrix.g, "G23", "matrix", "Gm")?;
        Ok(matrix_dominated_modulus(vf, gf, gm))
    })?;
    resolve(Property::Nu23, &|v| {
        Ok(transverse_poisson(v[Property::E22 as usize], v[Property::G23 as usize]))
    })?;
    resolve(Property::Xt, &|_| {
        Ok(fiber_strength(vf, need(fiber.xt, "Xt", "fiber", "Xt_f")?))
    })?;
    resolve(Property::Xc, &|_| {
        Ok(fiber_strength(vf, need(fiber.xc, "Xc", "fiber", "Xc_f")?))
    })?;
    resolve(Property::Yt, &|_| {
        let ef = need(fiber.e22, "Yt", "fiber", "E22f")?;
        let em = need(matrix.e, "Yt", "matrix", "Em")?;
        let xm = need(matrix.xt, "Yt", "matrix", "Xt_m")?;
        Ok(matrix_strength_factor(vf, ef, em) * xm)
    })?;
    resolve(Property::Yc, &|_| {
        let ef = need(fiber.e22, "Yc", "fiber", "E22f")?;
        let em = need(matrix.e, "Yc", "matrix", "Em")?;
        let ym = need(matrix.yc, "Yc", "matrix", "Yc_m")?;
        Ok(matrix_strength_factor(vf, ef, em) * ym)
    })?;
    resolve(Property::S12, &|_| {
        let gf = need(fiber.g12, "S12", "fiber", "G12f")?;
        let gm = need(matrix.g, "S12", "matrix", "Gm")?;
        let sm = need(matrix.s12, "S12", "matrix", "S12_m")?;
        Ok(matrix_strength_factor(vf, gf, gm) * sm)
    })?;
    resolve(Property::Rho, &|_| {
        let rf = need(fiber.rho, "rho", "fiber", "rho_f")?;
        let rm = need(matrix.rho, "rho", "matrix", "rho_m")?;
        Ok(rule_of_mixtures(vf, rf, rm))
    })?;

    MaterialSystem::from_complete(name, vf, values, provenance)
}
