//! Constituent and homogenized material cards.
//!
//! All values use the consistent N-mm-t unit system: moduli and strengths in
//! MPa, densities in t/mm^3. Each homogenized property remembers whether it
//! was measured or estimated with the Chamis rules so reports can tell the two
//! apart.

mod chamis;
mod db;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use chamis::{
    chamis_complete, fiber_strength, major_poisson, matrix_strength_factor, matrix_dominated_modulus,
    rule_of_mixtures, transverse_poisson,
};
pub use db::{load_material_db, MaterialDb, BUNDLED_TABLE};

use crate::error::{Error, Result};

/// Homogenized ply property identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    E11,
    E22,
    Nu12,
    Nu13,
    Nu23,
    G12,
    G23,
    Xt,
    Xc,
    Yt,
    Yc,
    S12,
    Rho,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::E11,
        Property::E22,
        Property::Nu12,
        Property::Nu13,
        Property::Nu23,
        Property::G12,
        Property::G23,
        Property::Xt,
        Property::Xc,
        Property::Yt,
        Property::Yc,
        Property::S12,
        Property::Rho,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Property::E11 => "e11",
            Property::E22 => "e22",
            Property::Nu12 => "nu12",
            Property::Nu13 => "nu13",
            Property::Nu23 => "nu23",
            Property::G12 => "g12",
            Property::G23 => "g23",
            Property::Xt => "xt",
            Property::Xc => "xc",
            Property::Yt => "yt",
            Property::Yc => "yc",
            Property::S12 => "s12",
            Property::Rho => "rho",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Property::ALL.into_iter().find(|p| p.key() == key)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Measured,
    Chamis,
}

/// Fiber constituent constants. Every field is optional; the Chamis rules
/// only ask for the ones the missing ply properties need.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberCard {
    pub name: String,
    pub e11: Option<f64>,
    pub e22: Option<f64>,
    pub g12: Option<f64>,
    pub g23: Option<f64>,
    pub nu12: Option<f64>,
    pub xt: Option<f64>,
    pub xc: Option<f64>,
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Isotropic matrix constituent constants.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixCard {
    pub name: String,
    pub e: Option<f64>,
    pub g: Option<f64>,
    pub nu: Option<f64>,
    pub xt: Option<f64>,
    pub yc: Option<f64>,
    pub s12: Option<f64>,
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstituentKind {
    Fiber,
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstituentCard {
    Fiber(FiberCard),
    Matrix(MatrixCard),
}

impl ConstituentCard {
    pub fn kind(&self) -> ConstituentKind {
        match self {
            ConstituentCard::Fiber(_) => ConstituentKind::Fiber,
            ConstituentCard::Matrix(_) => ConstituentKind::Matrix,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ConstituentCard::Fiber(c) => &c.name,
            ConstituentCard::Matrix(c) => &c.name,
        }
    }

    /// Checks moduli and strengths are positive and Poisson ratios lie in (0, 0.5).
    pub fn validate(&self) -> Result<()> {
        let (moduli, strengths, poisson): (Vec<(&str, Option<f64>)>, Vec<_>, Vec<_>) = match self {
            ConstituentCard::Fiber(c) => (
                vec![("e11", c.e11), ("e22", c.e22), ("g12", c.g12), ("g23", c.g23), ("rho", c.rho)],
                vec![("xt", c.xt), ("xc", c.xc)],
                vec![("nu12", c.nu12)],
            ),
            ConstituentCard::Matrix(c) => (
                vec![("e", c.e), ("g", c.g), ("rho", c.rho)],
                vec![("xt", c.xt), ("yc", c.yc), ("s12", c.s12)],
                vec![("nu", c.nu)],
            ),
        };
        let invalid = |field: &str, reason: &str| Error::InvalidCard {
            card: self.name().to_string(),
            field: field.to_string(),
            reason: reason.to_string(),
        };
        for (field, value) in moduli.into_iter().chain(strengths) {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(field, "must be positive"));
                }
            }
        }
        for (field, value) in poisson {
            if let Some(v) = value {
                if !(v > 0.0 && v < 0.5) {
                    return Err(invalid(field, "must lie in (0, 0.5)"));
                }
            }
        }
        Ok(())
    }
}

/// A ply card with some properties possibly missing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialMaterial {
    values: [Option<f64>; 13],
    estimated: [bool; 13],
}

impl PartialMaterial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, property: Property) -> Option<f64> {
        self.values[property.index()]
    }

    pub fn set(&mut self, property: Property, value: f64) -> &mut Self {
        self.values[property.index()] = Some(value);
        self
    }

    /// Marks a supplied value as a previously tabulated Chamis estimate.
    pub fn set_estimated(&mut self, property: Property, value: f64) -> &mut Self {
        self.set(property, value);
        self.estimated[property.index()] = true;
        self
    }

    pub fn with(mut self, property: Property, value: f64) -> Self {
        self.set(property, value);
        self
    }

    pub fn is_estimated(&self, property: Property) -> bool {
        self.estimated[property.index()]
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

/// Homogenized orthotropic ply card.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSystem {
    pub name: String,
    pub vf: f64,
    pub e11: f64,
    pub e22: f64,
    pub nu12: f64,
    pub nu13: f64,
    pub nu23: f64,
    pub g12: f64,
    pub g23: f64,
    pub xt: f64,
    pub xc: f64,
    pub yt: f64,
    pub yc: f64,
    pub s12: f64,
    pub rho: f64,
    provenance: Vec<(Property, Provenance)>,
}

impl MaterialSystem {
    pub(crate) fn from_complete(name: &str, vf: f64, values: [f64; 13], provenance: [Provenance; 13]) -> Result<Self> {
        let [e11, e22, nu12, nu13, nu23, g12, g23, xt, xc, yt, yc, s12, rho] = values;
        let card = MaterialSystem {
            name: name.to_string(),
            vf,
            e11,
            e22,
            nu12,
            nu13,
            nu23,
            g12,
            g23,
            xt,
            xc,
            yt,
            yc,
            s12,
            rho,
            provenance: Property::ALL.into_iter().zip(provenance).collect(),
        };
        card.validate()?;
        Ok(card)
    }

    pub fn get(&self, property: Property) -> f64 {
        match property {
            Property::E11 => self.e11,
            Property::E22 => self.e22,
            Property::Nu12 => self.nu12,
            Property::Nu13 => self.nu13,
            Property::Nu23 => self.nu23,
            Property::G12 => self.g12,
            Property::G23 => self.g23,
            Property::Xt => self.xt,
            Property::Xc => self.xc,
            Property::Yt => self.yt,
            Property::Yc => self.yc,
            Property::S12 => self.s12,
            Property::Rho => self.rho,
        }
    }

    fn slot(&mut self, property: Property) -> &mut f64 {
        match property {
            Property::E11 => &mut self.e11,
            Property::E22 => &mut self.e22,
            Property::Nu12 => &mut self.nu12,
            Property::Nu13 => &mut self.nu13,
            Property::Nu23 => &mut self.nu23,
            Property::G12 => &mut self.g12,
            Property::G23 => &mut self.g23,
            Property::Xt => &mut self.xt,
            Property::Xc => &mut self.xc,
            Property::Yt => &mut self.yt,
            Property::Yc => &mut self.yc,
            Property::S12 => &mut self.s12,
            Property::Rho => &mut self.rho,
        }
    }

    pub fn provenance(&self, property: Property) -> Provenance {
        self.provenance[property.index()].1
    }

    /// Replaces a single property, e.g. to swap a measured strength for its
    /// Chamis estimate. The card is re-validated.
    pub fn with_override(mut self, property: Property, value: f64, provenance: Provenance) -> Result<Self> {
        *self.slot(property) = value;
        self.provenance[property.index()].1 = provenance;
        self.validate()?;
        Ok(self)
    }

    pub fn to_partial(&self) -> PartialMaterial {
        let mut partial = PartialMaterial::new();
        for p in Property::ALL {
            match self.provenance(p) {
                Provenance::Measured => partial.set(p, self.get(p)),
                Provenance::Chamis => partial.set_estimated(p, self.get(p)),
            };
        }
        partial
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, reason: &str| Error::InvalidCard {
            card: self.name.clone(),
            field: field.to_string(),
            reason: reason.to_string(),
        };
        if !(self.vf > 0.0 && self.vf < 1.0) {
            return Err(invalid("vf", "must lie in (0, 1)"));
        }
        for p in Property::ALL {
            let v = self.get(p);
            if !v.is_finite() {
                return Err(invalid(p.key(), "must be finite"));
            }
        }
        if self.e22 <= 0.0 {
            return Err(invalid("e22", "must be positive"));
        }
        if self.e11 < self.e22 {
            return Err(invalid("e11", "must not be below e22"));
        }
        for p in [Property::G12, Property::G23, Property::Rho] {
            if self.get(p) <= 0.0 {
                return Err(invalid(p.key(), "must be positive"));
            }
        }
        for p in [Property::Xt, Property::Xc, Property::Yt, Property::Yc, Property::S12] {
            if self.get(p) <= 0.0 {
                return Err(invalid(p.key(), "strength must be positive"));
            }
        }
        for p in [Property::Nu12, Property::Nu13, Property::Nu23] {
            let v = self.get(p);
            if !(v > -1.0 && v < 1.0) {
                return Err(invalid(p.key(), "outside (-1, 1)"));
            }
        }
        if self.provenance(Property::Nu23) == Provenance::Chamis {
            let expected = transverse_poisson(self.e22, self.g23);
            if (self.nu23 - expected).abs() > 1e-6 * expected.abs().max(1.0) {
                return Err(invalid(
                    "nu23",
                    &format!("estimated value {} is inconsistent with e22/(2 g23) - 1 = {expected:.6}", self.nu23),
                ));
            }
        }
        Ok(())
    }
}

/// Isotropic polymer card, used for the liner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropicCard {
    pub name: String,
    pub e: f64,
    pub nu: f64,
    #[serde(default)]
    pub xt: Option<f64>,
    #[serde(default)]
    pub yt: Option<f64>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IsotropicCard {
    pub fn shear_modulus(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.nu))
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, reason: &str| Error::InvalidCard {
            card: self.name.clone(),
            field: field.to_string(),
            reason: reason.to_string(),
        };
        if !(self.e > 0.0 && self.e.is_finite()) {
            return Err(invalid("e", "must be positive"));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(invalid("nu", "must lie in (0, 0.5)"));
        }
        for (field, value) in [("xt", self.xt), ("yt", self.yt), ("rho", self.rho)] {
            if let Some(v) = value {
                if v <= 0.0 {
                    return Err(invalid(field, "must be positive"));
                }
            }
        }
        Ok(())
    }
}
