use std::path::Path;

use serde::Deserialize;

use super::{chamis_complete, ConstituentCard, FiberCard, IsotropicCard, MaterialSystem, MatrixCard, PartialMaterial, Property};
use crate::error::{Error, Result};

/// The bundled default database reproducing the published GF-PP, CF-PA and
/// FF-PLA cards plus the PP liner.
pub const BUNDLED_TABLE: &str = include_str!("../../materials/default_table1.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDb {
    #[serde(default)]
    fiber: Vec<FiberCard>,
    #[serde(default)]
    matrix: Vec<MatrixCard>,
    #[serde(default)]
    composite: Vec<RawComposite>,
    #[serde(default)]
    isotropic: Vec<IsotropicCard>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComposite {
    name: String,
    fiber: Option<String>,
    matrix: Option<String>,
    vf: f64,
    e11: Option<f64>,
    e22: Option<f64>,
    nu12: Option<f64>,
    nu13: Option<f64>,
    nu23: Option<f64>,
    g12: Option<f64>,
    g23: Option<f64>,
    xt: Option<f64>,
    xc: Option<f64>,
    yt: Option<f64>,
    yc: Option<f64>,
    s12: Option<f64>,
    rho: Option<f64>,
    #[serde(default)]
    estimated: Vec<String>,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

impl RawComposite {
    fn partial(&self) -> Result<PartialMaterial> {
        let mut partial = PartialMaterial::new();
        let fields = [
            (Property::E11, self.e11),
            (Property::E22, self.e22),
            (Property::Nu12, self.nu12),
            (Property::Nu13, self.nu13),
            (Property::Nu23, self.nu23),
            (Property::G12, self.g12),
            (Property::G23, self.g23),
            (Property::Xt, self.xt),
            (Property::Xc, self.xc),
            (Property::Yt, self.yt),
            (Property::Yc, self.yc),
            (Property::S12, self.s12),
            (Property::Rho, self.rho),
        ];
        for key in &self.estimated {
            let known = Property::from_key(key).ok_or_else(|| Error::InvalidCard {
                card: self.name.clone(),
                field: key.clone(),
                reason: "is not a ply property".into(),
            })?;
            if fields.iter().all(|(p, v)| *p != known || v.is_none()) {
                return Err(Error::InvalidCard {
                    card: self.name.clone(),
                    field: key.clone(),
                    reason: "is listed as estimated but has no value".into(),
                });
            }
        }
        for (p, value) in fields {
            if let Some(v) = value {
                if self.estimated.iter().any(|k| k == p.key()) {
                    partial.set_estimated(p, v);
                } else {
                    partial.set(p, v);
                }
            }
        }
        Ok(partial)
    }
}

/// Parsed material database. Immutable after loading.
#[derive(Debug, Clone, Default)]
pub struct MaterialDb {
    pub fibers: Vec<FiberCard>,
    pub matrices: Vec<MatrixCard>,
    pub composites: Vec<MaterialSystem>,
    pub isotropic: Vec<IsotropicCard>,
}

impl MaterialDb {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED_TABLE).expect("bundled material table is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawDb = toml::from_str(text).map_err(|e| Error::MaterialParse(e.to_string()))?;
        for card in &raw.fiber {
            ConstituentCard::Fiber(card.clone()).validate()?;
        }
        for card in &raw.matrix {
            ConstituentCard::Matrix(card.clone()).validate()?;
        }
        for card in &raw.isotropic {
            card.validate()?;
        }

        let empty_fiber = FiberCard::default();
        let empty_matrix = MatrixCard::default();
        let mut composites = Vec::with_capacity(raw.composite.len());
        for comp in &raw.composite {
            let fiber = match &comp.fiber {
                Some(name) => raw
                    .fiber
                    .iter()
                    .find(|f| &f.name == name)
                    .ok_or_else(|| Error::InvalidCard {
                        card: comp.name.clone(),
                        field: "fiber".into(),
                        reason: format!("references unknown fiber `{name}`"),
                    })?,
                None => &empty_fiber,
            };
            let matrix = match &comp.matrix {
                Some(name) => raw
                    .matrix
                    .iter()
                    .find(|m| &m.name == name)
                    .ok_or_else(|| Error::InvalidCard {
                        card: comp.name.clone(),
                        field: "matrix".into(),
                        reason: format!("references unknown matrix `{name}`"),
                    })?,
                None => &empty_matrix,
            };
            let partial = comp.partial()?;
            let card = chamis_complete(&comp.name, fiber, matrix, comp.vf, &partial).map_err(|e| match e {
                Error::CannotDerive { .. } => Error::InvalidCard {
                    card: comp.name.clone(),
                    field: "constituents".into(),
                    reason: e.to_string(),
                },
                other => other,
            })?;
            composites.push(card);
        }

        Ok(MaterialDb {
            fibers: raw.fiber,
            matrices: raw.matrix,
            composites,
            isotropic: raw.isotropic,
        })
    }

    pub fn composite(&self, name: &str) -> Result<&MaterialSystem> {
        self.composites
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn isotropic(&self, name: &str) -> Result<&IsotropicCard> {
        self.isotropic
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn fiber(&self, name: &str) -> Option<&FiberCard> {
        self.fibers.iter().find(|c| c.name == name)
    }

    pub fn matrix(&self, name: &str) -> Option<&MatrixCard> {
        self.matrices.iter().find(|c| c.name == name)
    }
}

pub fn load_material_db(path: impl AsRef<Path>) -> Result<MaterialDb> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    MaterialDb::from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Provenance;
    use approx::assert_relative_eq;

    #[test]
    fn bundled_defaults_match_published_cards() {
        let db = MaterialDb::bundled();
        let gf = db.composite("GF-PP").unwrap();
        assert_eq!(gf.xt, 765.0);
        assert_eq!(gf.rho, 1.63e-9);
        assert_eq!(gf.yt, 13.1);
        assert_eq!(gf.yc, 38.3);
        assert_eq!(gf.provenance(Property::G23), Provenance::Chamis);
        assert_eq!(gf.provenance(Property::Xt), Provenance::Measured);
        assert_eq!(db.composite("CF-PA").unwrap().e11, 90296.0);
        assert_eq!(db.composite("FF-PLA").unwrap().xt, 295.0);
        let liner = db.isotropic("PP-liner").unwrap();
        assert_eq!(liner.e, 1300.0);
        assert_eq!(liner.nu, 0.42);
    }

    #[test]
    fn constituents_reproduce_tabulated_estimates() {
        let db = MaterialDb::bundled();
        for (name, fiber, matrix) in [("CF-PA", "carbon-SM", "PA6"), ("FF-PLA", "flax", "PLA")] {
            let card = db.composite(name).unwrap();
            let derived = chamis_complete(
                name,
                db.fiber(fiber).unwrap(),
                db.matrix(matrix).unwrap(),
                0.45,
                &PartialMaterial::new(),
            )
            .unwrap();
            for p in Property::ALL {
                if card.provenance(p) == Provenance::Chamis && p != Property::Nu13 && p != Property::Nu23 {
                    assert_relative_eq!(derived.get(p), card.get(p), max_relative = 0.01);
                }
            }
        }
    }

    #[test]
    fn empty_file_gives_empty_database() {
        let db = MaterialDb::from_toml_str("").unwrap();
        assert!(db.composites.is_empty());
        assert!(db.isotropic.is_empty());
    }

    #[test]
    fn parse_error_reports_location() {
        let err = MaterialDb::from_toml_str("[[composite]]\nname = \"A\"\nvf = oops\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err = MaterialDb::from_toml_str("[[isotropic]]\nname = \"A\"\ne = 1.0\nnu = 0.3\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn invariant_violation_rejects_card() {
        let text = BUNDLED_TABLE.replace("xt = 765.0", "xt = -765.0");
        let err = MaterialDb::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("GF-PP"), "{err}");
    }

    #[test]
    fn inconsistent_estimated_nu23_is_rejected() {
        let text = BUNDLED_TABLE.replace(
            "# nu23 derived from e22 and g23",
            "nu23 = 0.31",
        )
        .replace(
            "estimated = [\"e22\", \"nu12\", \"nu13\", \"g12\", \"g23\", \"yt\", \"yc\"]",
            "estimated = [\"e22\", \"nu12\", \"nu13\", \"nu23\", \"g12\", \"g23\", \"yt\", \"yc\"]",
        );
        let err = MaterialDb::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("nu23"), "{err}");
    }

    #[test]
    fn composite_without_constituents_needs_every_field() {
        let err = MaterialDb::from_toml_str("[[composite]]\nname = \"A\"\nvf = 0.5\ne11 = 100.0\n").unwrap_err();
        assert!(err.to_string().contains("cannot derive"), "{err}");
    }
}
