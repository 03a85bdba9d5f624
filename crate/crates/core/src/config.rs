//! Run configuration, read from TOML. Every section is optional and falls
//! back to the reference vessel setup.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::failure::Criterion;
use crate::materials::{load_material_db, MaterialDb, MaterialSystem, Property, Provenance};
use crate::mechanics::{Lamina, LinerPly, LoadCase};
use crate::optimize::{DesignVector, EvalContext, HookeJeevesConfig, MigaConfig, ObjectiveConfig, StackLayout, WindingParams};
use crate::winding::{build_geometry, GeometryParams, LayerKind, SectionPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Miga,
    HookeJeeves,
}

impl OptimizerKind {
    pub fn label(self) -> &'static str {
        match self {
            OptimizerKind::Miga => "miga",
            OptimizerKind::HookeJeeves => "hooke_jeeves",
        }
    }
}

/// Layer order and design-space limits. The fixed openings of layer 1 are
/// the geometry's boss radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StackConfig {
    pub layers: Vec<LayerKind>,
    pub thickness_min: f64,
    pub thickness_max: f64,
    pub opening_max: Option<f64>,
    /// Isotropic card used for the liner.
    pub liner: String,
    /// Include the liner in the laminate stiffness. It never counts toward
    /// composite mass or failure.
    pub liner_load_bearing: bool,
}

impl Default for StackConfig {
    fn default() -> Self {
        use LayerKind::{Helical, Hoop};
        Self {
            layers: vec![Helical, Hoop, Helical, Hoop, Helical, Hoop, Hoop],
            thickness_min: 0.01,
            thickness_max: 2.0,
            opening_max: None,
            liner: "PP-liner".into(),
            liner_load_bearing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub criterion: Criterion,
    pub optimizer: OptimizerKind,
    /// Composite card to optimize.
    pub material: String,
    /// Cards listed by the netting table; empty means every composite.
    pub netting_materials: Vec<String>,
    /// Alternative material table; the bundled one when unset.
    pub material_db: Option<PathBuf>,
    /// Property overrides applied to the selected card, e.g. `yt = 24.0`.
    pub overrides: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
    pub geometry: GeometryParams,
    pub load: LoadCase,
    pub stack: StackConfig,
    pub winding: WindingParams,
    /// Number of equal axial sections carrying cylinder angle nodes.
    pub sections: usize,
    pub miga: MigaConfig,
    pub hooke_jeeves: HookeJeevesConfig,
    pub objective: ObjectiveConfig,
    /// Pattern-search start; the box center when unset.
    pub start: Option<DesignVector>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            criterion: Criterion::TsaiWu,
            optimizer: OptimizerKind::Miga,
            material: "GF-PP".into(),
            netting_materials: Vec::new(),
            material_db: None,
            overrides: BTreeMap::new(),
            output_dir: PathBuf::from("runs/latest"),
            geometry: GeometryParams::default(),
            load: LoadCase::default(),
            stack: StackConfig::default(),
            winding: WindingParams::default(),
            sections: 8,
            miga: MigaConfig::default(),
            hooke_jeeves: HookeJeevesConfig::default(),
            objective: ObjectiveConfig::default(),
            start: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks everything that does not need the material table.
    pub fn validate(&self) -> Result<()> {
        for key in self.overrides.keys() {
            if Property::from_key(key).is_none() {
                return Err(Error::Config(format!("unknown property override `{key}`")));
            }
        }
        if self.sections == 0 {
            return Err(Error::Config("sections must be at least 1".into()));
        }
        self.objective.validate()?;
        self.miga.validate()?;
        self.hooke_jeeves.validate()?;
        self.layout()
            .validate(self.geometry.radius, self.winding.bandwidth)
    }

    pub fn material_db(&self) -> Result<MaterialDb> {
        match &self.material_db {
            Some(p) => load_material_db(p),
            None => Ok(MaterialDb::bundled()),
        }
    }

    /// The named card with this run's overrides applied.
    pub fn material_system(&self, db: &MaterialDb, name: &str) -> Result<MaterialSystem> {
        let mut card = db.composite(name)?.clone();
        for (key, &value) in &self.overrides {
            let property = Property::from_key(key).ok_or_else(|| Error::Config(format!("unknown property override `{key}`")))?;
            card = card.with_override(property, value, Provenance::Measured)?;
        }
        Ok(card)
    }

    pub fn layout(&self) -> StackLayout {
        StackLayout {
            layers: self.stack.layers.clone(),
            fixed_opening_up: self.geometry.opening_up,
            fixed_opening_down: self.geometry.opening_down,
            thickness_min: self.stack.thickness_min,
            thickness_max: self.stack.thickness_max,
            opening_max: self.stack.opening_max,
        }
    }

    pub fn miga_config(&self) -> MigaConfig {
        MigaConfig {
            seed: self.seed,
            ..self.miga.clone()
        }
    }

    pub fn context(&self, db: &MaterialDb) -> Result<EvalContext> {
        let liner = if self.stack.liner_load_bearing {
            let card = db.isotropic(&self.stack.liner)?;
            Some(LinerPly {
                lamina: Lamina::from(card),
                thickness: self.geometry.liner_thickness,
            })
        } else {
            None
        };
        Ok(EvalContext {
            geometry: build_geometry(&self.geometry)?,
            layout: self.layout(),
            winding: self.winding.clone(),
            sections: SectionPartition::uniform(self.sections)?,
            material: self.material_system(db, &self.material)?,
            liner,
            load: self.load.clone(),
            criterion: self.criterion,
            objective: self.objective.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_reference_setup() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.layout().n_vars(), 11);
    }

    #[test]
    fn shipped_default_matches_built_in_defaults() {
        let text = include_str!("../configs/default.toml");
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(
            cfg,
            RunConfig {
                output_dir: "runs/default".into(),
                ..RunConfig::default()
            }
        );
    }

    #[test]
    fn snapshot_roundtrips() {
        let mut cfg = RunConfig::default();
        cfg.overrides.insert("yt".into(), 24.0);
        cfg.criterion = Criterion::MaxPrincipal;
        let back = RunConfig::from_toml_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_and_values_are_rejected() {
        assert!(RunConfig::from_toml_str("sead = 3").is_err());
        assert!(RunConfig::from_toml_str("criterion = \"von_mises\"").is_err());
        assert!(RunConfig::from_toml_str("optimizer = \"sqp\"").is_err());
        assert!(RunConfig::from_toml_str("[overrides]\nfoo = 1.0").is_err());
    }

    #[test]
    fn overrides_reach_the_card() {
        let cfg = RunConfig::from_toml_str("[overrides]\nyt = 24.0").unwrap();
        let db = MaterialDb::bundled();
        let ctx = cfg.context(&db).unwrap();
        assert_eq!(ctx.material.yt, 24.0);
        assert!(ctx.liner.is_some());
    }

    #[test]
    fn unknown_material_is_reported() {
        let cfg = RunConfig::from_toml_str("material = \"XX-YY\"").unwrap();
        assert!(matches!(cfg.context(&MaterialDb::bundled()), Err(Error::UnknownMaterial(_))));
    }
}
