use serde::{Deserialize, Serialize};

use super::geometry::{DomeSide, Region, VesselGeometry};
use super::trajectory::{dome_thickness, fiber_angle, LayerKind, WindingLayerSpec};
use crate::error::{Error, Result};

/// Axial partition of the cylinder used for the per-layer angle arrays.
/// Boundaries are fractions of the cylinder height, from 0 to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionPartition {
    boundaries: Vec<f64>,
}

impl SectionPartition {
    pub fn uniform(sections: usize) -> Result<Self> {
        if sections == 0 {
            return Err(Error::InvalidSections("at least one section is required".into()));
        }
        Ok(Self {
            boundaries: (0..=sections).map(|k| k as f64 / sections as f64).collect(),
        })
    }

    pub fn from_boundaries(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidSections("need at least two boundaries".into()));
        }
        if boundaries[0] != 0.0 || *boundaries.last().unwrap() != 1.0 {
            return Err(Error::InvalidSections("boundaries must start at 0 and end at 1".into()));
        }
        if boundaries.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSections("boundaries must be strictly increasing".into()));
        }
        Ok(Self { boundaries })
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn sections(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Interpolates node values over the partition at fraction `u`.
    fn interpolate(&self, nodes: &[f64], u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let k = self
            .boundaries
            .windows(2)
            .position(|w| u <= w[1])
            .unwrap_or(self.sections() - 1);
        let (b0, b1) = (self.boundaries[k], self.boundaries[k + 1]);
        let w = (u - b0) / (b1 - b0);
        nodes[k] + w * (nodes[k + 1] - nodes[k])
    }
}

impl Default for SectionPartition {
    fn default() -> Self {
        Self::uniform(8).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlyDescriptor {
    pub layer: usize,
    pub kind: LayerKind,
    /// +1 / -1 for the helical pair, 0 for hoop plies.
    pub sign: i8,
}

/// Angle (deg, signed) and thickness (mm) of one ply at one station. Absent
/// plies have zero thickness and a NaN angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlyCell {
    pub angle: f64,
    pub thickness: f64,
}

impl PlyCell {
    pub const ABSENT: PlyCell = PlyCell {
        angle: f64::NAN,
        thickness: 0.0,
    };

    pub fn is_present(&self) -> bool {
        self.thickness > 0.0
    }
}

#[derive(Debug, Clone)]
pub struct LayupField {
    pub layers: Vec<WindingLayerSpec>,
    pub plies: Vec<PlyDescriptor>,
    /// `cells[station][ply]`
    pub cells: Vec<Vec<PlyCell>>,
    pub sections: SectionPartition,
    /// `section_angles[layer][node]`: cylinder angle at each section boundary.
    pub section_angles: Vec<Vec<f64>>,
}

impl LayupField {
    pub fn station_thickness(&self, station: usize) -> f64 {
        self.cells[station].iter().map(|c| c.thickness).sum()
    }

    /// Unsigned fiber angle of a layer at a station, or `None` if absent.
    pub fn layer_angle(&self, station: usize, layer: usize) -> Option<f64> {
        self.plies
            .iter()
            .position(|p| p.layer == layer)
            .map(|i| self.cells[station][i])
            .filter(PlyCell::is_present)
            .map(|c| c.angle.abs())
    }

    /// Total thickness of a layer (both plies of a helical pair) at a station.
    pub fn layer_thickness(&self, station: usize, layer: usize) -> f64 {
        self.plies
            .iter()
            .zip(&self.cells[station])
            .filter(|(p, _)| p.layer == layer)
            .map(|(_, c)| c.thickness)
            .sum()
    }

    /// Stations without any ply of nonzero thickness.
    pub fn uncovered_stations(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| !self.cells[i].iter().any(PlyCell::is_present))
            .collect()
    }
}

fn dome_side(region: Region) -> Option<DomeSide> {
    match region {
        Region::DomeDown => Some(DomeSide::Down),
        Region::DomeUp => Some(DomeSide::Up),
        Region::Cylinder => None,
    }
}

/// Builds per-station ply angles and thicknesses.
///
/// Helical layers contribute a `+a/-a` ply pair, present on a dome only
/// where `r >= r0` for that dome. On the cylinder each helical layer's angle
/// runs linearly in height from its lower to its upper junction angle,
/// sampled through the section partition. Hoop layers exist only on the
/// cylinder.
pub fn build_layup(
    geom: &VesselGeometry,
    layers: &[WindingLayerSpec],
    sections: &SectionPartition,
) -> Result<LayupField> {
    let radius = geom.radius();
    for layer in layers {
        layer.validate()?;
        if (layer.radius - radius).abs() > 1e-9 * radius {
            return Err(Error::InvalidLayer(format!(
                "layer radius {} differs from the vessel radius {radius}",
                layer.radius
            )));
        }
    }

    let mut plies = Vec::new();
    for (i, layer) in layers.iter().enumerate() {
        match layer.kind {
            LayerKind::Helical => {
                plies.push(PlyDescriptor { layer: i, kind: LayerKind::Helical, sign: 1 });
                plies.push(PlyDescriptor { layer: i, kind: LayerKind::Helical, sign: -1 });
            }
            LayerKind::Hoop => plies.push(PlyDescriptor { layer: i, kind: LayerKind::Hoop, sign: 0 }),
        }
    }

    let section_angles: Vec<Vec<f64>> = layers
        .iter()
        .map(|layer| {
            let lo = layer.alpha_c(DomeSide::Down);
            let hi = layer.alpha_c(DomeSide::Up);
            sections.boundaries().iter().map(|b| lo + (hi - lo) * b).collect()
        })
        .collect();

    let z0 = geom.cylinder_start();
    let hc = geom.params.cylinder_height;
    let tol = 1e-9 * radius;

    let mut cells = Vec::with_capacity(geom.len());
    for station in &geom.stations {
        let mut row = Vec::with_capacity(plies.len());
        for ply in &plies {
            let layer = &layers[ply.layer];
            let cell = match (dome_side(station.region), layer.kind) {
                (None, LayerKind::Hoop) => PlyCell {
                    angle: layer.hoop_angle,
                    thickness: layer.th_c,
                },
                (None, LayerKind::Helical) => {
                    let u = (station.z - z0) / hc;
                    let angle = sections.interpolate(&section_angles[ply.layer], u);
                    PlyCell {
                        angle: angle * f64::from(ply.sign),
                        thickness: layer.th_c,
                    }
                }
                (Some(_), LayerKind::Hoop) => PlyCell::ABSENT,
                (Some(side), LayerKind::Helical) => {
                    if station.r < layer.opening(side) - tol {
                        PlyCell::ABSENT
                    } else {
                        let angle = fiber_angle(layer, station.r, side)?;
                        PlyCell {
                            angle: angle * f64::from(ply.sign),
                            thickness: dome_thickness(layer, station.r, side)?,
                        }
                    }
                }
            };
            row.push(if cell.thickness > 0.0 { cell } else { PlyCell::ABSENT });
        }
        cells.push(row);
    }

    Ok(LayupField {
        layers: layers.to_vec(),
        plies,
        cells,
        sections: sections.clone(),
        section_angles,
    })
}
