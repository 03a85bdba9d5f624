use std::f64::consts::PI;

use serde::Serialize;

use super::laminate::LaminateState;
use crate::winding::{dome_thickness, DomeSide, LayerKind, LayupField, PlyCell, Region, VesselGeometry};

fn side_of(region: Region) -> Option<DomeSide> {
    match region {
        Region::DomeDown => Some(DomeSide::Down),
        Region::DomeUp => Some(DomeSide::Up),
        Region::Cylinder => None,
    }
}

/// Composite mass in kg: `sum over plies of rho * th dA`, trapezoidal in arc
/// length with `dA = 2 pi r ds`. The liner is not part of the layup and so
/// never contributes.
///
/// Dome cells in which a helical ply starts (one end below its opening) are
/// integrated only over the covered fraction, found by linear interpolation
/// of `r` to the opening radius.
pub fn total_mass(layup: &LayupField, geom: &VesselGeometry, rho: f64) -> f64 {
    let mut volume = 0.0;
    for w in 0..geom.len().saturating_sub(1) {
        let (a, b) = (&geom.stations[w], &geom.stations[w + 1]);
        let ds = b.s - a.s;
        let on_cylinder = a.region == Region::Cylinder || b.region == Region::Cylinder;
        for (p, ply) in layup.plies.iter().enumerate() {
            let layer = &layup.layers[ply.layer];
            if on_cylinder {
                // junction stations sit at r = R, where every ply has th_c
                let th = |region: Region, cell: &PlyCell| {
                    if region == Region::Cylinder {
                        cell.thickness
                    } else {
                        layer.th_c
                    }
                };
                let ta = th(a.region, &layup.cells[w][p]);
                let tb = th(b.region, &layup.cells[w + 1][p]);
                volume += PI * (a.r * ta + b.r * tb) * ds;
                continue;
            }
            let (ca, cb) = (layup.cells[w][p], layup.cells[w + 1][p]);
            match (ca.is_present(), cb.is_present()) {
                (true, true) => volume += PI * (a.r * ca.thickness + b.r * cb.thickness) * ds,
                (false, false) => {}
                (pa, _) => {
                    if layer.kind != LayerKind::Helical {
                        continue;
                    }
                    let Some(side) = side_of(a.region) else { continue };
                    let (inside, outside, th_in) = if pa { (a, b, ca.thickness) } else { (b, a, cb.thickness) };
                    let r0 = layer.opening(side);
                    let span = inside.r - outside.r;
                    if span.abs() <= f64::EPSILON * inside.r {
                        continue;
                    }
                    let frac = ((inside.r - r0) / span).clamp(0.0, 1.0);
                    let th0 = dome_thickness(layer, r0, side).unwrap_or(th_in);
                    volume += PI * (inside.r * th_in + r0 * th0) * ds * frac;
                }
            }
        }
    }
    volume * rho * 1.0e3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySummary {
    /// Area integral of the strain energy density, mJ.
    pub total: f64,
    /// Largest station density, mJ/mm^2.
    pub peak_density: f64,
    pub peak_station: usize,
}

pub fn total_strain_energy(geom: &VesselGeometry, states: &[LaminateState]) -> EnergySummary {
    let mut total = 0.0;
    for w in 0..states.len().saturating_sub(1) {
        let (a, b) = (&geom.stations[w], &geom.stations[w + 1]);
        total += PI * (a.r * states[w].energy_density + b.r * states[w + 1].energy_density) * (b.s - a.s);
    }
    let (peak_station, peak_density) = states
        .iter()
        .map(|s| s.energy_density)
        .enumerate()
        .fold((0, 0.0), |best, (i, u)| if u > best.1 { (i, u) } else { best });
    EnergySummary {
        total,
        peak_density,
        peak_station,
    }
}
