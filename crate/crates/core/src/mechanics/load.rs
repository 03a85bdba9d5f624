use serde::{Deserialize, Serialize};

use crate::winding::{Region, VesselGeometry};

/// How the pressure acting over the polar openings reaches the shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarEnds {
    /// Openings are sealed by bosses that pass their pressure load into the
    /// shell edge: the closed-shell resultants.
    Capped,
    /// Pressure acts on the shell surface only; the opening edges are free
    /// and the axial imbalance is taken by the support.
    Open,
}

/// Internal pressure plus optional hydrostatic head of a water fill.
/// Units: MPa, t/mm^3, mm/s^2, mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoadCase {
    pub internal_pressure: f64,
    pub hydrostatic: bool,
    pub water_density: f64,
    pub gravity: f64,
    /// Height of the free surface above the bottom pole; `None` fills the
    /// whole vessel.
    pub fill_height: Option<f64>,
    pub ends: PolarEnds,
}

impl Default for LoadCase {
    fn default() -> Self {
        Self {
            internal_pressure: 2.0,
            hydrostatic: true,
            water_density: 1.0e-9,
            gravity: 9810.0,
            fill_height: None,
            ends: PolarEnds::Capped,
        }
    }
}

impl LoadCase {
    pub fn internal_only(pressure: f64) -> Self {
        Self {
            internal_pressure: pressure,
            hydrostatic: false,
            ..Self::default()
        }
    }

    pub fn hydrostatic_pressure(&self, depth: f64) -> f64 {
        if self.hydrostatic && depth > 0.0 {
            self.water_density * self.gravity * depth
        } else {
            0.0
        }
    }

    /// Local pressure at height `z` above the bottom pole.
    pub fn pressure_at(&self, z: f64, total_height: f64) -> f64 {
        let surface = self.fill_height.unwrap_or(total_height);
        self.internal_pressure + self.hydrostatic_pressure(surface - z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembraneForces {
    pub pressure: f64,
    /// Meridional force resultant, N/mm.
    pub n_phi: f64,
    /// Circumferential force resultant, N/mm.
    pub n_theta: f64,
}

/// Axisymmetric membrane equilibrium at a station.
///
/// Capped ends give `N_phi = p r2 / 2`, `N_theta = p r2 (1 - r2 / (2 r1))`.
/// With open ends the meridional force balances only the pressure on the
/// shell between the cut and the free opening edge,
/// `N_phi = p r2 / 2 (1 - r_o^2 / r^2)`, and `N_theta = r2 (p - N_phi / r1)`.
/// The lower dome is measured from its own opening; the cylinder and upper
/// dome from the upper opening, with the support reacting the difference.
pub fn membrane_forces(geom: &VesselGeometry, load: &LoadCase, station: usize) -> MembraneForces {
    let st = &geom.stations[station];
    let p = load.pressure_at(st.z, geom.total_height());
    match load.ends {
        PolarEnds::Capped => forces_from_curvature(p, st.r1, st.r2),
        PolarEnds::Open => {
            let r_o = match st.region {
                Region::DomeDown => geom.params.opening_down,
                Region::Cylinder | Region::DomeUp => geom.params.opening_up,
            };
            open_end_forces(p, st.r, st.r1, st.r2, r_o)
        }
    }
}

pub fn forces_from_curvature(pressure: f64, r1: f64, r2: f64) -> MembraneForces {
    let ratio = if r1.is_infinite() { 0.0 } else { r2 / r1 };
    MembraneForces {
        pressure,
        n_phi: pressure * r2 / 2.0,
        n_theta: pressure * r2 * (1.0 - ratio / 2.0),
    }
}

pub fn open_end_forces(pressure: f64, r: f64, r1: f64, r2: f64, r_open: f64) -> MembraneForces {
    let n_phi = pressure * r2 / 2.0 * (1.0 - (r_open / r).powi(2)).max(0.0);
    let curvature = if r1.is_infinite() { 0.0 } else { n_phi / r1 };
    MembraneForces {
        pressure,
        n_phi,
        n_theta: r2 * (pressure - curvature),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::winding::{build_geometry, GeometryParams, Region};
    use approx::assert_relative_eq;

    #[test]
    fn cylinder_closed_form() {
        let f = forces_from_curvature(2.0, f64::INFINITY, 250.0);
        assert_eq!(f.n_theta, 500.0);
        assert_eq!(f.n_phi, 250.0);
    }

    #[test]
    fn sphere_is_equibiaxial() {
        let f = forces_from_curvature(2.0, 250.0, 250.0);
        assert_eq!(f.n_phi, 250.0);
        assert_eq!(f.n_theta, 250.0);
    }

    #[test]
    fn hydrostatic_head_at_full_depth() {
        let load = LoadCase::default();
        assert_relative_eq!(load.hydrostatic_pressure(1065.0), 0.010_447_65, max_relative = 1e-9);
        assert_relative_eq!(load.pressure_at(0.0, 1065.0), 2.010_447_65, max_relative = 1e-9);
        assert_eq!(load.pressure_at(1065.0, 1065.0), 2.0);
        assert_eq!(LoadCase::internal_only(2.0).pressure_at(0.0, 1065.0), 2.0);
    }

    #[test]
    fn bottom_of_cylinder_carries_more_hoop_force() {
        let geom = build_geometry(&GeometryParams::default()).unwrap();
        let load = LoadCase::default();
        let cyl: Vec<usize> = (0..geom.len())
            .filter(|&i| geom.stations[i].region == Region::Cylinder)
            .collect();
        let bottom = membrane_forces(&geom, &load, cyl[0]);
        let top = membrane_forces(&geom, &load, *cyl.last().unwrap());
        assert!(bottom.n_theta > top.n_theta);
    }

    #[test]
    fn open_edge_is_free_of_meridional_force() {
        let f = open_end_forces(2.0, 20.0, 300.0, 500.0, 20.0);
        assert_eq!(f.n_phi, 0.0);
        assert_eq!(f.n_theta, 1000.0);
    }

    #[test]
    fn open_forces_satisfy_laplace_relation() {
        let (p, r, r1, r2) = (2.0, 180.0, 320.0, 410.0);
        let f = open_end_forces(p, r, r1, r2, 60.0);
        assert_relative_eq!(f.n_phi / r1 + f.n_theta / r2, p, max_relative = 1e-12);
        let g = forces_from_curvature(p, r1, r2);
        assert_relative_eq!(g.n_phi / r1 + g.n_theta / r2, p, max_relative = 1e-12);
    }

    #[test]
    fn open_cylinder_carries_reduced_axial_force() {
        let f = open_end_forces(2.0, 250.0, f64::INFINITY, 250.0, 20.0);
        assert_relative_eq!(f.n_phi, 250.0 * (1.0 - 0.0064), max_relative = 1e-12);
        assert_eq!(f.n_theta, 500.0);
    }
}
