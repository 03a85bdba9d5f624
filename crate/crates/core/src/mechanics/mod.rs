//! Membrane equilibrium, laminate resolution, mass and strain energy.

mod integrate;
mod laminate;
mod load;

pub use integrate::{total_mass, total_strain_energy, EnergySummary};
pub use laminate::{laminate_solve, rotated_stiffness, strain_rotation, Lamina, LaminateState, Ply, PlyStress};
pub use load::{forces_from_curvature, membrane_forces, open_end_forces, LoadCase, MembraneForces, PolarEnds};

use crate::error::Result;
use crate::winding::{LayupField, VesselGeometry};

/// Isotropic liner, laid as the innermost ply when it is load-bearing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinerPly {
    pub lamina: Lamina,
    pub thickness: f64,
}

/// Ply stack at one station. Layup plies come first in layup order, the
/// liner (if any) last; absent plies are kept with zero thickness so that
/// indices line up with `layup.plies`.
pub fn station_stack(layup: &LayupField, station: usize, lamina: &Lamina, liner: Option<&LinerPly>) -> Vec<Ply> {
    let mut stack: Vec<Ply> = layup.cells[station]
        .iter()
        .map(|c| Ply {
            lamina: *lamina,
            angle: if c.is_present() { c.angle } else { 0.0 },
            thickness: c.thickness,
        })
        .collect();
    if let Some(l) = liner {
        stack.push(Ply {
            lamina: l.lamina,
            angle: 0.0,
            thickness: l.thickness,
        });
    }
    stack
}

/// Runs membrane equilibrium and CLT at every station.
pub fn solve_vessel(
    geom: &VesselGeometry,
    layup: &LayupField,
    lamina: &Lamina,
    liner: Option<&LinerPly>,
    load: &LoadCase,
) -> Result<Vec<LaminateState>> {
    (0..geom.len())
        .map(|i| {
            let forces = membrane_forces(geom, load, i);
            laminate_solve(&station_stack(layup, i, lamina, liner), &forces, i)
        })
        .collect()
}
