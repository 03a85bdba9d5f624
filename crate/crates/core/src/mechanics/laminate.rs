//! Membrane-only classical lamination theory.
//!
//! Lab axes are x = meridian, y = circumference. Ply angles are measured
//! from the meridian.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::load::MembraneForces;
use crate::error::{Error, Result};
use crate::materials::{IsotropicCard, MaterialSystem};

/// In-plane elastic constants of a ply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lamina {
    pub e11: f64,
    pub e22: f64,
    pub nu12: f64,
    pub g12: f64,
}

impl Lamina {
    pub fn isotropic(e: f64, nu: f64) -> Self {
        Self {
            e11: e,
            e22: e,
            nu12: nu,
            g12: e / (2.0 * (1.0 + nu)),
        }
    }

    /// Plane-stress reduced stiffness in material axes.
    pub fn reduced_stiffness(&self) -> Matrix3<f64> {
        let nu21 = self.nu12 * self.e22 / self.e11;
        let d = 1.0 - self.nu12 * nu21;
        Matrix3::new(
            self.e11 / d,
            self.nu12 * self.e22 / d,
            0.0,
            self.nu12 * self.e22 / d,
            self.e22 / d,
            0.0,
            0.0,
            0.0,
            self.g12,
        )
    }
}

impl From<&MaterialSystem> for Lamina {
    fn from(m: &MaterialSystem) -> Self {
        Self {
            e11: m.e11,
            e22: m.e22,
            nu12: m.nu12,
            g12: m.g12,
        }
    }
}

impl From<&IsotropicCard> for Lamina {
    fn from(m: &IsotropicCard) -> Self {
        Lamina::isotropic(m.e, m.nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ply {
    pub lamina: Lamina,
    /// Degrees from the meridian.
    pub angle: f64,
    pub thickness: f64,
}

/// Maps lab engineering strains (ex, ey, gxy) to material axes (e1, e2, g12).
pub fn strain_rotation(angle_deg: f64) -> Matrix3<f64> {
    let (s, c) = angle_deg.to_radians().sin_cos();
    Matrix3::new(
        c * c,
        s * s,
        c * s,
        s * s,
        c * c,
        -c * s,
        -2.0 * c * s,
        2.0 * c * s,
        c * c - s * s,
    )
}

/// Transformed reduced stiffness in lab axes.
pub fn rotated_stiffness(lamina: &Lamina, angle_deg: f64) -> Matrix3<f64> {
    let t = strain_rotation(angle_deg);
    t.transpose() * lamina.reduced_stiffness() * t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlyStress {
    /// (sigma1, sigma2, sigma6) in material axes, MPa.
    pub material: [f64; 3],
    /// (sigma_x, sigma_y, tau_xy) in lab axes, MPa.
    pub lab: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaminateState {
    pub forces: MembraneForces,
    /// Mid-plane strains (ex, ey, gxy).
    pub strain: [f64; 3],
    pub plies: Vec<PlyStress>,
    /// `0.5 * N . eps`, mJ/mm^2.
    pub energy_density: f64,
}

/// Solves `A eps = N` for the membrane strains and resolves ply stresses.
/// Zero-thickness plies are allowed and get the stresses they would carry.
pub fn laminate_solve(plies: &[Ply], forces: &MembraneForces, station: usize) -> Result<LaminateState> {
    let total: f64 = plies.iter().map(|p| p.thickness).sum();
    if !(total > 0.0) {
        return Err(Error::EmptyLaminate { station });
    }
    let mut a = Matrix3::zeros();
    for ply in plies.iter().filter(|p| p.thickness > 0.0) {
        a += rotated_stiffness(&ply.lamina, ply.angle) * ply.thickness;
    }
    let inv = a.try_inverse().ok_or(Error::EmptyLaminate { station })?;
    let n = Vector3::new(forces.n_phi, forces.n_theta, 0.0);
    let eps = inv * n;

    let stresses = plies
        .iter()
        .map(|ply| {
            let t = strain_rotation(ply.angle);
            let material = ply.lamina.reduced_stiffness() * (t * eps);
            let lab = rotated_stiffness(&ply.lamina, ply.angle) * eps;
            PlyStress {
                material: [material.x, material.y, material.z],
                lab: [lab.x, lab.y, lab.z],
            }
        })
        .collect();

    Ok(LaminateState {
        forces: *forces,
        strain: [eps.x, eps.y, eps.z],
        plies: stresses,
        energy_density: 0.5 * n.dot(&eps),
    })
}
