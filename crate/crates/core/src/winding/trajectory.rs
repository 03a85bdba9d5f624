//! Fiber angle and ply thickness along the dome meridian.

use serde::{Deserialize, Serialize};

use super::geometry::DomeSide;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerKind {
    Helical,
    Hoop,
}

/// One winding layer. A helical layer is laid as a balanced `+a/-a` pair,
/// each ply of thickness `th_c` on the cylinder; a hoop layer is a single
/// ply restricted to the cylinder.
///
/// Angles are measured from the meridian (vessel axis) in degrees. The
/// non-geodesic deviation `delta` is signed and taken at the equator so that
/// the dome angle equals `alpha_c = asin(r0 / R) + delta` at the junction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingLayerSpec {
    pub kind: LayerKind,
    /// Cylinder radius R, mm.
    pub radius: f64,
    pub r0_up: f64,
    pub r0_d: f64,
    /// Ply thickness on the cylinder, mm.
    pub th_c: f64,
    pub delta_up: f64,
    pub delta_d: f64,
    /// Friction interpolation exponent.
    pub n: f64,
    /// Band width W_B, mm.
    pub bandwidth: f64,
    /// Fixed hoop angle, deg. Unused for helical layers.
    pub hoop_angle: f64,
}

impl WindingLayerSpec {
    pub fn helical(radius: f64, r0_up: f64, r0_d: f64, th_c: f64, bandwidth: f64) -> Self {
        Self {
            kind: LayerKind::Helical,
            radius,
            r0_up,
            r0_d,
            th_c,
            delta_up: 0.0,
            delta_d: 0.0,
            n: 1.0,
            bandwidth,
            hoop_angle: 90.0,
        }
    }

    pub fn hoop(radius: f64, th_c: f64, angle: f64) -> Self {
        Self {
            kind: LayerKind::Hoop,
            radius,
            r0_up: radius,
            r0_d: radius,
            th_c,
            delta_up: 0.0,
            delta_d: 0.0,
            n: 1.0,
            bandwidth: 0.0,
            hoop_angle: angle,
        }
    }

    pub fn with_deltas(mut self, delta_up: f64, delta_d: f64) -> Self {
        self.delta_up = delta_up;
        self.delta_d = delta_d;
        self
    }

    pub fn with_friction_exponent(mut self, n: f64) -> Self {
        self.n = n;
        self
    }

    pub fn opening(&self, side: DomeSide) -> f64 {
        match side {
            DomeSide::Up => self.r0_up,
            DomeSide::Down => self.r0_d,
        }
    }

    pub fn delta(&self, side: DomeSide) -> f64 {
        match side {
            DomeSide::Up => self.delta_up,
            DomeSide::Down => self.delta_d,
        }
    }

    /// Fiber angle at the dome/cylinder junction on the given side, deg.
    pub fn alpha_c(&self, side: DomeSide) -> f64 {
        match self.kind {
            LayerKind::Hoop => self.hoop_angle,
            LayerKind::Helical => (self.opening(side) / self.radius).asin().to_degrees() + self.delta(side),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLayer(msg));
        if !(self.radius > 0.0) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if !(self.th_c >= 0.0 && self.th_c.is_finite()) {
            return bad(format!("thickness must be non-negative, got {}", self.th_c));
        }
        match self.kind {
            LayerKind::Hoop => {
                if !(85.0..=90.0).contains(&self.hoop_angle) {
                    return bad(format!("hoop angle {} outside [85, 90] deg", self.hoop_angle));
                }
            }
            LayerKind::Helical => {
                for side in [DomeSide::Up, DomeSide::Down] {
                    let r0 = self.opening(side);
                    if !(r0 > 0.0 && r0 < self.radius) {
                        return bad(format!("opening radius {r0} must lie in (0, {})", self.radius));
                    }
                    let ac = self.alpha_c(side);
                    if !(ac > 0.0 && ac < 90.0) {
                        return bad(format!("equator angle {ac} deg outside (0, 90)"));
                    }
                }
                if !(self.n > 0.0) {
                    return bad(format!("friction exponent must be positive, got {}", self.n));
                }
                if !(self.bandwidth >= 0.0) {
                    return bad(format!("bandwidth must be non-negative, got {}", self.bandwidth));
                }
            }
        }
        Ok(())
    }
}

fn check_dome_radius(layer: &WindingLayerSpec, r: f64, side: DomeSide) -> Result<(f64, f64)> {
    if layer.kind != LayerKind::Helical {
        return Err(Error::InvalidLayer("hoop layers do not reach the domes".into()));
    }
    let r0 = layer.opening(side);
    let radius = layer.radius;
    let tol = 1e-9 * radius;
    if r < r0 - tol {
        return Err(Error::AbovePolarOpening { r, r0 });
    }
    if r > radius + tol {
        return Err(Error::InvalidLayer(format!("radius {r} exceeds the cylinder radius {radius}")));
    }
    Ok((r.clamp(r0, radius), r0))
}

/// Helical fiber angle on a dome, deg:
/// `asin(r0 / r) + delta ((r - r0) / (R - r0))^n`.
pub fn fiber_angle(layer: &WindingLayerSpec, r: f64, side: DomeSide) -> Result<f64> {
    let (r, r0) = check_dome_radius(layer, r, side)?;
    let geodesic = (r0 / r).min(1.0).asin().to_degrees();
    let frac = (r - r0) / (layer.radius - r0);
    let alpha = geodesic + layer.delta(side) * frac.powf(layer.n);
    if !(-1e-9..=90.0 + 1e-9).contains(&alpha) {
        return Err(Error::InvalidLayer(format!(
            "non-geodesic parameters give angle {alpha:.3} deg at r = {r:.3} mm"
        )));
    }
    Ok(alpha.clamp(0.0, 90.0))
}

/// Radius below which the dome thickness is held constant, avoiding the
/// `1 / cos(alpha)` blow-up at the polar opening.
pub fn thickness_cap_radius(layer: &WindingLayerSpec, side: DomeSide) -> f64 {
    let r0 = layer.opening(side);
    let r_cap = r0 + (0.01 * (layer.radius - r0)).max(layer.bandwidth / 2.0);
    r_cap.min(layer.radius)
}

/// Dome radii where the helical ply fields have kinks or steep gradients:
/// each layer's opening and a point just inside it (where the plies below
/// still carry the load alone), its thickness-cap radius, and a
/// band-width-graded run of points past the cap where the stress peak sits.
pub fn feature_radii(layers: &[WindingLayerSpec], side: DomeSide) -> Vec<f64> {
    let mut radii = Vec::new();
    for layer in layers.iter().filter(|l| l.kind == LayerKind::Helical) {
        let r_cap = thickness_cap_radius(layer, side);
        radii.push(layer.opening(side));
        radii.push(layer.opening(side) - 1e-3);
        radii.push(r_cap);
        for k in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            radii.push(r_cap + k * layer.bandwidth);
        }
    }
    radii
}

fn raw_dome_thickness(layer: &WindingLayerSpec, r: f64, side: DomeSide) -> Result<f64> {
    let r0 = layer.opening(side);
    let radius = layer.radius;
    let alpha = fiber_angle(layer, r, side)?.to_radians();
    let alpha_c = layer.alpha_c(side).to_radians();
    let buildup = r / (r + 2.0 * layer.bandwidth * ((radius - r) / (radius - r0)).powi(4));
    Ok(layer.th_c * alpha_c.cos() / alpha.cos() * buildup)
}

/// Ply thickness on a dome, mm:
/// `th_c cos(alpha_c) / cos(alpha(r)) * r / (r + 2 W_B ((R - r) / (R - r0))^4)`,
/// held at its value at [`thickness_cap_radius`] between the opening and that radius.
pub fn dome_thickness(layer: &WindingLayerSpec, r: f64, side: DomeSide) -> Result<f64> {
    let (r, _) = check_dome_radius(layer, r, side)?;
    let r_cap = thickness_cap_radius(layer, side);
    raw_dome_thickness(layer, r.max(r_cap), side)
}
