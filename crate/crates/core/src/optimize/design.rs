use serde::{Deserialize, Serialize};

use super::VarBounds;
use crate::error::{Error, Result};
use crate::winding::{LayerKind, WindingLayerSpec};

/// Winding parameters shared by every layer of a stack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindingParams {
    /// Band width W_B, mm.
    pub bandwidth: f64,
    pub friction_exponent: f64,
    /// Non-geodesic deviation at the equator, deg; the sign selects the branch.
    pub delta_up: f64,
    pub delta_down: f64,
    pub hoop_angle: f64,
}

impl Default for WindingParams {
    fn default() -> Self {
        Self {
            bandwidth: 10.0,
            friction_exponent: 1.0,
            delta_up: 0.0,
            delta_down: 0.0,
            hoop_angle: 90.0,
        }
    }
}

/// Layer order and the fixed parts of the design space. "Layer 1" is the
/// first helical layer; its openings are manufacturing constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackLayout {
    pub layers: Vec<LayerKind>,
    pub fixed_opening_up: f64,
    pub fixed_opening_down: f64,
    pub thickness_min: f64,
    pub thickness_max: f64,
    /// Largest opening radius a helical layer may take; `None` means
    /// `R - W_B`.
    pub opening_max: Option<f64>,
}

impl StackLayout {
    pub fn new(layers: Vec<LayerKind>, fixed_opening_up: f64, fixed_opening_down: f64) -> Self {
        Self {
            layers,
            fixed_opening_up,
            fixed_opening_down,
            thickness_min: 0.01,
            thickness_max: 2.0,
            opening_max: None,
        }
    }

    pub fn helical_count(&self) -> usize {
        self.layers.iter().filter(|k| **k == LayerKind::Helical).count()
    }

    pub fn hoop_count(&self) -> usize {
        self.layers.len() - self.helical_count()
    }

    pub fn n_vars(&self) -> usize {
        2 * self.helical_count().saturating_sub(1) + self.layers.len()
    }

    /// Variable names in vector order: free openings first
    /// (`r0_up_i`, `r0_d_i` for helical layers 2..), then one thickness per
    /// layer in stack order (`th_i` helical, `th90_j` hoop).
    pub fn var_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_vars());
        for i in 2..=self.helical_count() {
            names.push(format!("r0_up_{i}"));
            names.push(format!("r0_d_{i}"));
        }
        let (mut h, mut o) = (0, 0);
        for kind in &self.layers {
            match kind {
                LayerKind::Helical => {
                    h += 1;
                    names.push(format!("th_{h}"));
                }
                LayerKind::Hoop => {
                    o += 1;
                    names.push(format!("th90_{o}"));
                }
            }
        }
        names
    }

    pub fn validate(&self, radius: f64, bandwidth: f64) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.helical_count() == 0 {
            return bad("the stack needs at least one helical layer to cover the domes".into());
        }
        if !(self.thickness_min > 0.0 && self.thickness_min < self.thickness_max) {
            return bad(format!(
                "thickness range [{}, {}] is invalid",
                self.thickness_min, self.thickness_max
            ));
        }
        let hi = self.opening_limit(radius, bandwidth);
        for (name, r0) in [("up", self.fixed_opening_up), ("down", self.fixed_opening_down)] {
            if !(r0 > 0.0 && r0 < hi) {
                return bad(format!("fixed {name} opening {r0} must lie in (0, {hi})"));
            }
        }
        Ok(())
    }

    pub fn opening_limit(&self, radius: f64, bandwidth: f64) -> f64 {
        self.opening_max.unwrap_or(radius - bandwidth)
    }

    pub fn bounds(&self, radius: f64, bandwidth: f64) -> Result<Vec<VarBounds>> {
        self.validate(radius, bandwidth)?;
        let hi = self.opening_limit(radius, bandwidth);
        let mut b = Vec::with_capacity(self.n_vars());
        for _ in 1..self.helical_count() {
            b.push(VarBounds::new(self.fixed_opening_up, hi)?);
            b.push(VarBounds::new(self.fixed_opening_down, hi)?);
        }
        for _ in &self.layers {
            b.push(VarBounds::new(self.thickness_min, self.thickness_max)?);
        }
        Ok(b)
    }

    pub fn decode(&self, x: &[f64]) -> DesignVector {
        let nh = self.helical_count();
        let mut r0_up = vec![self.fixed_opening_up];
        let mut r0_d = vec![self.fixed_opening_down];
        for i in 0..nh.saturating_sub(1) {
            r0_up.push(x[2 * i]);
            r0_d.push(x[2 * i + 1]);
        }
        DesignVector {
            r0_up,
            r0_d,
            th: x[2 * nh.saturating_sub(1)..].to_vec(),
        }
    }

    pub fn encode(&self, d: &DesignVector) -> Result<Vec<f64>> {
        let nh = self.helical_count();
        if d.r0_up.len() != nh || d.r0_d.len() != nh || d.th.len() != self.layers.len() {
            return Err(Error::OutOfBounds(format!(
                "design has {}/{} openings and {} thicknesses; the stack needs {nh} openings per dome and {} thicknesses",
                d.r0_up.len(),
                d.r0_d.len(),
                d.th.len(),
                self.layers.len()
            )));
        }
        let mut x = Vec::with_capacity(self.n_vars());
        for i in 1..nh {
            x.push(d.r0_up[i]);
            x.push(d.r0_d[i]);
        }
        x.extend_from_slice(&d.th);
        Ok(x)
    }

    /// Checks a design against the bounds, listing every violation.
    pub fn check(&self, d: &DesignVector, radius: f64, bandwidth: f64) -> Result<()> {
        let x = self.encode(d)?;
        let mut problems = Vec::new();
        if d.r0_up[0] != self.fixed_opening_up || d.r0_d[0] != self.fixed_opening_down {
            problems.push(format!(
                "layer-1 openings must stay at ({}, {}), got ({}, {})",
                self.fixed_opening_up, self.fixed_opening_down, d.r0_up[0], d.r0_d[0]
            ));
        }
        for ((name, v), b) in self.var_names().iter().zip(&x).zip(self.bounds(radius, bandwidth)?) {
            if !b.contains(*v) {
                problems.push(format!("{name} = {v} outside [{}, {}]", b.lo, b.hi));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::OutOfBounds(problems.join("; ")))
        }
    }
}

/// Opening radii per helical layer (layer 1 first) and one cylinder ply
/// thickness per layer in stack order. For a helical layer the thickness is
/// that of each ply of the `+a/-a` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignVector {
    pub r0_up: Vec<f64>,
    pub r0_d: Vec<f64>,
    pub th: Vec<f64>,
}

impl DesignVector {
    /// Total composite thickness on the cylinder; helical pairs count twice.
    pub fn cylinder_thickness(&self, layout: &StackLayout) -> f64 {
        layout
            .layers
            .iter()
            .zip(&self.th)
            .map(|(k, t)| match k {
                LayerKind::Helical => 2.0 * t,
                LayerKind::Hoop => *t,
            })
            .sum()
    }

    pub fn layers(&self, layout: &StackLayout, winding: &WindingParams, radius: f64) -> Vec<WindingLayerSpec> {
        let mut h = 0;
        layout
            .layers
            .iter()
            .zip(&self.th)
            .map(|(kind, &th)| match kind {
                LayerKind::Helical => {
                    let spec = WindingLayerSpec::helical(radius, self.r0_up[h], self.r0_d[h], th, winding.bandwidth)
                        .with_deltas(winding.delta_up, winding.delta_down)
                        .with_friction_exponent(winding.friction_exponent);
                    h += 1;
                    spec
                }
                LayerKind::Hoop => WindingLayerSpec::hoop(radius, th, winding.hoop_angle),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LayerKind::{Helical, Hoop};

    fn reference() -> StackLayout {
        StackLayout::new(vec![Helical, Hoop, Helical, Hoop, Helical, Hoop, Hoop], 20.0, 125.0)
    }

    #[test]
    fn reference_stack_has_eleven_variables() {
        let l = reference();
        assert_eq!(l.n_vars(), 11);
        assert_eq!(
            l.var_names(),
            ["r0_up_2", "r0_d_2", "r0_up_3", "r0_d_3", "th_1", "th90_1", "th_2", "th90_2", "th_3", "th90_3", "th90_4"]
        );
        let b = l.bounds(250.0, 10.0).unwrap();
        assert_eq!((b[0].lo, b[0].hi), (20.0, 240.0));
        assert_eq!((b[1].lo, b[1].hi), (125.0, 240.0));
        assert_eq!((b[4].lo, b[4].hi), (0.01, 2.0));
    }

    #[test]
    fn decode_encode_roundtrip_and_thickness_sum() {
        let l = reference();
        let x = vec![60.0, 140.0, 90.0, 170.0, 0.5, 0.3, 0.4, 0.2, 0.1, 0.6, 0.7];
        let d = l.decode(&x);
        assert_eq!(d.r0_up, vec![20.0, 60.0, 90.0]);
        assert_eq!(d.r0_d, vec![125.0, 140.0, 170.0]);
        assert_eq!(l.encode(&d).unwrap(), x);
        let expected = 2.0 * (0.5 + 0.4 + 0.1) + 0.3 + 0.2 + 0.6 + 0.7;
        assert!((d.cylinder_thickness(&l) - expected).abs() < 1e-12);
    }

    #[test]
    fn bound_violations_are_listed_per_field() {
        let l = reference();
        let mut d = l.decode(&[60.0, 140.0, 90.0, 170.0, 0.5, 0.3, 0.4, 0.2, 0.1, 0.6, 0.7]);
        d.th[1] = 3.0;
        d.r0_d[2] = 100.0;
        let msg = l.check(&d, 250.0, 10.0).unwrap_err().to_string();
        assert!(msg.contains("th90_1 = 3"), "{msg}");
        assert!(msg.contains("r0_d_3 = 100"), "{msg}");
    }

    #[test]
    fn stack_without_helical_layers_rejected() {
        assert!(StackLayout::new(vec![Hoop], 20.0, 125.0).bounds(250.0, 10.0).is_err());
    }
}
