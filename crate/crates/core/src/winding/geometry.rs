use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vessel dimensions in mm, plus the station counts used to discretize the
/// meridian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryParams {
    pub cylinder_height: f64,
    pub radius: f64,
    pub dome_height_up: f64,
    pub dome_height_down: f64,
    pub liner_thickness: f64,
    /// Boss radius of each dome: the shell starts here. Normally equal to the
    /// first helical layer's polar opening.
    pub opening_up: f64,
    pub opening_down: f64,
    /// Stations per dome, junction included.
    pub dome_stations: usize,
    /// Interior stations on the cylinder.
    pub cylinder_stations: usize,
    /// Add design-dependent dome stations at each helical layer's opening
    /// and thickness-cap radius, see [`VesselGeometry::refined`].
    pub feature_refinement: bool,
}

impl Default for GeometryParams {
    fn default() -> Self {
        Self {
            cylinder_height: 819.0,
            radius: 250.0,
            dome_height_up: 123.0,
            dome_height_down: 123.0,
            liner_thickness: 4.0,
            opening_up: 20.0,
            opening_down: 125.0,
            dome_stations: 20,
            cylinder_stations: 40,
            feature_refinement: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    DomeDown,
    Cylinder,
    DomeUp,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::DomeDown => "dome_down",
            Region::Cylinder => "cylinder",
            Region::DomeUp => "dome_up",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomeSide {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianStation {
    pub region: Region,
    /// Arc length from the first (lowest) station, mm.
    pub s: f64,
    /// Axial height above the bottom pole, mm.
    pub z: f64,
    pub r: f64,
    /// Meridional curvature radius; infinite on the cylinder.
    pub r1: f64,
    /// Circumferential curvature radius.
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VesselGeometry {
    pub params: GeometryParams,
    pub stations: Vec<MeridianStation>,
}

impl VesselGeometry {
    pub fn radius(&self) -> f64 {
        self.params.radius
    }

    pub fn total_height(&self) -> f64 {
        self.params.dome_height_down + self.params.cylinder_height + self.params.dome_height_up
    }

    pub fn cylinder_start(&self) -> f64 {
        self.params.dome_height_down
    }

    pub fn cylinder_end(&self) -> f64 {
        self.params.dome_height_down + self.params.cylinder_height
    }

    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    /// The same vessel with extra dome stations at the given radii. Radii
    /// outside a dome's `(opening, R)` range, or within 1e-6 mm of an
    /// existing station, are ignored.
    pub fn refined(&self, extra_up: &[f64], extra_down: &[f64]) -> Result<VesselGeometry> {
        build_with_extra(&self.params, extra_up, extra_down)
    }
}

/// Principal curvature radii `(r1, r2)` of an ellipsoidal dome with
/// equatorial semi-axis `a` and polar semi-axis `b`, at parameter `t`
/// (`t = 0` at the pole, `t = pi/2` at the equator, `r = a sin t`).
pub fn ellipsoid_curvature_radii(a: f64, b: f64, t: f64) -> (f64, f64) {
    let q = a * a * t.cos().powi(2) + b * b * t.sin().powi(2);
    let r1 = q.powf(1.5) / (a * b);
    let r2 = a * q.sqrt() / b;
    (r1, r2)
}

/// Meridian arc length of the ellipse between parameters `t0` and `t1`.
fn ellipse_arc(a: f64, b: f64, t0: f64, t1: f64) -> f64 {
    // composite Simpson, the integrand is smooth and bounded
    const N: usize = 64;
    let speed = |t: f64| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt();
    let h = (t1 - t0) / N as f64;
    let mut sum = speed(t0) + speed(t1);
    for i in 1..N {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * speed(t0 + h * i as f64);
    }
    sum * h / 3.0
}

/// Builds the discretized meridian: bottom dome (boss to junction), cylinder
/// interior, top dome (junction to boss), ordered by increasing height.
pub fn build_geometry(params: &GeometryParams) -> Result<VesselGeometry> {
    build_with_extra(params, &[], &[])
}

fn build_with_extra(params: &GeometryParams, extra_up: &[f64], extra_down: &[f64]) -> Result<VesselGeometry> {
    let p = params;
    for (name, v) in [
        ("cylinder_height", p.cylinder_height),
        ("radius", p.radius),
        ("dome_height_up", p.dome_height_up),
        ("dome_height_down", p.dome_height_down),
        ("opening_up", p.opening_up),
        ("opening_down", p.opening_down),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
        }
    }
    if !(p.liner_thickness >= 0.0) {
        return Err(Error::InvalidGeometry("liner_thickness must be non-negative".into()));
    }
    if p.opening_up >= p.radius || p.opening_down >= p.radius {
        return Err(Error::InvalidGeometry("polar openings must be smaller than the cylinder radius".into()));
    }
    if p.dome_stations < 3 || p.cylinder_stations < 3 {
        return Err(Error::InvalidGeometry("at least 3 stations per region are required".into()));
    }

    let a = p.radius;
    let mut stations = Vec::with_capacity(2 * p.dome_stations + p.cylinder_stations);

    // Quadratic grading in the ellipse parameter clusters stations at the
    // opening, where fiber angle and thickness change fastest.
    let dome_params = |opening: f64, extra: &[f64]| -> Vec<f64> {
        let t0 = (opening / a).asin();
        let n = p.dome_stations;
        let mut ts: Vec<f64> = (0..n)
            .map(|k| {
                let u = k as f64 / (n - 1) as f64;
                t0 + (FRAC_PI_2 - t0) * u * u
            })
            .collect();
        let mut radii: Vec<f64> = ts.iter().map(|t| a * t.sin()).collect();
        for &r in extra {
            if r > opening && r < a && radii.iter().all(|q| (q - r).abs() > 1e-6) {
                ts.push((r / a).asin());
                radii.push(r);
            }
        }
        ts.sort_by(f64::total_cmp);
        ts
    };

    // bottom dome, pole side first
    let b = p.dome_height_down;
    let ts = dome_params(p.opening_down, extra_down);
    let mut s = 0.0;
    let mut prev_t = ts[0];
    for &t in &ts {
        s += ellipse_arc(a, b, prev_t, t);
        prev_t = t;
        let (r1, r2) = ellipsoid_curvature_radii(a, b, t);
        let r = if t == FRAC_PI_2 { a } else { a * t.sin() };
        stations.push(MeridianStation {
            region: Region::DomeDown,
            s,
            z: b - b * t.cos(),
            r,
            r1,
            r2: if t == FRAC_PI_2 { a } else { r2 },
        });
    }

    let z0 = p.dome_height_down;
    let dz = p.cylinder_height / (p.cylinder_stations + 1) as f64;
    for j in 1..=p.cylinder_stations {
        stations.push(MeridianStation {
            region: Region::Cylinder,
            s: s + dz * j as f64,
            z: z0 + dz * j as f64,
            r: a,
            r1: f64::INFINITY,
            r2: a,
        });
    }
    s += p.cylinder_height;

    let b = p.dome_height_up;
    let z_top = z0 + p.cylinder_height;
    let mut ts = dome_params(p.opening_up, extra_up);
    ts.reverse();
    let mut prev_t = FRAC_PI_2;
    for &t in &ts {
        s += ellipse_arc(a, b, t, prev_t);
        prev_t = t;
        let (r1, r2) = ellipsoid_curvature_radii(a, b, t);
        let r = if t == FRAC_PI_2 { a } else { a * t.sin() };
        stations.push(MeridianStation {
            region: Region::DomeUp,
            s,
            z: z_top + b * t.cos(),
            r,
            r1,
            r2: if t == FRAC_PI_2 { a } else { r2 },
        });
    }

    Ok(VesselGeometry {
        params: params.clone(),
        stations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_total_height() {
        let g = build_geometry(&GeometryParams::default()).unwrap();
        assert_eq!(g.total_height(), 1065.0);
        assert_eq!(g.len(), 80);
    }

    #[test]
    fn hemisphere_has_equal_radii() {
        for t in [0.0, 0.3, 1.0, FRAC_PI_2] {
            let (r1, r2) = ellipsoid_curvature_radii(250.0, 250.0, t);
            assert_relative_eq!(r1, 250.0, max_relative = 1e-12);
            assert_relative_eq!(r2, 250.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn junction_station_is_tangent_to_cylinder() {
        let g = build_geometry(&GeometryParams::default()).unwrap();
        let junction = g
            .stations
            .iter()
            .filter(|s| s.region == Region::DomeDown)
            .last()
            .unwrap();
        assert_eq!(junction.r, 250.0);
        assert_eq!(junction.r2, 250.0);
        assert_relative_eq!(junction.z, 123.0, max_relative = 1e-12);
        // equator meridional radius b^2 / a
        assert_relative_eq!(junction.r1, 123.0 * 123.0 / 250.0, max_relative = 1e-12);
    }

    #[test]
    fn stations_strictly_ordered_and_bounded() {
        let g = build_geometry(&GeometryParams::default()).unwrap();
        for w in g.stations.windows(2) {
            assert!(w[1].s > w[0].s);
            assert!(w[1].z > w[0].z);
        }
        for st in &g.stations {
            assert!(st.r > 0.0 && st.r <= 250.0 + 1e-12);
            if st.region == Region::Cylinder {
                assert_eq!(st.r, 250.0);
                assert!(st.r1.is_infinite());
            }
        }
        assert_relative_eq!(g.stations[0].r, 125.0, max_relative = 1e-12);
        assert_relative_eq!(g.stations.last().unwrap().r, 20.0, max_relative = 1e-12);
    }

    #[test]
    fn refinement_inserts_requested_radii_only() {
        let g = build_geometry(&GeometryParams::default()).unwrap();
        let f = g.refined(&[100.0, 20.0, 300.0], &[200.0, 124.0]).unwrap();
        assert_eq!(f.len(), g.len() + 2);
        let at = |region: Region, r: f64| f.stations.iter().any(|s| s.region == region && (s.r - r).abs() < 1e-9);
        assert!(at(Region::DomeUp, 100.0) && at(Region::DomeDown, 200.0));
        for w in f.stations.windows(2) {
            assert!(w[1].s > w[0].s && w[1].z > w[0].z);
        }
    }

    #[test]
    fn quarter_ellipse_arc_of_circle() {
        assert_relative_eq!(ellipse_arc(2.0, 2.0, 0.0, FRAC_PI_2), std::f64::consts::PI, max_relative = 1e-10);
    }

    #[test]
    fn rejects_bad_dimensions() {
        let mut p = GeometryParams::default();
        p.radius = -1.0;
        assert!(build_geometry(&p).is_err());
        let mut p = GeometryParams::default();
        p.dome_stations = 2;
        assert!(build_geometry(&p).is_err());
        let mut p = GeometryParams::default();
        p.opening_up = 260.0;
        assert!(build_geometry(&p).is_err());
    }
}
