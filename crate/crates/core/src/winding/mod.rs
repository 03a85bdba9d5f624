//! Vessel meridian geometry and filament-winding ply fields.

mod geometry;
mod layup;
mod trajectory;

pub use geometry::{build_geometry, ellipsoid_curvature_radii, DomeSide, GeometryParams, MeridianStation, Region, VesselGeometry};
pub use layup::{build_layup, LayupField, PlyCell, PlyDescriptor, SectionPartition};
pub use trajectory::{dome_thickness, feature_radii, fiber_angle, thickness_cap_radius, LayerKind, WindingLayerSpec};
