//! First-order capacity region, global finite-blocklength regions and local
//! second-order regions.

pub mod angle;
pub mod capacity;
pub mod frames;
pub mod local;

pub use angle::{
    angle_intersection, angle_sweep, critical_angles, half_plane_form, single_user_expansion, AngleSweep, HalfPlane,
    HalfPlaneForm, SweepRow,
};
pub use capacity::{
    capacity_boundary, default_rho_grid, global_envelope, global_region, CapacityBoundary, GlobalRegion,
};
pub use frames::{Frame, RatePoint, RegionBoundary, SecondOrderPair};
pub use local::{local_region_case, BoundaryPoint, CaseTag, LocalRegion};
