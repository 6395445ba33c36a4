//! Cusp excursions on the modular surface and on `H/Γ(2)`.
//!
//! A coset `x = gΓ` is represented by the point `g^{-1}·i`; the orbit set of a cusp with
//! fixed covector `v` is `ρ(gΓ)v` with `ρ(g) = (g^{-1})^T`.

mod context;
mod deviation;
mod excursion;
mod group;

pub use context::{cusp_depth, Cusp, FuchsianContext, Group, Location, CUSP_HEIGHT};
pub use deviation::{
    cusp_volume_constant, deviation_experiment, CuspConstant, DeviationParams, DeviationRecord,
};
pub use excursion::{
    geodesic_trajectory, horocycle_excursion, quantitative_mahler_check, CuspDepthSample,
    HyperbolicExcursion, MIN_DEPTH,
};
pub use group::{
    hyperbolic_distance, reduce_f64, reduce_fundamental_domain, GroupElement, HalfPlanePoint,
    ModularWord,
};
