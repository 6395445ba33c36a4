//! Discrete vector sets ("Minkowski systems") attached to unimodular and
//! affine lattices, Fuchsian-group orbits and square-tiled surfaces, together
//! with estimators for horospherical excursions, geodesic excursions,
//! Diophantine exponents and Markoff constants.
//!
//! The crate is organised bottom-up:
//!
//! * [`arithmetic`]: exact rationals with certified error, number specs,
//!   continued fractions.
//! * [`splitspace`]: the `R^m x R^n` split, the flows `g_t` and `h_B`.
//! * [`lattice`]: lattice providers, LLL, Fincke–Pohst, record tables.
//! * [`analytics`]: exponent, excursion-rate and Markoff estimators.
//! * [`hyperbolic`]: cusp orbits and depths for `SL(2,Z)` and `Gamma(2)`.
//! * [`origami`]: square-tiled surfaces, saddle connections and cylinders.
//! * [`cli`]: experiment configs, registry and CSV/JSON export.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod arithmetic;
pub mod cli;
pub mod error;
pub mod hyperbolic;
pub mod lattice;
pub mod origami;
pub mod splitspace;

pub use error::{Error, Result};
