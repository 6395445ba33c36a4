//! Square-tiled surfaces: cone points, saddle connections, cylinders, the Minkowski probe and
//! excursion rates of sheared holonomy sets.

mod probe;
mod qd;
mod spectrum;
mod surface;
mod trace;

pub use probe::{
    hermite_planar, minkowski_probe, random_element, shortest_cylinder, ProbeReport, ProbeSample,
    MAX_SINGULAR_VALUE,
};
pub use qd::{qd_excursion, QdExcursion};
pub use spectrum::{cylinders, saddle_connections, HolonomyEntry, HolonomyKind, HolonomySpectrum};
pub use surface::{Origami, OrigamiFile, Vertex};
