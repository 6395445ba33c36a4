//! Lattice providers `x_A`, `x_{A,v_0}`, exact LLL, Fincke–Pohst enumeration,
//! record tables and Dirichlet witnesses.

mod dirichlet;
mod enumerate;
mod linalg;
mod provider;
mod records;
mod reduce;

pub use dirichlet::{dirichlet_constant, dirichlet_witness, unit_ball_volume};
pub use linalg::{Mat, Transform};
pub use provider::{
    enumerate_ball, enumerate_ball_nonempty, provider_from_spec, shortest_vector, DiscreteSetProvider,
    LatticeProvider, LatticeSpec, LatticeSpecFile, VectorSet,
};
pub use records::{records, records_by_sweep, Exactness, Record, RecordTable};
pub use reduce::{gauss_reduce, lll_reduce, ReducedBasis};
