//! Differential-forms Cosserat elasticity on periodic grids.
//!
//! Grid fields and exterior calculus ([`grid_fields`], [`exterior`]), the
//! kinematics of coframes, connections and micropolar strain
//! ([`kinematics`]), the variational balance laws ([`variational`]) and a
//! tensorial elastodynamics solver ([`solver`]).

// Index loops mirror the tensor notation; `!(a <= b)` comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod convergence;
pub mod error;
pub mod exterior;
pub mod grid_fields;
pub mod kinematics;
pub mod mat3;
pub mod random;
pub mod solver;
pub mod variational;

pub use error::{Error, Result};
pub use exterior::{Coframe, Connection};
pub use grid_fields::{FormField, Grid, TensorField, ValueKind, VectorField};
pub use kinematics::{MicropolarState, StrainState};
pub use solver::{Leapfrog, MaterialParams, Sources};
pub use variational::{ConjugateForms, LagrangianSpec};
