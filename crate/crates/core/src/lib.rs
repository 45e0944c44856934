//! Exact computations in the principal subspace of the quantum affine vertex
//! algebra of type A1(1): truncated series, the Yang R-matrix, quasi-particle
//! bases, vertex and braiding maps, level-k ideals and their characters.

pub mod characters;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod partitions;
pub mod principal;
pub mod rat;
pub mod relations;
pub mod rmatrix;
pub mod series;
pub mod vertex;

pub use error::{Error, Result};
pub use rat::Rat;
pub use series::{ExpandedScalar, HSeries, LinearForm, ScalarContext};
