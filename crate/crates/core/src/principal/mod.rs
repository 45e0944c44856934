//! The principal subspace `W`: the commutative algebra on the modes `x(-r)`
//! applied to the vacuum, with coefficients in truncated `h`-series.

mod pbw;
mod qp;
mod wseries;

pub use pbw::{PbwMonomial, WElement};
pub use qp::{
    classical_limit, enumerate_qp_basis, enumerate_qp_basis_degree, is_basis_monomial, qp_monomial_to_w,
    qp_series_coefficient, transition_matrix, QPMonomial, TransitionMatrix,
};
pub use wseries::{shifted_product, wseries_mul, xplus, xplus_product, WSeries};
