mod expanded;
mod gseries;
mod hseries;

pub use expanded::{expand_neg_power, ExpandedScalar, LinearForm, ScalarContext};
pub use gseries::{g_at, g_reflection_residual, g_series, g_shift_residual, g_unitarity_residual};
pub use hseries::{hseries, HSeries};
