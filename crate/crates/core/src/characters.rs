//! Graded dimensions: `c_d` counts vectors of degree `d`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::ideal::quotient_graded_dims;
use crate::partitions::partition_counts;
use crate::principal::enumerate_qp_basis_degree;

/// Coefficients `c_0, ..., c_D` of a q-series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSeries {
    pub coeffs: Vec<u64>,
    pub tag: String,
}

impl QSeries {
    pub fn new(coeffs: Vec<u64>, tag: impl Into<String>) -> QSeries {
        QSeries { coeffs, tag: tag.into() }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Equality on the common window.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }

    /// Coefficientwise `self <= other` on the common window.
    pub fn dominated_by(&self, other: &QSeries) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }
}

/// The PBW character `sum_d p(d) q^d`.
pub fn character_principal(max_degree: u32) -> QSeries {
    QSeries::new(partition_counts(max_degree), "principal")
}

/// Counts of basis quasi-particle monomials per degree, optionally with all
/// charges at most `max_charge`. The counts do not depend on `t`.
pub fn character_qp_basis(max_degree: u32, max_charge: Option<u32>) -> QSeries {
    let coeffs = (0..=max_degree).map(|d| enumerate_qp_basis_degree(d, max_charge).len() as u64).collect();
    let tag = match max_charge {
        Some(k) => format!("basis, charges <= {k}"),
        None => "basis".to_string(),
    };
    QSeries::new(coeffs, tag)
}

/// The level-`k` quotient at `t = 0`, by rank computations.
pub fn character_quotient(k: u32, max_degree: u32) -> Result<QSeries> {
    let dims = quotient_graded_dims(k, max_degree)?;
    Ok(QSeries::new(dims.into_iter().map(|d| d as u64).collect(), format!("quotient, level {k}")))
}

/// Counts per degree refined by total charge: entry `d` maps a charge to the
/// number of basis monomials of degree `d` with that total charge.
pub fn charge_refinement(max_degree: u32, max_charge: Option<u32>) -> Vec<BTreeMap<u32, u64>> {
    (0..=max_degree)
        .map(|d| {
            let mut m = BTreeMap::new();
            for q in enumerate_qp_basis_degree(d, max_charge) {
                *m.entry(q.total_charge()).or_insert(0) += 1;
            }
            m
        })
        .collect()
}
