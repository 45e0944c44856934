//! Truncated power series in a single formal parameter.
//!
//! `HSeries` is used both for series in `h` (coefficients of everything in
//! the principal subspace) and for series in the nested variable `x = h/u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// `c_0 + c_1 h + ... + c_{N-1} h^{N-1}` modulo `h^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HSeries {
    coeffs: Vec<Rat>,
}

impl HSeries {
    pub fn zero(order: usize) -> HSeries {
        assert!(order >= 1, "truncation order must be positive");
        HSeries { coeffs: vec![Rat::zero(); order] }
    }

    pub fn one(order: usize) -> HSeries {
        HSeries::constant(Rat::one(), order)
    }

    pub fn constant(c: Rat, order: usize) -> HSeries {
        let mut s = HSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * h^k`, zero when `k >= order`.
    pub fn monomial(c: Rat, k: usize, order: usize) -> HSeries {
        let mut s = HSeries::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients, padding or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, order: usize) -> HSeries {
        assert!(order >= 1, "truncation order must be positive");
        coeffs.resize(order, Rat::zero());
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Rat) {
        self.coeffs[k] = c;
    }

    pub fn add_to_coeff(&mut self, k: usize, c: &Rat) {
        self.coeffs[k] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> HSeries {
        HSeries::from_coeffs(self.coeffs[..order.min(self.order())].to_vec(), order)
    }

    pub fn scale(&self, c: &Rat) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `h^k`.
    pub fn shift(&self, k: usize) -> HSeries {
        let n = self.order();
        let mut out = HSeries::zero(n);
        for i in 0..n.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }

    pub fn try_add(&self, other: &HSeries) -> Result<HSeries> {
        self.check(other)?;
        Ok(HSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &HSeries) -> Result<HSeries> {
        self.check(other)?;
        Ok(HSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &HSeries) -> Result<HSeries> {
        self.check(other)?;
        let n = self.order();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Ok(HSeries { coeffs: out })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<HSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Singular("series with zero constant term is not invertible".into()));
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out = vec![Rat::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let s: Rat = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out[k] = -(s * &inv0);
        }
        Ok(HSeries { coeffs: out })
    }

    /// Composition `self(y)` for `y` with zero constant term.
    pub fn compose(&self, y: &HSeries) -> Result<HSeries> {
        self.check(y)?;
        if !y.coeffs[0].is_zero() {
            return Err(Error::Expansion("inner series must have zero constant term".into()));
        }
        let n = self.order();
        let mut acc = HSeries::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(y)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    fn check(&self, other: &HSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch(self.order(), other.order()));
        }
        Ok(())
    }
}

impl Add for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        self.try_add(rhs).expect("HSeries addition")
    }
}

impl Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        self.try_sub(rhs).expect("HSeries subtraction")
    }
}

impl Mul for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        self.try_mul(rhs).expect("HSeries multiplication")
    }
}

impl Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})h")?,
                _ => write!(f, "({c})h^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order())
    }
}

/// `1 + h` style helper used in tests and examples.
pub fn hseries(coeffs: &[i64], order: usize) -> HSeries {
    HSeries::from_coeffs(coeffs.iter().map(|&c| Rat::from_int(c)).collect(), order)
}

impl HSeries {
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}
