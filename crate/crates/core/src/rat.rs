//! Exact rational numbers.
//!
//! `Rat` keeps values that fit in a pair of `i64` inline and only falls back
//! to arbitrary precision when an operation overflows. Every value is stored
//! in canonical form: reduced, positive denominator, and `Small` whenever the
//! reduced fraction fits.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, Debug)]
pub struct Rat(Repr);

fn small_from_i128(num: i128, den: i128) -> Rat {
    debug_assert!(den != 0);
    let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
    let g = num.gcd(&den);
    if g > 1 {
        num /= g;
        den /= g;
    }
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
        _ => Rat(Repr::Big(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))),
    }
}

fn from_big(r: BigRational) -> Rat {
    // BigRational arithmetic already reduces.
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Rat(Repr::Small(n, d)),
        _ => Rat(Repr::Big(r)),
    }
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        small_from_i128(num as i128, den as i128)
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(Repr::Small(n, 1))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// The value as an `i64`, when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => small_from_i128(*d as i128, *n as i128),
            Repr::Big(r) => from_big(r.recip()),
        }
    }

    /// Integer power; negative exponents invert. `0^0 = 1`.
    pub fn pow(&self, exp: i32) -> Rat {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        let mut base = self.clone();
        let mut e = exp as u32;
        let mut acc = Rat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Binomial coefficient `C(n, k)` for arbitrary integer `n` and `k >= 0`.
    pub fn binomial(n: i64, k: u32) -> Rat {
        let mut acc = Rat::one();
        for i in 0..k as i64 {
            acc = acc * Rat::from_int(n - i) / Rat::from_int(i + 1);
        }
        acc
    }

    pub fn factorial(n: u32) -> Rat {
        (1..=n as i64).fold(Rat::one(), |acc, i| acc * Rat::from_int(i))
    }
}

impl Zero for Rat {
    fn zero() -> Rat {
        Rat(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rat {
    fn one() -> Rat {
        Rat(Repr::Small(1, 1))
    }
}

impl Default for Rat {
    fn default() -> Rat {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from_int(n as i64)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical form: a Small never equals a Big
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    small_from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let num = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                    small_from_i128(num, *b as i128 * *d as i128)
                }
            }
            _ => from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    small_from_i128(*a as i128 - *c as i128, *b as i128)
                } else {
                    let num = *a as i128 * *d as i128 - *c as i128 * *b as i128;
                    small_from_i128(num, *b as i128 * *d as i128)
                }
            }
            _ => from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    match a.checked_mul(*c) {
                        Some(n) => Rat(Repr::Small(n, 1)),
                        None => small_from_i128(*a as i128 * *c as i128, 1),
                    }
                } else {
                    small_from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
                }
            }
            _ => from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => small_from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => from_big(self.to_big() / rhs.to_big()),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = &*self * rhs;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat(Repr::Small(m, *d)),
                None => small_from_i128(-(*n as i128), *d as i128),
            },
            Repr::Big(r) => from_big(-r),
        }
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| &acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Parses `"a"` or `"a/b"` with integer `a`, `b`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(from_big(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let a = Rat::new(6, -4);
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(Rat::new(0, 5), Rat::zero());
        assert_eq!("10/4".parse::<Rat>().unwrap(), Rat::new(5, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.numer(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert_eq!(back.to_i64(), Some(i64::MAX));
        assert_eq!(-Rat::from_int(i64::MIN), from_big(BigRational::from_integer(-BigInt::from(i64::MIN))));
    }

    #[test]
    fn binomials() {
        assert_eq!(Rat::binomial(-2, 3), Rat::from_int(-4));
        assert_eq!(Rat::binomial(-1, 5), Rat::from_int(-1));
        assert_eq!(Rat::binomial(5, 2), Rat::from_int(10));
        assert_eq!(Rat::binomial(2, 3), Rat::zero());
        assert_eq!(Rat::factorial(5), Rat::from_int(120));
        assert_eq!(Rat::zero().pow(0), Rat::one());
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, Rat::zero());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
            prop_assert_eq!(a.to_big() * b.to_big(), (&a * &b).to_big());
        }
    }
}
