//! Arbitrary-precision rational arithmetic and exact binomial coefficients.
//!
//! Every bound comparison in this crate (Σ against 1, 5/6, 29/30, the ratio
//! scans against 1/3, 3/10, 1/5) goes through [`ExactRational`]; floating
//! point is emitted only as an advisory `approx` field in reports and is
//! never read back.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact binomial coefficient C(n, k).
///
/// Computed by the multiplicative formula with an exact division at every
/// step, so intermediate values never exceed the result by more than one
/// factor. Inputs are unsigned; negative arguments are unrepresentable and
/// rejected at the parsing layer.
///
/// # Errors
///
/// `k > n` is an invalid-argument error (the callers in this crate always
/// mean the combinatorial coefficient, never the zero extension).
pub fn binomial(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::invalid(format!("binomial({n}, {k}): k exceeds n")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        // (n-k+1) ... (n-k+i) is divisible by i!, so each step divides evenly.
        acc = acc * (n - k + i) / i;
    }
    Ok(acc)
}

/// Convenience wrapper for `usize` arguments (set sizes).
pub fn binomial_usize(n: usize, k: usize) -> Result<BigUint> {
    binomial(n as u64, k as u64)
}

/// An exact rational number: arbitrary-precision numerator and positive
/// denominator, always stored in lowest terms.
///
/// Wraps `num_rational::BigRational`, which maintains the reduced-form
/// invariant on construction and after every arithmetic operation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// `num/den` with machine-word inputs.
    ///
    /// # Errors
    ///
    /// Zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("rational with zero denominator"));
        }
        Ok(ExactRational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    /// `num/den` for literal constants; panics on a zero denominator.
    ///
    /// Intended for fixed in-source fractions like `of(5, 6)` where
    /// fallibility would only obscure the call site.
    pub fn of(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("literal rational constant")
    }

    /// `num/den` with arbitrary-precision inputs.
    ///
    /// # Errors
    ///
    /// Zero denominator.
    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("rational with zero denominator"));
        }
        Ok(ExactRational(BigRational::new(num, den)))
    }

    /// The integer `n` as a rational.
    pub fn from_int(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` for unsigned big integers, used for binomial ratios.
    ///
    /// # Errors
    ///
    /// `q = 0`.
    pub fn ratio_of(p: &BigUint, q: &BigUint) -> Result<Self> {
        Self::from_big(BigInt::from(p.clone()), BigInt::from(q.clone()))
    }

    /// `1/c`, the shape of every pair weight.
    ///
    /// # Errors
    ///
    /// `c = 0`.
    pub fn reciprocal_of(c: &BigUint) -> Result<Self> {
        Self::from_big(BigInt::one(), BigInt::from(c.clone()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Advisory double-precision approximation (report output only).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest integer `≤ self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Exact division by a positive natural number.
    ///
    /// # Errors
    ///
    /// `n = 0`.
    pub fn div_nat(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("division by zero"));
        }
        Ok(ExactRational(&self.0 / BigInt::from(n)))
    }

    /// Exact product with an unsigned big integer.
    pub fn mul_nat_big(&self, n: &BigUint) -> Self {
        ExactRational(&self.0 * BigInt::from(n.clone()))
    }
}

impl Default for ExactRational {
    fn default() -> Self {
        Self::zero()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl fmt::Display for ExactRational {
    /// Renders `p/q`, or just `p` when the value is an integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Parses `p` or `p/q` with decimal-string integers of any size.
    fn from_str(s: &str) -> Result<Self> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num.trim())
            .map_err(|e| Error::Parse(format!("bad rational numerator {num:?}: {e}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|e| Error::Parse(format!("bad rational denominator {den:?}: {e}")))?;
        Self::from_big(num, den)
    }
}

impl Serialize for ExactRational {
    /// Serializes as `{"num": "p", "den": "q", "approx": x}` with
    /// decimal-string integers; `approx` is informative only.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ExactRational", 3)?;
        st.serialize_field("num", &self.numer().to_string())?;
        st.serialize_field("den", &self.denom().to_string())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
            #[serde(default)]
            #[allow(dead_code)] // advisory field, intentionally ignored on read
            approx: Option<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = BigInt::from_str(&raw.num).map_err(D::Error::custom)?;
        let den = BigInt::from_str(&raw.den).map_err(D::Error::custom)?;
        ExactRational::from_big(num, den).map_err(D::Error::custom)
    }
}
