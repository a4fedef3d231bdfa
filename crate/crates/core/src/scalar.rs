//! Scalar fields used by the library.
//!
//! Two fields are supported: `f64` for iterative numerics and [`Rational`]
//! (arbitrary precision) for certificate-grade checks. Code generic over
//! [`Scalar`] runs unchanged on both; the exact field simply reports a zero
//! default tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Default tolerance of the floating point path.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    /// Conversion from `f64`. Exact for [`Rational`] (every finite double is a
    /// dyadic rational).
    fn from_f64(v: f64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_rational(&self) -> Rational;

    /// Tolerance used when a caller does not supply one.
    fn default_tol() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            DEFAULT_TOL
        }
    }

    /// Whether `self` is zero relative to the magnitude `scale`.
    fn negligible(&self, scale: f64) -> bool;

    fn to_json(&self) -> serde_json::Value;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    /// `self * other` without consuming either side.
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// `sum a_i b_i`.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).fold(Self::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite value")
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite value")
    }

    fn mul_ref(&self, other: &Self) -> Self {
        reduced(self.numer() * other.numer(), self.denom() * other.denom())
    }

    // accumulate over a common denominator and reduce once
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (x, y) in a.iter().zip(b) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = x.numer() * y.numer();
            let q = x.denom() * y.denom();
            if q == den {
                num += p;
            } else if q.is_one() {
                num += p * &den;
            } else {
                num = num * &q + p * &den;
                den *= q;
            }
        }
        reduced(num, den)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

/// `num / den` in lowest terms, `den > 0`. Word-sized values skip the
/// big-integer gcd.
pub fn reduced(num: BigInt, den: BigInt) -> Rational {
    use num_integer::Integer;
    match (num.to_i128(), den.to_u128()) {
        (Some(n), Some(d)) if d > 0 && n != i128::MIN => {
            let g = n.unsigned_abs().gcd(&d);
            Rational::new_raw(BigInt::from(n / g as i128), BigInt::from(d / g))
        }
        _ => Rational::new(num, den),
    }
}

/// `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(r) = Rational::from_str(t) {
        return Ok(r);
    }
    // decimal literal: exact base-10 expansion
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body
        .split_once('.')
        .ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}")))?;
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a rational number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Best rational approximation of `v` with denominator at most `max_den`
/// (continued fraction convergents).
pub fn rationalize(v: f64, max_den: i64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let neg = v < 0.0;
    let mut x = v.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}

/// Quantizes a nonnegative value to `k / den` with `k >= 1`.
pub fn quantize_positive<S: Scalar>(v: f64, den: i64) -> S {
    let k = ((v.abs() * den as f64).round() as i64).clamp(1, i64::MAX / 4);
    S::from_ratio(k, den)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn vec_to_rational<S: Scalar>(v: &[S]) -> Vec<Rational> {
    v.iter().map(Scalar::to_rational).collect()
}

pub fn vec_to_f64<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn vec_convert<S: Scalar, T: Scalar>(v: &[S]) -> Vec<T> {
    if S::EXACT {
        v.iter().map(|x| T::from_rational(&x.to_rational())).collect()
    } else {
        v.iter().map(|x| T::from_f64(x.to_f64())).collect()
    }
}

pub fn vec_to_json<S: Scalar>(v: &[S]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn convert<S: Scalar, T: Scalar>(x: &S) -> T {
    if S::EXACT {
        T::from_rational(&x.to_rational())
    } else {
        T::from_f64(x.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(3.0, 1000).unwrap(), rat(3, 1));
        assert_eq!(rationalize(1.0 / 3.0, 1000).unwrap(), rat(1, 3));
        assert_eq!(rationalize(-2.5, 1000).unwrap(), rat(-5, 2));
    }

    #[test]
    fn exact_conversion_of_doubles() {
        let r = <Rational as Scalar>::from_f64(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, rat(1, 10));
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }
}
