//! Exact rational arithmetic for stencil weights.
//!
//! Weights are `Ratio<i128>`; every operation used while solving moment
//! systems is checked so overflow surfaces as [`Error::Overflow`] instead of
//! wrapping.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

pub(crate) fn add(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::Overflow);
    }
    a.checked_div(b).ok_or(Error::Overflow)
}

/// `base^exp` as an exact integer, with `0^0 = 1`.
pub(crate) fn int_pow(base: i128, exp: u32) -> Result<i128> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

pub(crate) fn factorial(n: u32) -> Result<i128> {
    (1..=i128::from(n)).try_fold(1i128, |acc, k| acc.checked_mul(k).ok_or(Error::Overflow))
}

/// Nearest `f64` to `r`. Numerator and denominator are converted separately,
/// which is exact for the small weights stencils carry.
pub fn to_f64(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `Σ_j c_j · offset_j^m` in exact arithmetic.
pub fn moment(offsets: &[i32], coefficients: &[Rational], m: u32) -> Result<Rational> {
    offsets
        .iter()
        .zip(coefficients)
        .try_fold(Rational::zero(), |acc, (&o, c)| {
            let p = Rational::from_integer(int_pow(i128::from(o), m)?);
            add(&acc, &mul(c, &p)?)
        })
}

pub(crate) fn lcm_of_denominators(values: &[Rational]) -> i128 {
    values.iter().fold(1i128, |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0).unwrap(), 1);
        assert_eq!(factorial(5).unwrap(), 120);
        assert_eq!(factorial(40), Err(Error::Overflow));
    }

    #[test]
    fn pow_zero_zero_is_one() {
        assert_eq!(int_pow(0, 0).unwrap(), 1);
        assert_eq!(int_pow(-2, 3).unwrap(), -8);
    }

    #[test]
    fn checked_ops_report_overflow() {
        let big = Rational::from_integer(i128::MAX);
        assert_eq!(add(&big, &big), Err(Error::Overflow));
        assert_eq!(div(&big, &Rational::zero()), Err(Error::Overflow));
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(to_f64(&Rational::new(-1, 2)), -0.5);
        assert_eq!(to_f64(&Rational::new(2, 3)), 2.0 / 3.0);
    }

    #[test]
    fn lcm() {
        let v = [Rational::new(1, 12), Rational::new(-2, 3), Rational::new(1, 2)];
        assert_eq!(lcm_of_denominators(&v), 12);
    }
}
