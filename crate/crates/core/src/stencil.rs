//! Finite-difference stencils with exact rational weights.
//!
//! A [`Stencil`] of derivative order `d` estimates `f^(d)(x)` as
//! `h^-d · Σ_j c_j · f(x + o_j·h)`. Weights are exact rationals and a
//! stencil can only be constructed when its weights satisfy the Taylor
//! moment conditions
//!
//! ```text
//! Σ_j c_j · o_j^m = 0    for 0 ≤ m < d
//! Σ_j c_j · o_j^d = d!
//! ```
//!
//! The accuracy order `p` is the number of vanishing moments past `d`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stencil {
    offsets: Vec<i32>,
    coefficients: Vec<Rational>,
    derivative_order: u32,
    accuracy_order: u32,
}

impl Stencil {
    /// Builds a stencil from explicit weights. Pairs are sorted by offset;
    /// the weights must satisfy the moment conditions for `derivative_order`.
    pub fn new(offsets: Vec<i32>, coefficients: Vec<Rational>, derivative_order: u32) -> Result<Self> {
        if offsets.len() != coefficients.len() {
            return Err(Error::LengthMismatch {
                offsets: offsets.len(),
                coefficients: coefficients.len(),
            });
        }
        check_derivative_order(derivative_order, offsets.len())?;
        let mut pairs: Vec<(i32, Rational)> = offsets.into_iter().zip(coefficients).collect();
        pairs.sort_by_key(|(o, _)| *o);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateOffset(w[0].0));
        }
        let (offsets, coefficients): (Vec<i32>, Vec<Rational>) = pairs.into_iter().unzip();
        let accuracy_order = order_from_moments(&offsets, &coefficients, derivative_order)?;
        Ok(Self {
            offsets,
            coefficients,
            derivative_order,
            accuracy_order,
        })
    }

    pub fn offsets(&self) -> &[i32] {
        &self.offsets
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn derivative_order(&self) -> u32 {
        self.derivative_order
    }

    pub fn accuracy_order(&self) -> u32 {
        self.accuracy_order
    }

    /// Number of offsets, including any with a zero weight.
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn min_offset(&self) -> i32 {
        self.offsets[0]
    }

    pub fn max_offset(&self) -> i32 {
        self.offsets[self.offsets.len() - 1]
    }

    /// `Σ_j c_j · o_j^m`, exactly.
    pub fn moment(&self, m: u32) -> Result<Rational> {
        rational::moment(&self.offsets, &self.coefficients, m)
    }

    /// The same stencil with zero-weight offsets removed.
    pub fn without_zero_coefficients(&self) -> Stencil {
        let (offsets, coefficients) = self
            .offsets
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(o, c)| (*o, *c))
            .unzip();
        Stencil {
            offsets,
            coefficients,
            derivative_order: self.derivative_order,
            accuracy_order: self.accuracy_order,
        }
    }

    /// Least common denominator of the weights, e.g. 12 for the five-point
    /// centered stencil.
    pub fn common_denominator(&self) -> i128 {
        rational::lcm_of_denominators(&self.coefficients)
    }

    /// Weights scaled to integers by [`Stencil::common_denominator`], as `f64`.
    pub fn integer_weights(&self) -> (Vec<f64>, f64) {
        let lcd = self.common_denominator();
        let weights = self
            .coefficients
            .iter()
            .map(|c| (c.numer() * (lcd / c.denom())) as f64)
            .collect();
        (weights, lcd as f64)
    }

    /// Fits inside `0..len` when centered at `index`.
    pub fn fits(&self, index: usize, len: usize) -> bool {
        let i = index as i64;
        i + i64::from(self.min_offset()) >= 0 && i + i64::from(self.max_offset()) < len as i64
    }

    /// Applies the stencil to a closure, `h^-d · Σ_j c_j · f(x + o_j·h)`.
    pub fn estimate<F>(&self, f: F, x: f64, h: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.try_estimate(|t| Ok(f(t)), x, h)
    }

    /// Like [`Stencil::estimate`] for fallible functions. A failure is
    /// reported with the abscissa that triggered it.
    pub fn try_estimate<F>(&self, mut f: F, x: f64, h: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(h > 0.0) {
            return Err(Error::NonPositiveStep(h));
        }
        let (weights, lcd) = self.integer_weights();
        let mut sum = 0.0;
        for (&o, w) in self.offsets.iter().zip(&weights) {
            if *w == 0.0 {
                continue;
            }
            let at = x + f64::from(o) * h;
            let value = f(at).map_err(|e| Error::Evaluation {
                at,
                cause: alloc::boxed::Box::new(e),
            })?;
            sum += w * value;
        }
        Ok(sum / (lcd * step_power(h, self.derivative_order)))
    }
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}/p{} [", self.derivative_order, self.accuracy_order)?;
        for (k, (o, c)) in self.offsets.iter().zip(&self.coefficients).enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{o}: {c}")?;
        }
        f.write_str("]")
    }
}

pub(crate) fn step_power(h: f64, d: u32) -> f64 {
    (0..d).fold(1.0, |acc, _| acc * h)
}

fn check_derivative_order(derivative_order: u32, points: usize) -> Result<()> {
    if derivative_order == 0 {
        return Err(Error::ZeroDerivativeOrder);
    }
    if derivative_order as usize >= points {
        return Err(Error::DerivativeOrderTooHigh {
            derivative_order,
            points,
        });
    }
    Ok(())
}

/// Validates the moments below and at `d` and counts vanishing moments above it.
fn order_from_moments(offsets: &[i32], coefficients: &[Rational], d: u32) -> Result<u32> {
    for m in 0..=d {
        let found = rational::moment(offsets, coefficients, m)?;
        let expected = if m == d {
            Rational::from_integer(rational::factorial(d)?)
        } else {
            Rational::zero()
        };
        if found != expected {
            return Err(Error::MomentViolation {
                derivative_order: d,
                moment: m,
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    // With n distinct offsets, n consecutive moments past d cannot all vanish
    // unless every weight on a nonzero offset is zero, which the m = d check
    // already excludes.
    let limit = d + offsets.len() as u32;
    for m in d + 1..=limit {
        if !rational::moment(offsets, coefficients, m)?.is_zero() {
            return Ok(m - d);
        }
    }
    unreachable!("moment system admits no nonzero moment past the derivative order")
}

/// Solves the square moment system `Σ_j c_j o_j^m = d!·[m = d]`,
/// `m = 0..n-1`, exactly.
pub fn generate_stencil(offsets: &[i32], derivative_order: u32) -> Result<Stencil> {
    check_derivative_order(derivative_order, offsets.len())?;
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateOffset(w[0]));
    }
    let n = sorted.len();

    // Augmented Vandermonde matrix, row m holds o_j^m.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for m in 0..n as u32 {
        let mut row = Vec::with_capacity(n + 1);
        for &o in &sorted {
            row.push(Rational::from_integer(rational::int_pow(i128::from(o), m)?));
        }
        let rhs = if m == derivative_order {
            Rational::from_integer(rational::factorial(derivative_order)?)
        } else {
            Rational::zero()
        };
        row.push(rhs);
        rows.push(row);
    }

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(Error::DuplicateOffset(sorted[col]))?;
        rows.swap(col, pivot);
        let inv = rational::div(&Rational::one(), &rows[col][col])?;
        for k in col..=n {
            rows[col][k] = rational::mul(&rows[col][k], &inv)?;
        }
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col];
            for k in col..=n {
                let delta = rational::mul(&factor, &rows[col][k])?;
                rows[r][k] = rational::sub(&rows[r][k], &delta)?;
            }
        }
    }

    let coefficients = rows.into_iter().map(|row| row[n]).collect();
    Stencil::new(sorted, coefficients, derivative_order)
}

/// Accuracy order of a stencil recomputed from its weights.
pub fn theoretical_order(stencil: &Stencil) -> Result<u32> {
    order_from_moments(stencil.offsets(), stencil.coefficients(), stencil.derivative_order())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    Forward,
    Backward,
    Centered,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Forward, Family::Backward, Family::Centered];

    pub fn name(self) -> &'static str {
        match self {
            Family::Forward => "forward",
            Family::Backward => "backward",
            Family::Centered => "centered",
        }
    }

    /// The first-derivative member of this family with the given accuracy
    /// order, if one exists. Centered stencils only come in even orders.
    pub fn first_derivative(self, accuracy_order: u32) -> Option<Stencil> {
        if accuracy_order == 0 {
            return None;
        }
        let p = accuracy_order as i32;
        let offsets: Vec<i32> = match self {
            Family::Forward => (0..=p).collect(),
            Family::Backward => (-p..=0).collect(),
            Family::Centered if p % 2 == 0 => (-p / 2..=p / 2).collect(),
            Family::Centered => return None,
        };
        let stencil = generate_stencil(&offsets, 1).ok()?;
        Some(stencil.without_zero_coefficients())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Family::Forward),
            "backward" => Ok(Family::Backward),
            "centered" | "central" => Ok(Family::Centered),
            other => Err(Error::InvalidParameter(alloc::format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Accuracy {
    Low,
    High,
}

impl Accuracy {
    pub fn name(self) -> &'static str {
        match self {
            Accuracy::Low => "low",
            Accuracy::High => "high",
        }
    }
}

impl fmt::Display for Accuracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Accuracy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" | "1" => Ok(Accuracy::Low),
            "high" | "2" => Ok(Accuracy::High),
            other => Err(Error::InvalidParameter(alloc::format!("unknown accuracy `{other}`"))),
        }
    }
}

/// One of the six textbook first-derivative formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scheme {
    pub family: Family,
    pub accuracy: Accuracy,
}

impl Scheme {
    /// Table order: forward1, backward1, centered1, forward2, backward2, centered2.
    pub const ALL: [Scheme; 6] = [
        Scheme::new(Family::Forward, Accuracy::Low),
        Scheme::new(Family::Backward, Accuracy::Low),
        Scheme::new(Family::Centered, Accuracy::Low),
        Scheme::new(Family::Forward, Accuracy::High),
        Scheme::new(Family::Backward, Accuracy::High),
        Scheme::new(Family::Centered, Accuracy::High),
    ];

    pub const fn new(family: Family, accuracy: Accuracy) -> Self {
        Self { family, accuracy }
    }

    /// Short label such as `forward1` or `centered2`.
    pub fn label(self) -> &'static str {
        match (self.family, self.accuracy) {
            (Family::Forward, Accuracy::Low) => "forward1",
            (Family::Backward, Accuracy::Low) => "backward1",
            (Family::Centered, Accuracy::Low) => "centered1",
            (Family::Forward, Accuracy::High) => "forward2",
            (Family::Backward, Accuracy::High) => "backward2",
            (Family::Centered, Accuracy::High) => "centered2",
        }
    }

    pub fn stencil(self) -> Stencil {
        builtin_stencil(self)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.label() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown scheme `{s}`")))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let s = <alloc::string::String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// The built-in stencil for a scheme.
///
/// The high-accuracy backward formula uses the sign pattern
/// `(3f_i - 4f_{i-1} + f_{i-2}) / 2h`, the only one that satisfies the
/// moment conditions. The high-accuracy centered formula is the five-point
/// first-derivative stencil with its zero center weight dropped.
pub fn builtin_stencil(scheme: Scheme) -> Stencil {
    let (offsets, coefficients) = match (scheme.family, scheme.accuracy) {
        (Family::Forward, Accuracy::Low) => (alloc::vec![0, 1], alloc::vec![r(-1, 1), r(1, 1)]),
        (Family::Forward, Accuracy::High) => (alloc::vec![0, 1, 2], alloc::vec![r(-3, 2), r(2, 1), r(-1, 2)]),
        (Family::Backward, Accuracy::Low) => (alloc::vec![-1, 0], alloc::vec![r(-1, 1), r(1, 1)]),
        (Family::Backward, Accuracy::High) => (alloc::vec![-2, -1, 0], alloc::vec![r(1, 2), r(-2, 1), r(3, 2)]),
        (Family::Centered, Accuracy::Low) => (alloc::vec![-1, 1], alloc::vec![r(-1, 2), r(1, 2)]),
        (Family::Centered, Accuracy::High) => (
            alloc::vec![-2, -1, 1, 2],
            alloc::vec![r(1, 12), r(-8, 12), r(8, 12), r(-1, 12)],
        ),
    };
    Stencil::new(offsets, coefficients, 1).expect("built-in weights satisfy the moment conditions")
}

/// Sum of absolute weights, the round-off amplification of a stencil.
pub(crate) fn abs_weight_sum(stencil: &Stencil) -> f64 {
    stencil
        .coefficients()
        .iter()
        .map(|c| rational::to_f64(&c.abs()))
        .sum()
}
