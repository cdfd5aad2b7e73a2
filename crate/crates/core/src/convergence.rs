//! Observed order of accuracy and stencil cost.
//!
//! [`observed_order`] evaluates a stencil over a geometric sequence of steps,
//! discards points where floating-point cancellation rather than truncation
//! dominates, and fits `log(error) = p·log(h) + const` by least squares.

use alloc::format;
use alloc::vec::Vec;

use crate::rational;
use crate::stencil::{abs_weight_sum, step_power, Stencil};
use crate::{Error, Result};

/// Errors at or below `RATE_FLOOR_FACTOR · ε · |f'(x)|` are round-off.
pub const RATE_FLOOR_FACTOR: f64 = 100.0;

/// Errors at or below `CANCELLATION_FLOOR_FACTOR · ε · Σ|c_j·f(x + o_j·h)| / h^d`
/// are round-off: that product bounds the rounding in the stencil sum.
pub const CANCELLATION_FLOOR_FACTOR: f64 = 10.0;

/// Minimum number of fitted points for an order estimate.
pub const MIN_FIT_POINTS: usize = 3;

/// Geometric step sequence `h_max · ratio^i`, `i = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepSweep {
    pub h_max: f64,
    pub ratio: f64,
    pub points: usize,
}

impl StepSweep {
    pub const MIN_POINTS: usize = 5;

    pub fn new(h_max: f64, ratio: f64, points: usize) -> Result<Self> {
        if !(h_max > 0.0 && h_max.is_finite()) {
            return Err(Error::InvalidSweep(format!("h_max must be positive, got {h_max}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidSweep(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        if points < Self::MIN_POINTS {
            return Err(Error::InvalidSweep(format!(
                "need at least {} points, got {points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { h_max, ratio, points })
    }

    /// Sweep from `h_max` down to `h_min` inclusive.
    pub fn between(h_max: f64, h_min: f64, points: usize) -> Result<Self> {
        if !(h_min > 0.0 && h_min < h_max) {
            return Err(Error::InvalidSweep(format!(
                "need 0 < h_min < h_max, got h_min = {h_min}, h_max = {h_max}"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidSweep(format!("need at least 2 points, got {points}")));
        }
        let ratio = libm::pow(h_min / h_max, 1.0 / (points - 1) as f64);
        Self::new(h_max, ratio, points)
    }

    pub fn steps(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| self.h_max * libm::pow(self.ratio, i as f64))
            .collect()
    }
}

/// Outcome of a step sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConvergenceResult {
    /// Strictly decreasing.
    pub steps: Vec<f64>,
    /// `|estimate - exact|` at each step.
    pub errors: Vec<f64>,
    /// Signed `estimate - exact`.
    pub signed_errors: Vec<f64>,
    pub above_floor: Vec<bool>,
    /// Points used in the fit: above the floor and on the fine side of the
    /// last sign change of the error.
    pub in_fit: Vec<bool>,
    /// Fitted log-log slope; `None` when fewer than [`MIN_FIT_POINTS`] survive.
    pub slope: Option<f64>,
    /// 95 % confidence half-width of the slope.
    pub half_width: Option<f64>,
    pub theoretical_order: u32,
}

impl ConvergenceResult {
    pub fn fit_points(&self) -> usize {
        self.in_fit.iter().filter(|b| **b).count()
    }

    pub fn is_indeterminate(&self) -> bool {
        self.slope.is_none()
    }

    /// `|slope - theoretical|`, when a slope exists.
    pub fn order_gap(&self) -> Option<f64> {
        self.slope.map(|s| libm::fabs(s - f64::from(self.theoretical_order)))
    }
}

/// Measures how the error of `stencil` shrinks with `h` at `x`.
pub fn observed_order<F, G>(stencil: &Stencil, f: F, f_rate: G, x: f64, sweep: &StepSweep) -> Result<ConvergenceResult>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> Result<f64>,
{
    let exact = f_rate(x).map_err(|e| Error::Evaluation {
        at: x,
        cause: alloc::boxed::Box::new(e),
    })?;
    let steps = sweep.steps();
    let rate_floor = RATE_FLOOR_FACTOR * f64::EPSILON * libm::fabs(exact);
    let weight_sum = abs_weight_sum(stencil);

    let mut errors = Vec::with_capacity(steps.len());
    let mut signed_errors = Vec::with_capacity(steps.len());
    let mut above_floor = Vec::with_capacity(steps.len());
    for &h in &steps {
        let estimate = stencil.try_estimate(&f, x, h)?;
        let magnitude = stencil
            .offsets()
            .iter()
            .zip(stencil.coefficients())
            .filter(|(_, c)| *c != &rational::Rational::from_integer(0))
            .map(|(&o, _)| f(x + f64::from(o) * h).map(libm::fabs))
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))?;
        let cancellation_floor = CANCELLATION_FLOOR_FACTOR * f64::EPSILON * weight_sum * magnitude
            / step_power(h, stencil.derivative_order());
        let signed = estimate - exact;
        let error = libm::fabs(signed);
        signed_errors.push(signed);
        errors.push(error);
        above_floor.push(error > rate_floor && error > cancellation_floor);
    }

    // Walk from the finest surviving step toward coarser ones while the
    // error keeps the sign of the asymptotic (finest) regime.
    let mut in_fit = alloc::vec![false; steps.len()];
    let survivors: Vec<usize> = (0..steps.len()).filter(|&i| above_floor[i]).collect();
    if let Some(&finest) = survivors.last() {
        let sign = signed_errors[finest] > 0.0;
        for &i in survivors.iter().rev() {
            if (signed_errors[i] > 0.0) != sign {
                break;
            }
            in_fit[i] = true;
        }
    }

    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..steps.len())
        .filter(|&i| in_fit[i])
        .map(|i| (libm::log(steps[i]), libm::log(errors[i])))
        .unzip();
    let fit = if xs.len() >= MIN_FIT_POINTS {
        Some(least_squares_slope(&xs, &ys))
    } else {
        None
    };

    Ok(ConvergenceResult {
        steps,
        errors,
        signed_errors,
        above_floor,
        in_fit,
        slope: fit.map(|(s, _)| s),
        half_width: fit.map(|(_, hw)| hw),
        theoretical_order: stencil.accuracy_order(),
    })
}

/// Ordinary least-squares slope and its 95 % confidence half-width.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let dof = xs.len().saturating_sub(2);
    let half_width = if dof == 0 {
        0.0
    } else {
        let sse: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - (intercept + slope * x);
                r * r
            })
            .sum();
        let se = libm::sqrt(sse / dof as f64 / sxx);
        student_t_975(dof) * se
    };
    (slope, half_width)
}

/// Two-sided 95 % Student-t quantile.
fn student_t_975(dof: usize) -> f64 {
    const TABLE: [f64; 30] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
        2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    ];
    match dof {
        0 => f64::INFINITY,
        1..=30 => TABLE[dof - 1],
        _ => 1.960,
    }
}

/// Work a stencil needs per output point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostProfile {
    /// Function evaluations, one per nonzero weight.
    pub evaluations: u32,
    /// One multiply-add per nonzero weight.
    pub multiply_adds: u32,
    /// Grid points needed before the evaluation point.
    pub context_before: u32,
    /// Grid points needed after it.
    pub context_after: u32,
}

pub fn cost_profile(stencil: &Stencil) -> CostProfile {
    let evaluations = stencil.coefficients().iter().filter(|c| **c != rational::Rational::from_integer(0)).count() as u32;
    CostProfile {
        evaluations,
        multiply_adds: evaluations,
        context_before: (-stencil.min_offset()).max(0) as u32,
        context_after: stencil.max_offset().max(0) as u32,
    }
}
