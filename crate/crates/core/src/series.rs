//! Sampled series and stencil application along them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::stencil::{step_power, Family, Scheme, Stencil};
use crate::{Error, Result};

/// Value used for samples that could not be computed.
pub const MISSING: f64 = f64::NAN;

/// Relative tolerance on grid spacing for a series to count as uniform.
pub const UNIFORM_SPACING_TOLERANCE: f64 = 1e-9;

pub fn is_missing(value: f64) -> bool {
    value.is_nan()
}

/// Paired `(time, value)` samples with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Series {
    times: Vec<f64>,
    values: Vec<f64>,
    time_unit: String,
    value_unit: String,
}

impl Series {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if let Some(i) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidSeries(format!("time at index {i} is not finite")));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSeries(format!(
                "times must be strictly increasing: t[{}] = {} follows t[{}] = {}",
                i + 1,
                times[i + 1],
                i,
                times[i]
            )));
        }
        if let Some(i) = values.iter().position(|v| v.is_infinite()) {
            return Err(Error::InvalidSeries(format!("value at index {i} is infinite")));
        }
        Ok(Self {
            times,
            values,
            time_unit: String::new(),
            value_unit: String::new(),
        })
    }

    /// Samples at `t0 + i·h`.
    pub fn uniform(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::NonPositiveStep(h));
        }
        let times = (0..values.len()).map(|i| t0 + i as f64 * h).collect();
        Self::new(times, values)
    }

    pub fn with_units(mut self, time_unit: impl Into<String>, value_unit: impl Into<String>) -> Self {
        self.time_unit = time_unit.into();
        self.value_unit = value_unit.into();
        self
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_unit(&self) -> &str {
        &self.time_unit
    }

    pub fn value_unit(&self) -> &str {
        &self.value_unit
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Largest relative deviation of a spacing from the mean spacing.
    pub fn spacing_deviation(&self) -> Option<(f64, f64)> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        let h = (self.times[n - 1] - self.times[0]) / (n - 1) as f64;
        let dev = self
            .times
            .windows(2)
            .map(|w| libm::fabs((w[1] - w[0]) - h) / h)
            .fold(0.0, f64::max);
        Some((h, dev))
    }

    /// Grid step of a uniform series.
    pub fn uniform_step(&self) -> Result<f64> {
        let (h, dev) = self.spacing_deviation().ok_or(Error::SeriesTooShort {
            len: self.len(),
            needed: 2,
        })?;
        if dev > UNIFORM_SPACING_TOLERANCE {
            return Err(Error::NonUniformGrid {
                max_deviation: dev,
                tolerance: UNIFORM_SPACING_TOLERANCE,
            });
        }
        Ok(h)
    }

    /// Same time axis, within `rel_tol` of the grid span.
    pub fn same_axis(&self, other: &Series, rel_tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let span = match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) => libm::fabs(*a).max(libm::fabs(*b)).max(b - a),
            _ => return true,
        };
        self.times
            .iter()
            .zip(&other.times)
            .all(|(a, b)| libm::fabs(a - b) <= rel_tol * span)
    }
}

/// What to do where the requested stencil reaches past the series ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoundaryPolicy {
    /// Widest one-sided stencil of the same or lower accuracy that fits.
    #[default]
    Fallback,
    /// Lower the accuracy within the requested family until a member fits;
    /// missing when no member fits.
    Shrink,
    /// Missing wherever the requested stencil does not fit.
    MarkMissing,
}

impl BoundaryPolicy {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryPolicy::Fallback => "fallback",
            BoundaryPolicy::Shrink => "shrink",
            BoundaryPolicy::MarkMissing => "mark-missing",
        }
    }
}

impl core::fmt::Display for BoundaryPolicy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for BoundaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fallback" => Ok(BoundaryPolicy::Fallback),
            "shrink" => Ok(BoundaryPolicy::Shrink),
            "mark-missing" | "missing" => Ok(BoundaryPolicy::MarkMissing),
            other => Err(Error::InvalidParameter(format!("unknown boundary policy `{other}`"))),
        }
    }
}

/// Derivative estimates plus a record of which stencil produced each value.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSeries {
    pub series: Series,
    pub scheme: Scheme,
    pub policy: BoundaryPolicy,
    pub step: f64,
    /// Distinct stencils used; index 0 is always the requested one.
    pub stencils: Vec<Stencil>,
    /// Per sample, an index into `stencils`, or `None` for a missing value.
    pub applied: Vec<Option<usize>>,
}

impl DerivativeSeries {
    pub fn stencil_at(&self, index: usize) -> Option<&Stencil> {
        self.applied.get(index).copied().flatten().map(|k| &self.stencils[k])
    }

    pub fn missing_count(&self) -> usize {
        self.applied.iter().filter(|a| a.is_none()).count()
    }

    /// Samples that used something other than the requested stencil.
    pub fn substituted_count(&self) -> usize {
        self.applied.iter().filter(|a| matches!(a, Some(k) if *k != 0)).count()
    }
}

/// Applies `scheme` along a uniform series, handling the ends per `policy`.
pub fn differentiate_series(series: &Series, scheme: Scheme, policy: BoundaryPolicy) -> Result<DerivativeSeries> {
    let n = series.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { len: n, needed: 2 });
    }
    let h = series.uniform_step()?;
    let requested = scheme.stencil();
    let mut stencils = alloc::vec![requested.clone()];
    let mut applied = Vec::with_capacity(n);

    for i in 0..n {
        let choice = if requested.fits(i, n) {
            Some(requested.clone())
        } else {
            match policy {
                BoundaryPolicy::MarkMissing => None,
                BoundaryPolicy::Fallback => one_sided_fallback(&requested, i, n),
                BoundaryPolicy::Shrink => shrink_within_family(scheme.family, &requested, i, n),
            }
        };
        applied.push(choice.map(|s| match stencils.iter().position(|known| *known == s) {
            Some(k) => k,
            None => {
                stencils.push(s);
                stencils.len() - 1
            }
        }));
    }

    let prepared: Vec<(Vec<f64>, f64)> = stencils.iter().map(Stencil::integer_weights).collect();
    let values = series.values();
    let out: Vec<f64> = applied
        .iter()
        .enumerate()
        .map(|(i, choice)| match choice {
            None => MISSING,
            Some(k) => {
                let stencil = &stencils[*k];
                let (weights, lcd) = &prepared[*k];
                let sum: f64 = stencil
                    .offsets()
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w != 0.0)
                    .map(|(&o, w)| w * values[(i as i64 + i64::from(o)) as usize])
                    .sum();
                sum / (lcd * step_power(h, stencil.derivative_order()))
            }
        })
        .collect();

    let series = Series::new(series.times().to_vec(), out)?.with_units(
        String::from(series.time_unit()),
        derivative_unit(series.value_unit(), series.time_unit()),
    );
    Ok(DerivativeSeries {
        series,
        scheme,
        policy,
        step: h,
        stencils,
        applied,
    })
}

fn derivative_unit(value_unit: &str, time_unit: &str) -> String {
    if value_unit.is_empty() && time_unit.is_empty() {
        String::new()
    } else {
        format!("{value_unit}/{time_unit}")
    }
}

fn one_sided_fallback(requested: &Stencil, index: usize, len: usize) -> Option<Stencil> {
    let prefer_forward = index < len / 2;
    let order = if prefer_forward {
        [Family::Forward, Family::Backward]
    } else {
        [Family::Backward, Family::Forward]
    };
    (1..=requested.accuracy_order()).rev().find_map(|p| {
        order
            .iter()
            .filter_map(|family| family.first_derivative(p))
            .find(|s| s.fits(index, len))
    })
}

fn shrink_within_family(family: Family, requested: &Stencil, index: usize, len: usize) -> Option<Stencil> {
    (1..requested.accuracy_order())
        .rev()
        .filter_map(|p| family.first_derivative(p))
        .find(|s| s.fits(index, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::Accuracy;
    use alloc::vec;

    fn linear(n: usize) -> Series {
        Series::uniform(0.0, 1.0, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn series_validation() {
        assert!(Series::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(Series::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Series::new(vec![1.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Series::new(vec![0.0, 1.0], vec![1.0, f64::INFINITY]).is_err());
        assert!(Series::new(vec![0.0, 1.0], vec![1.0, MISSING]).is_ok());
    }

    #[test]
    fn forward_low_on_identity_is_exactly_one() {
        let out = differentiate_series(
            &linear(11),
            Scheme::new(Family::Forward, Accuracy::Low),
            BoundaryPolicy::Fallback,
        )
        .unwrap();
        assert!(out.series.values().iter().all(|&v| v == 1.0));
        assert_eq!(out.substituted_count(), 1);
        assert_eq!(out.stencil_at(10).unwrap().offsets(), &[-1, 0]);
    }

    #[test]
    fn five_point_never_fits_three_samples() {
        let out = differentiate_series(
            &linear(3),
            Scheme::new(Family::Centered, Accuracy::High),
            BoundaryPolicy::MarkMissing,
        )
        .unwrap();
        assert_eq!(out.missing_count(), 3);
        assert!(out.series.values().iter().all(|v| is_missing(*v)));
    }

    #[test]
    fn too_short() {
        let s = Series::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(
            differentiate_series(&s, Scheme::ALL[0], BoundaryPolicy::Fallback).unwrap_err(),
            Error::SeriesTooShort { len: 1, needed: 2 }
        );
    }

    #[test]
    fn non_uniform_rejected() {
        let s = Series::new(vec![0.0, 1.0, 2.5], vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            differentiate_series(&s, Scheme::ALL[0], BoundaryPolicy::Fallback),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn tiny_spacing_jitter_accepted() {
        let s = Series::new(vec![0.0, 1.0 + 1e-12, 2.0], vec![0.0, 1.0, 2.0]).unwrap();
        assert!(s.uniform_step().is_ok());
    }

    #[test]
    fn fallback_for_centered_high_uses_fourth_order_one_sided() {
        let out = differentiate_series(
            &linear(10),
            Scheme::new(Family::Centered, Accuracy::High),
            BoundaryPolicy::Fallback,
        )
        .unwrap();
        assert_eq!(out.stencil_at(0).unwrap().offsets(), &[0, 1, 2, 3, 4]);
        assert_eq!(out.stencil_at(1).unwrap().offsets(), &[0, 1, 2, 3, 4]);
        assert_eq!(out.stencil_at(2).unwrap().offsets(), &[-2, -1, 1, 2]);
        assert_eq!(out.stencil_at(9).unwrap().offsets(), &[-4, -3, -2, -1, 0]);
        assert_eq!(out.missing_count(), 0);
    }

    #[test]
    fn fallback_degrades_accuracy_when_short() {
        let out = differentiate_series(
            &linear(3),
            Scheme::new(Family::Centered, Accuracy::High),
            BoundaryPolicy::Fallback,
        )
        .unwrap();
        assert_eq!(out.stencil_at(0).unwrap().offsets(), &[0, 1, 2]);
        assert_eq!(out.stencil_at(1).unwrap().offsets(), &[-1, 0]);
        assert_eq!(out.stencil_at(2).unwrap().offsets(), &[-2, -1, 0]);
        assert!(out.series.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn shrink_stays_in_family() {
        let out = differentiate_series(
            &linear(6),
            Scheme::new(Family::Centered, Accuracy::High),
            BoundaryPolicy::Shrink,
        )
        .unwrap();
        assert!(out.stencil_at(0).is_none());
        assert_eq!(out.stencil_at(1).unwrap().offsets(), &[-1, 1]);
        assert_eq!(out.stencil_at(2).unwrap().offsets(), &[-2, -1, 1, 2]);
        assert_eq!(out.missing_count(), 2);

        let out = differentiate_series(
            &linear(6),
            Scheme::new(Family::Forward, Accuracy::High),
            BoundaryPolicy::Shrink,
        )
        .unwrap();
        assert_eq!(out.stencil_at(4).unwrap().offsets(), &[0, 1]);
        assert!(out.stencil_at(5).is_none());
    }

    #[test]
    fn policies_parse() {
        for p in [BoundaryPolicy::Fallback, BoundaryPolicy::Shrink, BoundaryPolicy::MarkMissing] {
            assert_eq!(p.name().parse::<BoundaryPolicy>().unwrap(), p);
        }
        assert_eq!(BoundaryPolicy::default(), BoundaryPolicy::Fallback);
    }
}
