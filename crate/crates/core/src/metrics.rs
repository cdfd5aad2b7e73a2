//! Relative error of a derivative estimate against a reference series.
//!
//! The headline metric is the signed sum ratio `Σ(ref - est) / Σ ref`.
//! Because signed differences can cancel, two variants are reported next to
//! it: `abs_l1 = Σ|ref - est| / Σ|ref|` and the relative RMS
//! `sqrt(Σ(ref - est)² / Σ ref²)`.

use alloc::format;
use alloc::vec::Vec;

use crate::models::{sample_model, sample_rate, Case, Grid, Model};
use crate::series::{differentiate_series, is_missing, BoundaryPolicy, DerivativeSeries, Series};
use crate::stencil::Scheme;
use crate::{Error, Result};

/// Relative tolerance on time axes compared pairwise.
pub const AXIS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ErrorVariants {
    pub signed: f64,
    pub abs_l1: f64,
    pub rms: f64,
}

fn paired<'a>(reference: &'a Series, estimate: &'a Series) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    if !reference.same_axis(estimate, AXIS_TOLERANCE) {
        return Err(Error::GridMismatch(format!(
            "reference has {} samples on [{}, {}], estimate has {} on [{}, {}]",
            reference.len(),
            reference.times().first().copied().unwrap_or(f64::NAN),
            reference.times().last().copied().unwrap_or(f64::NAN),
            estimate.len(),
            estimate.times().first().copied().unwrap_or(f64::NAN),
            estimate.times().last().copied().unwrap_or(f64::NAN),
        )));
    }
    Ok(reference
        .values()
        .iter()
        .copied()
        .zip(estimate.values().iter().copied())
        .filter(|(r, e)| !is_missing(*r) && !is_missing(*e)))
}

/// `Σ(ref_i - est_i) / Σ ref_i` over pairs where neither value is missing.
pub fn signed_relative_error(reference: &Series, estimate: &Series) -> Result<f64> {
    let (diff, total) = paired(reference, estimate)?.fold((0.0, 0.0), |(d, t), (r, e)| (d + (r - e), t + r));
    if total == 0.0 {
        return Err(Error::ZeroReferenceSum);
    }
    Ok(diff / total)
}

pub fn error_variants(reference: &Series, estimate: &Series) -> Result<ErrorVariants> {
    let signed = signed_relative_error(reference, estimate)?;
    let mut abs_diff = 0.0;
    let mut abs_ref = 0.0;
    let mut sq_diff = 0.0;
    let mut sq_ref = 0.0;
    for (r, e) in paired(reference, estimate)? {
        abs_diff += libm::fabs(r - e);
        abs_ref += libm::fabs(r);
        sq_diff += (r - e) * (r - e);
        sq_ref += r * r;
    }
    if abs_ref == 0.0 {
        return Err(Error::ZeroReferenceSum);
    }
    Ok(ErrorVariants {
        signed,
        abs_l1: abs_diff / abs_ref,
        rms: libm::sqrt(sq_diff / sq_ref),
    })
}

/// What an estimate is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ReferenceKind {
    /// User-supplied measured rates.
    Experimental,
    /// Analytic rate of the closed-form model.
    Empirical,
}

impl ReferenceKind {
    /// Short tag used in table row labels.
    pub fn tag(self) -> &'static str {
        match self {
            ReferenceKind::Experimental => "exp",
            ReferenceKind::Empirical => "emp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ErrorEntry {
    pub scheme: Scheme,
    pub reference: ReferenceKind,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub errors: ErrorVariants,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ErrorReport {
    pub case: Case,
    pub grid: Grid,
    pub points: usize,
    /// Scheme-major, experimental before empirical for each scheme.
    pub entries: Vec<ErrorEntry>,
}

impl ErrorReport {
    pub fn entry(&self, scheme: Scheme, reference: ReferenceKind) -> Option<&ErrorEntry> {
        self.entries
            .iter()
            .find(|e| e.scheme == scheme && e.reference == reference)
    }

    pub fn entries_for(&self, reference: ReferenceKind) -> impl Iterator<Item = &ErrorEntry> {
        self.entries.iter().filter(move |e| e.reference == reference)
    }
}

/// Analytic rate plus the six scheme estimates on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseEstimates {
    pub case: Case,
    pub grid: Grid,
    pub values: Series,
    pub rates: Series,
    pub estimates: Vec<DerivativeSeries>,
}

impl CaseEstimates {
    /// Samples `model` on `grid` and differentiates with every scheme using
    /// fallback boundaries.
    pub fn compute(model: &Model, grid: Grid) -> Result<Self> {
        let n = grid.points()?;
        let t1 = grid.t0 + (n - 1) as f64 * grid.h;
        let (time_unit, value_unit) = model.case().units();
        let values = sample_model(model, grid.t0, t1, n)?.with_units(time_unit, value_unit);
        let rates = sample_rate(model, grid.t0, t1, n)?
            .with_units(time_unit, format!("{value_unit}/{time_unit}"));
        let estimates = Scheme::ALL
            .into_iter()
            .map(|scheme| differentiate_series(&values, scheme, BoundaryPolicy::Fallback))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            case: model.case(),
            grid,
            values,
            rates,
            estimates,
        })
    }

    /// Scores every estimate against the analytic rates and, when given,
    /// against experimental rates on the same grid.
    pub fn report(&self, experimental: Option<&Series>) -> Result<ErrorReport> {
        if let Some(exp) = experimental {
            if !exp.same_axis(&self.rates, AXIS_TOLERANCE) {
                return Err(Error::GridMismatch(format!(
                    "experimental series has {} samples on [{}, {}], case grid has {} on [{}, {}]",
                    exp.len(),
                    exp.times().first().copied().unwrap_or(f64::NAN),
                    exp.times().last().copied().unwrap_or(f64::NAN),
                    self.rates.len(),
                    self.grid.t0,
                    self.rates.times().last().copied().unwrap_or(f64::NAN),
                )));
            }
        }
        let mut entries = Vec::with_capacity(12);
        for estimate in &self.estimates {
            if let Some(exp) = experimental {
                entries.push(ErrorEntry {
                    scheme: estimate.scheme,
                    reference: ReferenceKind::Experimental,
                    errors: error_variants(exp, &estimate.series)?,
                });
            }
            entries.push(ErrorEntry {
                scheme: estimate.scheme,
                reference: ReferenceKind::Empirical,
                errors: error_variants(&self.rates, &estimate.series)?,
            });
        }
        Ok(ErrorReport {
            case: self.case,
            grid: self.grid,
            points: self.rates.len(),
            entries,
        })
    }
}

/// Per-scheme error table for one benchmark case.
pub fn case_error_table(model: &Model, grid: Grid, experimental: Option<&Series>) -> Result<ErrorReport> {
    CaseEstimates::compute(model, grid)?.report(experimental)
}
