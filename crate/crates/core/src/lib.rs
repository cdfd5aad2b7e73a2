//! Finite-difference numerical differentiation.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`stencil`]: exact-rational stencils, the six textbook one-sided and
//!   centered first-derivative formulas, and a generator that solves the
//!   Taylor moment system for any offset set.
//! * [`series`]: sampled series and boundary-aware differentiation of them.
//! * [`models`]: three closed-form benchmark models (logistic population,
//!   single-compartment building temperature, linear market price) with
//!   analytic rates used as ground truth.
//! * [`metrics`]: signed relative error and its absolute/RMS variants,
//!   plus the per-scheme error table for a benchmark case.
//! * [`convergence`]: observed order of accuracy from a geometric step
//!   sweep and per-stencil cost counts.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod convergence;
mod error;
pub mod metrics;
pub mod models;
pub mod rational;
pub mod series;
pub mod stencil;

pub use crate::convergence::{cost_profile, observed_order, ConvergenceResult, CostProfile, StepSweep};
pub use crate::error::{Error, Result};
pub use crate::metrics::{case_error_table, error_variants, signed_relative_error, ErrorEntry, ErrorReport, ErrorVariants, ReferenceKind};
pub use crate::models::{Case, CaseModel, Grid, LogisticModel, MarketModel, Model, TemperatureModel};
pub use crate::rational::Rational;
pub use crate::series::{differentiate_series, BoundaryPolicy, DerivativeSeries, Series};
pub use crate::stencil::{builtin_stencil, generate_stencil, theoretical_order, Accuracy, Family, Scheme, Stencil};
