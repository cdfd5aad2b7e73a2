//! Closed-form benchmark models and their analytic rates.
//!
//! Each model provides a value function and the exact time derivative of
//! that value function; the latter is the ground truth numerical
//! derivatives are scored against.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::series::Series;
use crate::{Error, Result};

pub trait CaseModel {
    fn value(&self, t: f64) -> Result<f64>;

    fn rate(&self, t: f64) -> Result<f64>;

    /// A time at which the value function is undefined, if any.
    fn singularity(&self) -> Option<f64> {
        None
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

/// Logistic population growth `dp/dt = -A·p·(p - p1)`, `p(0) = p0`.
///
/// Population in millions, time in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    a: f64,
    p1: f64,
    p0: f64,
}

impl LogisticModel {
    /// Relative guard on the denominator of the closed form, scaled by `|p1 - p0|`.
    pub const SINGULARITY_GUARD: f64 = 1e-9;

    pub fn new(a: f64, p1: f64, p0: f64) -> Result<Self> {
        require_finite("A", a)?;
        require_finite("p1", p1)?;
        require_finite("p0", p0)?;
        if p0 == 0.0 {
            return Err(Error::InvalidParameter("p0 must be nonzero".into()));
        }
        if a * p1 == 0.0 {
            return Err(Error::InvalidParameter("A·p1 must be nonzero".into()));
        }
        Ok(Self { a, p1, p0 })
    }

    /// Fitted constants for the 1900-based census series.
    pub fn published() -> Self {
        Self {
            a: -4.382e-07,
            p1: -2.921e+04,
            p0: 76.09,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    fn denominator(&self, t: f64) -> f64 {
        self.p0 + (self.p1 - self.p0) * libm::exp(-self.a * self.p1 * t)
    }

    /// `p0·p1 / (p0 + (p1 - p0)·e^(-A·p1·t))`
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let denom = self.denominator(t);
        if libm::fabs(denom) <= Self::SINGULARITY_GUARD * libm::fabs(self.p1 - self.p0) || !denom.is_finite() {
            return Err(Error::Singularity { at: t });
        }
        Ok(self.p0 * self.p1 / denom)
    }

    /// `-A·p·(p - p1)` at `p = p(t)`.
    pub fn rate_at(&self, t: f64) -> Result<f64> {
        let p = self.value_at(t)?;
        Ok(-self.a * p * (p - self.p1))
    }

    /// Real root of the closed-form denominator, if there is one.
    pub fn singular_time(&self) -> Option<f64> {
        if self.p1 == self.p0 {
            return None;
        }
        let ratio = self.p0 / (self.p0 - self.p1);
        if !(ratio > 0.0) {
            return None;
        }
        Some(libm::log(ratio) / (-self.a * self.p1))
    }
}

impl CaseModel for LogisticModel {
    fn value(&self, t: f64) -> Result<f64> {
        self.value_at(t)
    }

    fn rate(&self, t: f64) -> Result<f64> {
        self.rate_at(t)
    }

    fn singularity(&self) -> Option<f64> {
        self.singular_time()
    }
}

/// Single-compartment building temperature
/// `T(t) = B2 - B1·F1(t) + C·e^(-k1·t)` with `C = T0 - B2 + B1·F1(0)`.
///
/// Temperature in °C, time in hours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureModel {
    b1: f64,
    b2: f64,
    k1: f64,
    omega: f64,
    t0: f64,
    c: f64,
}

impl TemperatureModel {
    pub fn new(b1: f64, b2: f64, k1: f64, omega: f64, t0: f64) -> Result<Self> {
        for (name, v) in [("B1", b1), ("B2", b2), ("k1", k1), ("omega", omega), ("T0", t0)] {
            require_finite(name, v)?;
        }
        if !(k1 > 0.0) {
            return Err(Error::InvalidParameter(format!("k1 must be positive, got {k1}")));
        }
        let mut model = Self {
            b1,
            b2,
            k1,
            omega,
            t0,
            c: 0.0,
        };
        model.c = t0 - b2 + b1 * model.f1(0.0);
        Ok(model)
    }

    /// Daily cycle defaults: ω = π/12 rad/h, k1 = 0.2 /h, B1 = 10 °C,
    /// B2 = 20 °C, T0 = 15 °C.
    pub fn defaults() -> Self {
        Self::new(10.0, 20.0, 0.2, core::f64::consts::PI / 12.0, 15.0).expect("defaults are valid")
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn initial_temperature(&self) -> f64 {
        self.t0
    }

    /// The integration constant `C`.
    pub fn c(&self) -> f64 {
        self.c
    }

    fn ratio(&self) -> f64 {
        self.omega / self.k1
    }

    /// `(cos ωt + (ω/k1)·sin ωt) / (1 + (ω/k1)²)`
    pub fn f1(&self, t: f64) -> f64 {
        let r = self.ratio();
        (libm::cos(self.omega * t) + r * libm::sin(self.omega * t)) / (1.0 + r * r)
    }

    pub fn f1_rate(&self, t: f64) -> f64 {
        let r = self.ratio();
        self.omega * (-libm::sin(self.omega * t) + r * libm::cos(self.omega * t)) / (1.0 + r * r)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.b2 - self.b1 * self.f1(t) + self.c * libm::exp(-self.k1 * t)
    }

    pub fn rate_at(&self, t: f64) -> f64 {
        -self.b1 * self.f1_rate(t) - self.k1 * self.c * libm::exp(-self.k1 * t)
    }
}

impl CaseModel for TemperatureModel {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_at(t))
    }

    fn rate(&self, t: f64) -> Result<f64> {
        Ok(self.rate_at(t))
    }
}

/// Aggregate linear market with adaptive price expectations,
/// `P(t) = D·e^(r·t) + a/b` with `r = λ·b / (c·λ - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketModel {
    d: f64,
    lambda: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl MarketModel {
    pub fn new(d: f64, lambda: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("D", d), ("lambda", lambda), ("a", a), ("b", b), ("c", c)] {
            require_finite(name, v)?;
        }
        if b == 0.0 {
            return Err(Error::InvalidParameter("b must be nonzero".into()));
        }
        if c * lambda == 1.0 {
            return Err(Error::InvalidParameter("c·lambda = 1 puts the exponent on a pole".into()));
        }
        Ok(Self { d, lambda, a, b, c })
    }

    /// Constants as printed; note `b < 0` makes the exponent decay and the
    /// equilibrium negative.
    pub fn published() -> Self {
        Self {
            d: 3.282e-08,
            lambda: -7.314,
            a: 36.07,
            b: -0.01,
            c: 0.018,
        }
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Exponent rate `λ·b / (c·λ - 1)`.
    pub fn exponent(&self) -> f64 {
        self.lambda * self.b / (self.c * self.lambda - 1.0)
    }

    /// Static equilibrium `a/b`.
    pub fn equilibrium_price(&self) -> f64 {
        self.a / self.b
    }

    pub fn price_at(&self, t: f64) -> f64 {
        self.d * libm::exp(self.exponent() * t) + self.a / self.b
    }

    pub fn rate_at(&self, t: f64) -> f64 {
        let r = self.exponent();
        self.d * r * libm::exp(r * t)
    }

    /// Right-hand side of the price ODE, `(λa - λb·p) / (1 - λc)`.
    pub fn ode_rhs(&self, price: f64) -> f64 {
        (self.lambda * self.a - self.lambda * self.b * price) / (1.0 - self.lambda * self.c)
    }
}

impl CaseModel for MarketModel {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.price_at(t))
    }

    fn rate(&self, t: f64) -> Result<f64> {
        Ok(self.rate_at(t))
    }
}

/// The three benchmark cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Case {
    Logistic,
    Temperature,
    Market,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::Logistic, Case::Temperature, Case::Market];

    pub fn name(self) -> &'static str {
        match self {
            Case::Logistic => "logistic",
            Case::Temperature => "temperature",
            Case::Market => "market",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Case::Logistic => "population dynamics",
            Case::Temperature => "temperature change",
            Case::Market => "market equilibrium price",
        }
    }

    /// Parameter names, in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Case::Logistic => &["A", "p1", "p0"],
            Case::Temperature => &["B1", "B2", "k1", "omega", "T0"],
            Case::Market => &["D", "lambda", "a", "b", "c"],
        }
    }

    /// Time and value units.
    pub fn units(self) -> (&'static str, &'static str) {
        match self {
            Case::Logistic => ("year", "million people"),
            Case::Temperature => ("hour", "degC"),
            Case::Market => ("time", "price"),
        }
    }

    pub fn default_model(self) -> Model {
        match self {
            Case::Logistic => Model::Logistic(LogisticModel::published()),
            Case::Temperature => Model::Temperature(TemperatureModel::defaults()),
            Case::Market => Model::Market(MarketModel::published()),
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Case::Logistic => Grid::new(0.0, 120.0, 10.0),
            Case::Temperature => Grid::new(0.0, 24.0, 0.5),
            Case::Market => Grid::new(0.0, 300.0, 5.0),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown case `{s}`")))
    }
}

/// Any of the three models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Logistic(LogisticModel),
    Temperature(TemperatureModel),
    Market(MarketModel),
}

impl Model {
    pub fn case(&self) -> Case {
        match self {
            Model::Logistic(_) => Case::Logistic,
            Model::Temperature(_) => Case::Temperature,
            Model::Market(_) => Case::Market,
        }
    }

    /// Parameters in [`Case::param_names`] order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        let values: Vec<f64> = match self {
            Model::Logistic(m) => alloc::vec![m.a, m.p1, m.p0],
            Model::Temperature(m) => alloc::vec![m.b1, m.b2, m.k1, m.omega, m.t0],
            Model::Market(m) => alloc::vec![m.d, m.lambda, m.a, m.b, m.c],
        };
        self.case().param_names().iter().copied().zip(values).collect()
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    /// Builds a model from named parameters; every name of the case must be
    /// supplied and no others.
    pub fn from_params(case: Case, params: &[(&str, f64)]) -> Result<Model> {
        let names = case.param_names();
        if let Some((unknown, _)) = params.iter().find(|(n, _)| !names.contains(n)) {
            return Err(Error::InvalidParameter(format!(
                "`{unknown}` is not a {case} parameter (expected one of {})",
                names.join(", ")
            )));
        }
        let get = |name: &str| {
            params
                .iter()
                .rev()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::InvalidParameter(format!("missing {case} parameter `{name}`")))
        };
        Ok(match case {
            Case::Logistic => Model::Logistic(LogisticModel::new(get("A")?, get("p1")?, get("p0")?)?),
            Case::Temperature => Model::Temperature(TemperatureModel::new(
                get("B1")?,
                get("B2")?,
                get("k1")?,
                get("omega")?,
                get("T0")?,
            )?),
            Case::Market => Model::Market(MarketModel::new(
                get("D")?,
                get("lambda")?,
                get("a")?,
                get("b")?,
                get("c")?,
            )?),
        })
    }

    /// This model with some parameters replaced.
    pub fn with_overrides(&self, overrides: &[(&str, f64)]) -> Result<Model> {
        let mut params: Vec<(&str, f64)> = self.params();
        params.extend_from_slice(overrides);
        Model::from_params(self.case(), &params)
    }
}

impl CaseModel for Model {
    fn value(&self, t: f64) -> Result<f64> {
        match self {
            Model::Logistic(m) => m.value(t),
            Model::Temperature(m) => m.value(t),
            Model::Market(m) => m.value(t),
        }
    }

    fn rate(&self, t: f64) -> Result<f64> {
        match self {
            Model::Logistic(m) => m.rate(t),
            Model::Temperature(m) => m.rate(t),
            Model::Market(m) => m.rate(t),
        }
    }

    fn singularity(&self) -> Option<f64> {
        match self {
            Model::Logistic(m) => m.singularity(),
            Model::Temperature(m) => m.singularity(),
            Model::Market(m) => m.singularity(),
        }
    }
}

/// Uniform sampling grid `t0, t0 + h, …, t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
}

impl Grid {
    pub const fn new(t0: f64, t1: f64, h: f64) -> Self {
        Self { t0, t1, h }
    }

    /// Grid with `n` inclusive points.
    pub fn with_points(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridMismatch(format!("need at least 2 points, got {n}")));
        }
        Ok(Self::new(t0, t1, (t1 - t0) / (n - 1) as f64))
    }

    /// Number of points; `(t1 - t0)` must be a whole number of steps.
    pub fn points(&self) -> Result<usize> {
        if !(self.t0.is_finite() && self.t1.is_finite() && self.t1 > self.t0) {
            return Err(Error::GridMismatch(format!(
                "grid needs finite t1 > t0, got [{}, {}]",
                self.t0, self.t1
            )));
        }
        if !(self.h > 0.0) {
            return Err(Error::NonPositiveStep(self.h));
        }
        let span = self.t1 - self.t0;
        let steps = libm::round(span / self.h);
        if steps < 1.0 || libm::fabs(steps * self.h - span) > 1e-9 * span {
            return Err(Error::GridMismatch(format!(
                "step {} does not divide [{}, {}] evenly",
                self.h, self.t0, self.t1
            )));
        }
        Ok(steps as usize + 1)
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        let n = self.points()?;
        Ok((0..n).map(|i| self.t0 + i as f64 * self.h).collect())
    }
}

fn sample_with<M, F>(model: &M, t0: f64, t1: f64, n: usize, f: F) -> Result<Series>
where
    M: CaseModel + ?Sized,
    F: Fn(&M, f64) -> Result<f64>,
{
    if n < 2 {
        return Err(Error::GridMismatch(format!("need at least 2 samples, got {n}")));
    }
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::GridMismatch(format!("need finite t1 > t0, got [{t0}, {t1}]")));
    }
    let h = (t1 - t0) / (n - 1) as f64;
    let times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
    if let Some(ts) = model.singularity().filter(|ts| *ts >= t0 && *ts <= t1) {
        let nearest = times
            .iter()
            .copied()
            .min_by(|a, b| libm::fabs(a - ts).total_cmp(&libm::fabs(b - ts)))
            .unwrap_or(ts);
        return Err(Error::Evaluation {
            at: nearest,
            cause: alloc::boxed::Box::new(Error::Singularity { at: ts }),
        });
    }
    let values = times
        .iter()
        .map(|&t| {
            f(model, t).map_err(|e| Error::Evaluation {
                at: t,
                cause: alloc::boxed::Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Series::new(times, values)
}

/// Samples the model's value function at `n` uniform points on `[t0, t1]`.
pub fn sample_model<M: CaseModel + ?Sized>(model: &M, t0: f64, t1: f64, n: usize) -> Result<Series> {
    sample_with(model, t0, t1, n, |m, t| m.value(t))
}

/// Samples the analytic rate on the same grid as [`sample_model`].
pub fn sample_rate<M: CaseModel + ?Sized>(model: &M, t0: f64, t1: f64, n: usize) -> Result<Series> {
    sample_with(model, t0, t1, n, |m, t| m.rate(t))
}
