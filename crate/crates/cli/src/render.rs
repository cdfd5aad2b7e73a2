//! Text renderings of stencils, error reports, sweeps and cost profiles.
//!
//! CSV and JSON carry shortest round-trip numbers; Markdown tables round to
//! four decimals.

use std::fmt::Write as _;

use numdiff_core::convergence::{ConvergenceResult, CostProfile};
use numdiff_core::metrics::{ErrorEntry, ErrorReport, ReferenceKind};
use numdiff_core::{Grid, Model, Stencil};
use serde::Serialize;

use crate::csv_io::format_number;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 output")
}

#[derive(Serialize)]
struct StencilJson<'a> {
    offsets: &'a [i32],
    coefficients: Vec<String>,
    derivative_order: u32,
    accuracy_order: u32,
}

impl<'a> From<&'a Stencil> for StencilJson<'a> {
    fn from(s: &'a Stencil) -> Self {
        Self {
            offsets: s.offsets(),
            coefficients: s.coefficients().iter().map(ToString::to_string).collect(),
            derivative_order: s.derivative_order(),
            accuracy_order: s.accuracy_order(),
        }
    }
}

/// Compact single-line JSON.
pub fn stencil_json(s: &Stencil) -> String {
    let mut text = serde_json::to_string(&StencilJson::from(s)).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn stencil_csv(s: &Stencil) -> String {
    let rows = s.offsets().iter().zip(s.coefficients()).map(|(o, c)| {
        vec![
            o.to_string(),
            c.to_string(),
            s.derivative_order().to_string(),
            s.accuracy_order().to_string(),
        ]
    });
    csv_text(&["offset", "coefficient", "derivative_order", "accuracy_order"], rows)
}

pub fn stencil_md(s: &Stencil) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "derivative order {}, accuracy order {}\n",
        s.derivative_order(),
        s.accuracy_order()
    );
    out.push_str("| offset | coefficient |\n|---:|---:|\n");
    for (o, c) in s.offsets().iter().zip(s.coefficients()) {
        let _ = writeln!(out, "| {o} | {c} |");
    }
    out
}

#[derive(Serialize)]
struct Param {
    name: &'static str,
    value: f64,
}

fn params(model: &Model) -> Vec<Param> {
    model.params().into_iter().map(|(name, value)| Param { name, value }).collect()
}

#[derive(Serialize)]
struct ReportJson<'a> {
    case: numdiff_core::Case,
    preset: &'a str,
    params: Vec<Param>,
    grid: Grid,
    points: usize,
    entries: &'a [ErrorEntry],
}

pub fn report_json(report: &ErrorReport, model: &Model, preset: &str) -> String {
    to_json(&ReportJson {
        case: report.case,
        preset,
        params: params(model),
        grid: report.grid,
        points: report.points,
        entries: &report.entries,
    })
}

pub fn report_csv(report: &ErrorReport) -> String {
    let rows = report.entries.iter().map(|e| {
        vec![
            e.scheme.label().to_string(),
            e.reference.tag().to_string(),
            format_number(e.errors.signed),
            format_number(e.errors.abs_l1),
            format_number(e.errors.rms),
        ]
    });
    csv_text(&["scheme", "reference", "signed", "abs_l1", "rms"], rows)
}

fn reference_name(r: ReferenceKind) -> &'static str {
    match r {
        ReferenceKind::Experimental => "experimental",
        ReferenceKind::Empirical => "empirical",
    }
}

/// Rows `e_{exp|emp}^{scheme}` with the signed error, then all three variants.
pub fn report_md(report: &ErrorReport, model: &Model, preset: &str) -> String {
    let mut out = String::new();
    let case = report.case;
    let _ = writeln!(out, "# {case}: {}\n", case.title());
    let ps: Vec<String> = model.params().iter().map(|(n, v)| format!("{n} = {v:?}")).collect();
    let _ = writeln!(out, "preset `{preset}`: {}\n", ps.join(", "));
    let g = report.grid;
    let _ = writeln!(
        out,
        "grid: t0 = {:?}, t1 = {:?}, h = {:?} ({} points)\n",
        g.t0, g.t1, g.h, report.points
    );
    out.push_str("| Error | Value |\n|---|---:|\n");
    for e in &report.entries {
        let _ = writeln!(
            out,
            "| e_{{{}}}^{{{}}} | {:.4} |",
            e.reference.tag(),
            e.scheme.label(),
            e.errors.signed
        );
    }
    out.push_str("\n| Scheme | Reference | signed | abs_l1 | rms |\n|---|---|---:|---:|---:|\n");
    for e in &report.entries {
        let _ = writeln!(
            out,
            "| {} | {} | {:.4} | {:.4} | {:.4} |",
            e.scheme.label(),
            reference_name(e.reference),
            e.errors.signed,
            e.errors.abs_l1,
            e.errors.rms
        );
    }
    out
}

#[derive(Serialize)]
struct SweepPoint {
    h: f64,
    error: f64,
    signed_error: f64,
    above_floor: bool,
    in_fit: bool,
}

#[derive(Serialize)]
struct ConvergenceJson {
    case: numdiff_core::Case,
    scheme: String,
    t: f64,
    params: Vec<Param>,
    theoretical_order: u32,
    slope: Option<f64>,
    half_width: Option<f64>,
    fit_points: usize,
    indeterminate: bool,
    sweep: Vec<SweepPoint>,
}

pub struct SweepContext<'a> {
    pub model: &'a Model,
    pub scheme: &'a str,
    pub t: f64,
}

pub fn convergence_json(result: &ConvergenceResult, ctx: &SweepContext<'_>) -> String {
    let sweep = (0..result.steps.len())
        .map(|i| SweepPoint {
            h: result.steps[i],
            error: result.errors[i],
            signed_error: result.signed_errors[i],
            above_floor: result.above_floor[i],
            in_fit: result.in_fit[i],
        })
        .collect();
    to_json(&ConvergenceJson {
        case: ctx.model.case(),
        scheme: ctx.scheme.to_string(),
        t: ctx.t,
        params: params(ctx.model),
        theoretical_order: result.theoretical_order,
        slope: result.slope,
        half_width: result.half_width,
        fit_points: result.fit_points(),
        indeterminate: result.is_indeterminate(),
        sweep,
    })
}

pub fn convergence_csv(result: &ConvergenceResult) -> String {
    let rows = (0..result.steps.len()).map(|i| {
        vec![
            format_number(result.steps[i]),
            format_number(result.errors[i]),
            format_number(result.signed_errors[i]),
            result.above_floor[i].to_string(),
            result.in_fit[i].to_string(),
        ]
    });
    csv_text(&["h", "error", "signed_error", "above_floor", "in_fit"], rows)
}

pub fn convergence_summary(result: &ConvergenceResult) -> String {
    match (result.slope, result.half_width) {
        (Some(slope), Some(hw)) => format!(
            "observed order {slope:.4} ± {hw:.4} from {} points (theoretical {})",
            result.fit_points(),
            result.theoretical_order
        ),
        _ => format!(
            "observed order indeterminate: {} points above the round-off floor (theoretical {})",
            result.fit_points(),
            result.theoretical_order
        ),
    }
}

/// One row of a cost table.
pub struct CostRow<'a> {
    pub label: String,
    pub stencil: &'a Stencil,
    pub cost: CostProfile,
}

#[derive(Serialize)]
struct CostJson<'a> {
    label: &'a str,
    offsets: &'a [i32],
    accuracy_order: u32,
    #[serde(flatten)]
    cost: CostProfile,
}

#[derive(Serialize)]
struct CostTable<'a> {
    stencils: Vec<CostJson<'a>>,
}

pub fn cost_json(rows: &[CostRow<'_>]) -> String {
    to_json(&CostTable {
        stencils: rows
            .iter()
            .map(|r| CostJson {
                label: &r.label,
                offsets: r.stencil.offsets(),
                accuracy_order: r.stencil.accuracy_order(),
                cost: r.cost,
            })
            .collect(),
    })
}

pub fn cost_csv(rows: &[CostRow<'_>]) -> String {
    let body = rows.iter().map(|r| {
        vec![
            r.label.clone(),
            r.stencil.accuracy_order().to_string(),
            r.cost.evaluations.to_string(),
            r.cost.multiply_adds.to_string(),
            r.cost.context_before.to_string(),
            r.cost.context_after.to_string(),
        ]
    });
    csv_text(
        &["stencil", "accuracy_order", "evaluations", "multiply_adds", "context_before", "context_after"],
        body,
    )
}

pub fn cost_md(rows: &[CostRow<'_>]) -> String {
    let mut out = String::from(
        "| stencil | accuracy order | evaluations | multiply-adds | points before | points after |\n\
         |---|---:|---:|---:|---:|---:|\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.label,
            r.stencil.accuracy_order(),
            r.cost.evaluations,
            r.cost.multiply_adds,
            r.cost.context_before,
            r.cost.context_after
        );
    }
    out
}
