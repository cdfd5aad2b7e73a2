//! `numdiff`: finite-difference stencils, CSV differentiation, case reports
//! and convergence sweeps from the command line.
//!
//! Exit codes: 0 success, 1 IO failure, 2 usage or parse error, 3 grid
//! mismatch, 4 model singularity, 5 observed order off by more than 0.5.

pub mod csv_io;
pub mod error;
pub mod output;
pub mod presets;
pub mod render;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use numdiff_core::convergence::{cost_profile, observed_order, StepSweep};
use numdiff_core::metrics::CaseEstimates;
use numdiff_core::models::CaseModel;
use numdiff_core::stencil::{Accuracy, Family};
use numdiff_core::{differentiate_series, generate_stencil, BoundaryPolicy, Case, Grid, Model, Scheme, Stencil};

pub use error::{CliError, ExitStatus};
use output::emit;
use presets::{parse_override, Registry, PRESETS_ENV};

/// Observed and theoretical order may differ by this much before `converge` fails.
pub const ORDER_ALARM: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "numdiff", version, about = "Finite-difference differentiation benchmark")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a builtin or generated stencil with exact coefficients.
    Stencil {
        #[command(flatten)]
        select: StencilSelect,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Differentiate a `t,value` CSV series.
    Diff(DiffArgs),
    /// Benchmark cases.
    Case {
        #[command(subcommand)]
        command: CaseCommand,
    },
    /// Fit the observed order of accuracy over a step sweep.
    Converge(ConvergeArgs),
    /// Evaluation cost per output point.
    Cost {
        #[command(flatten)]
        select: StencilSelect,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        /// Also time repeated estimates (printed to stderr).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Debug, Subcommand)]
enum CaseCommand {
    /// Score the six schemes on one case.
    Run(CaseRunArgs),
    /// Print the preset registry.
    Presets {
        #[arg(long, env = PRESETS_ENV)]
        presets: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
    Svg,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
            Format::Svg => "svg",
        }
    }

    fn ensure(self, command: &str, allowed: &[Format]) -> Result<(), CliError> {
        if allowed.contains(&self) {
            return Ok(());
        }
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        Err(CliError::usage(format!(
            "`{command}` cannot write {}; use one of {}",
            self.name(),
            names.join(", ")
        )))
    }
}

#[derive(Debug, Args)]
struct StencilSelect {
    /// forward, backward or centered.
    #[arg(long, requires = "accuracy", conflicts_with = "offsets")]
    scheme: Option<Family>,
    /// low or high.
    #[arg(long, requires = "scheme")]
    accuracy: Option<Accuracy>,
    /// Comma-separated integer offsets, e.g. `-2,-1,0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    offsets: Option<Vec<i32>>,
    /// Derivative order for generated stencils.
    #[arg(long, requires = "offsets", default_value_t = 1)]
    deriv: u32,
}

impl StencilSelect {
    fn resolve(&self) -> Result<Option<(String, Stencil)>, CliError> {
        match (self.scheme, self.accuracy, &self.offsets) {
            (Some(family), Some(accuracy), None) => {
                let scheme = Scheme::new(family, accuracy);
                Ok(Some((scheme.label().to_string(), scheme.stencil())))
            }
            (None, None, Some(offsets)) => {
                let stencil = generate_stencil(offsets, self.deriv)?;
                let label = offsets.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                Ok(Some((format!("[{label}] d={}", self.deriv), stencil)))
            }
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Args)]
struct DiffArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    scheme: Family,
    #[arg(long)]
    accuracy: Accuracy,
    /// fallback, shrink or mark-missing.
    #[arg(long, default_value_t = BoundaryPolicy::Fallback)]
    policy: BoundaryPolicy,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Named parameter set; defaults to the case's own preset.
    #[arg(long)]
    preset: Option<String>,
    /// Preset registry JSON overlaid on the built-ins.
    #[arg(long, env = PRESETS_ENV)]
    presets: Option<PathBuf>,
    /// Parameter override NAME=VALUE; repeatable.
    #[arg(long = "set", value_parser = parse_override)]
    overrides: Vec<(String, f64)>,
}

impl ModelArgs {
    fn model(&self, case: Case) -> Result<(String, Model), CliError> {
        let registry = Registry::load(self.presets.as_deref())?;
        let name = self.preset.clone().unwrap_or_else(|| case.name().to_string());
        let preset = registry.get(&name)?;
        if preset.case != case {
            return Err(CliError::usage(format!(
                "preset `{name}` is a {} preset, not {case}",
                preset.case
            )));
        }
        let overrides: Vec<(&str, f64)> = self.overrides.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let model = preset.model()?.with_overrides(&overrides)?;
        Ok((name, model))
    }
}

#[derive(Debug, Args)]
struct CaseRunArgs {
    /// logistic, temperature or market.
    case: Case,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Grid step.
    #[arg(long, conflicts_with = "n")]
    h: Option<f64>,
    /// Number of grid points, as an alternative to --h.
    #[arg(long)]
    n: Option<usize>,
    /// Measured rates on the case grid, as a `t,value` CSV.
    #[arg(long)]
    experimental: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write an SVG plot of all estimates.
    #[arg(long)]
    plot: Option<PathBuf>,
}

impl CaseRunArgs {
    fn grid(&self) -> Result<Grid, CliError> {
        let default = self.case.default_grid();
        let t0 = self.t0.unwrap_or(default.t0);
        let t1 = self.t1.unwrap_or(default.t1);
        match self.n {
            Some(n) => Ok(Grid::with_points(t0, t1, n)?),
            None => Ok(Grid::new(t0, t1, self.h.unwrap_or(default.h))),
        }
    }
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long)]
    case: Case,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    scheme: Family,
    #[arg(long)]
    accuracy: Accuracy,
    /// Evaluation point.
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    h_max: f64,
    #[arg(long, default_value_t = 1.0 / 128.0)]
    h_min: f64,
    #[arg(long, default_value_t = 8)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().code()
        }
    }
}

fn dispatch(command: Command) -> Result<ExitStatus, CliError> {
    match command {
        Command::Stencil { select, format } => cmd_stencil(&select, format),
        Command::Diff(args) => cmd_diff(&args),
        Command::Case {
            command: CaseCommand::Run(args),
        } => cmd_case(&args),
        Command::Case {
            command: CaseCommand::Presets { presets },
        } => {
            let registry = Registry::load(presets.as_deref())?;
            let mut text = serde_json::to_string_pretty(&registry).expect("plain data serializes");
            text.push('\n');
            emit(&text, None)?;
            Ok(ExitStatus::Success)
        }
        Command::Converge(args) => cmd_converge(&args),
        Command::Cost { select, format, timing } => cmd_cost(&select, format, timing),
    }
}

fn cmd_stencil(select: &StencilSelect, format: Format) -> Result<ExitStatus, CliError> {
    format.ensure("stencil", &[Format::Json, Format::Csv, Format::Md])?;
    let (_, stencil) = select
        .resolve()?
        .ok_or_else(|| CliError::usage("give either --scheme with --accuracy, or --offsets"))?;
    let text = match format {
        Format::Json => render::stencil_json(&stencil),
        Format::Csv => render::stencil_csv(&stencil),
        _ => render::stencil_md(&stencil),
    };
    emit(&text, None)?;
    Ok(ExitStatus::Success)
}

fn cmd_diff(args: &DiffArgs) -> Result<ExitStatus, CliError> {
    let input = csv_io::read_series_csv(&args.input)?;
    let scheme = Scheme::new(args.scheme, args.accuracy);
    let out = differentiate_series(&input, scheme, args.policy)?;
    emit(&csv_io::render_series(&out.series), args.output.as_deref())?;
    eprintln!(
        "h = {:?}, scheme {scheme}, policy {}: {} points, {} with a substitute stencil, {} missing",
        out.step,
        args.policy,
        out.series.len(),
        out.substituted_count(),
        out.missing_count()
    );
    if out.missing_count() > 0 {
        eprintln!(
            "warning: {} of {} derivative values are missing because {scheme} does not fit there",
            out.missing_count(),
            out.series.len()
        );
    }
    Ok(ExitStatus::Success)
}

fn cmd_case(args: &CaseRunArgs) -> Result<ExitStatus, CliError> {
    args.format.ensure("case run", &[Format::Md, Format::Json, Format::Csv, Format::Svg])?;
    let (preset, model) = args.model.model(args.case)?;
    let grid = args.grid()?;
    let experimental = args
        .experimental
        .as_deref()
        .map(csv_io::read_series_csv)
        .transpose()?;
    let estimates = CaseEstimates::compute(&model, grid)?;
    let report = estimates.report(experimental.as_ref())?;
    let text = match args.format {
        Format::Md => render::report_md(&report, &model, &preset),
        Format::Json => render::report_json(&report, &model, &preset),
        Format::Csv => render::report_csv(&report),
        Format::Svg => svg::case_plot(&estimates),
    };
    emit(&text, args.output.as_deref())?;
    if let Some(path) = &args.plot {
        output::write_atomic(path, svg::case_plot(&estimates).as_bytes())?;
    }
    Ok(ExitStatus::Success)
}

fn cmd_converge(args: &ConvergeArgs) -> Result<ExitStatus, CliError> {
    args.format.ensure("converge", &[Format::Json, Format::Csv])?;
    let (_, model) = args.model.model(args.case)?;
    let scheme = Scheme::new(args.scheme, args.accuracy);
    let sweep = StepSweep::between(args.h_max, args.h_min, args.points)?;
    let stencil = scheme.stencil();
    // The widest step covers every abscissa of the sweep.
    let lo = args.t + f64::from(stencil.min_offset().min(0)) * args.h_max;
    let hi = args.t + f64::from(stencil.max_offset().max(0)) * args.h_max;
    if let Some(ts) = model.singularity().filter(|ts| (lo..=hi).contains(ts)) {
        return Err(numdiff_core::Error::Evaluation {
            at: args.t,
            cause: Box::new(numdiff_core::Error::Singularity { at: ts }),
        }
        .into());
    }
    let result = observed_order(&stencil, |t| model.value(t), |t| model.rate(t), args.t, &sweep)?;
    let text = match args.format {
        Format::Json => render::convergence_json(
            &result,
            &render::SweepContext {
                model: &model,
                scheme: scheme.label(),
                t: args.t,
            },
        ),
        _ => render::convergence_csv(&result),
    };
    emit(&text, args.output.as_deref())?;
    eprintln!("{}", render::convergence_summary(&result));
    match result.order_gap() {
        Some(gap) if gap > ORDER_ALARM => {
            eprintln!(
                "error: observed order differs from theoretical {} by {gap:.3} (> {ORDER_ALARM})",
                result.theoretical_order
            );
            Ok(ExitStatus::OrderMismatch)
        }
        _ => Ok(ExitStatus::Success),
    }
}

fn cmd_cost(select: &StencilSelect, format: Format, timing: bool) -> Result<ExitStatus, CliError> {
    format.ensure("cost", &[Format::Json, Format::Csv, Format::Md])?;
    let stencils: Vec<(String, Stencil)> = match select.resolve()? {
        Some(one) => vec![one],
        None => Scheme::ALL
            .into_iter()
            .map(|s| (s.label().to_string(), s.stencil()))
            .collect(),
    };
    let rows: Vec<render::CostRow<'_>> = stencils
        .iter()
        .map(|(label, stencil)| render::CostRow {
            label: label.clone(),
            stencil,
            cost: cost_profile(stencil),
        })
        .collect();
    let text = match format {
        Format::Json => render::cost_json(&rows),
        Format::Csv => render::cost_csv(&rows),
        _ => render::cost_md(&rows),
    };
    emit(&text, None)?;
    if timing {
        for (label, stencil) in &stencils {
            eprintln!("{label}: {:.1} ns per estimate", time_estimate(stencil)?);
        }
    }
    Ok(ExitStatus::Success)
}

fn time_estimate(stencil: &Stencil) -> Result<f64, CliError> {
    const REPS: u32 = 100_000;
    let start = Instant::now();
    let mut acc = 0.0;
    for i in 0..REPS {
        acc += stencil.estimate(f64::sin, 1.0 + f64::from(i) * 1e-9, 1e-3)?;
    }
    std::hint::black_box(acc);
    Ok(start.elapsed().as_nanos() as f64 / f64::from(REPS))
}
