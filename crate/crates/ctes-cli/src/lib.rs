//! Command-line front end: drive the kernel, the planner and the factoring
//! pipeline, and export CSV, JSON and SVG artifacts.
//!
//! Exit codes: 0 on success, 1 on domain errors (the message names the
//! violated precondition) and usage errors, 2 on I/O errors.

pub mod csv;
pub mod plot;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use ctes_core::extractor::{candidate_trials, classify, factor_run, factor_run_with_plan};
use ctes_core::interferogram::{build_grid, record};
use ctes_core::planner::{sequence_plan, PlanOptions};
use ctes_core::{
    CurlicueParams, FactorRun, Interferogram, Method, PhaseArgument, RescaledView, SamplingConfig,
    SamplingMode, SpectralWindow, Verdict,
};

use plot::{Marker, MarkerKind, Panel};

/// Run the CLI on the given argument vector and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            1
        }
        Err(CliError::Io(message)) => {
            eprintln!("i/o error: {message}");
            2
        }
    }
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    Io(String),
}

impl From<ctes_core::Error> for CliError {
    fn from(err: ctes_core::Error) -> Self {
        CliError::Domain(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "ctes",
    version,
    about = "Interference-based factoring with continuous truncated exponential sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the curlicue intensity over a range of phase arguments
    Curlicue(CurlicueArgs),
    /// Record one interferogram over the observable window
    Interferogram(InterferogramArgs),
    /// Print the interferogram sequence plan for a target or a range
    Plan(PlanArgs),
    /// Run the factoring pipeline and print the report
    Factor(FactorArgs),
}

#[derive(Args)]
struct CurlicueArgs {
    /// Number of interfering terms
    #[arg(long = "M")]
    terms: u32,
    /// Phase order
    #[arg(long = "j")]
    order: u32,
    /// Scan range as start:end:step
    #[arg(long = "zeta-range", default_value = "-0.5:0.5:0.001", allow_hyphen_values = true)]
    zeta_range: ScanRange,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot (plus a sibling data CSV)
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct InterferogramArgs {
    /// Number of interfering terms
    #[arg(long = "M")]
    terms: u32,
    /// Phase order
    #[arg(long = "j")]
    order: u32,
    /// Unit parameter of the recording
    #[arg(long)]
    x: f64,
    #[arg(long = "o-min")]
    o_min: f64,
    #[arg(long = "o-max")]
    o_max: f64,
    /// Bind a target: adds the rescaled xi_N column and trial markers
    #[arg(long = "N")]
    target: Option<u64>,
    /// Rescaling product of primes
    #[arg(long, default_value_t = 1)]
    s: u64,
    #[arg(long = "samples-per-unit", default_value_t = 32)]
    samples_per_unit: u32,
    /// Do not insert exact grid points at integer trial values
    #[arg(long = "no-snap")]
    no_snap: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// 1 covers [3, sqrt(N)], 2 covers [sqrt(N), N]
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Plan for a single target
    #[arg(long = "N", conflicts_with = "range", required_unless_present = "range")]
    target: Option<u64>,
    /// Plan for every target in lo:hi
    #[arg(long = "N-range")]
    range: Option<TargetRange>,
    #[arg(long = "o-min")]
    o_min: f64,
    #[arg(long = "o-max")]
    o_max: f64,
    /// Rescaling product of primes
    #[arg(long, default_value_t = 1)]
    s: u64,
    /// Physical ceiling for the unit parameter
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    /// Override the first unit parameter (must be admissible)
    #[arg(long = "x0")]
    x0: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    /// Target integer
    #[arg(long = "N")]
    target: u64,
    /// 1 covers [3, sqrt(N)], 2 covers [sqrt(N), N]
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long = "o-min")]
    o_min: f64,
    #[arg(long = "o-max")]
    o_max: f64,
    /// Rescaling product of primes
    #[arg(long, default_value_t = 1)]
    s: u64,
    /// Number of interfering terms
    #[arg(long = "M", default_value_t = 3)]
    terms: u32,
    /// Phase order
    #[arg(long = "j", default_value_t = 2)]
    order: u32,
    /// How candidate intensities are read: direct or sampled
    #[arg(long, default_value = "direct", value_parser = parse_mode)]
    mode: SamplingMode,
    #[arg(long = "samples-per-unit", default_value_t = 32)]
    samples_per_unit: u32,
    /// Override the candidate-flagging threshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Physical ceiling for the unit parameter
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct ScanRange {
    start: f64,
    end: f64,
    step: f64,
}

impl FromStr for ScanRange {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err("expected start:end:step".into());
        }
        let parse = |part: &str| {
            part.parse::<f64>()
                .map_err(|_| format!("not a number: {part}"))
        };
        let range = ScanRange {
            start: parse(parts[0])?,
            end: parse(parts[1])?,
            step: parse(parts[2])?,
        };
        if !range.step.is_finite() || range.step <= 0.0 {
            return Err("step must be positive".into());
        }
        if range.end < range.start {
            return Err("end must not precede start".into());
        }
        if (range.end - range.start) / range.step > 10_000_000.0 {
            return Err("range would produce more than 10^7 points".into());
        }
        Ok(range)
    }
}

impl ScanRange {
    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let count = ((self.end - self.start) / self.step + 0.5).floor() as usize;
        (0..=count).map(move |k| self.start + k as f64 * self.step)
    }
}

#[derive(Debug, Clone, Copy)]
struct TargetRange {
    lo: u64,
    hi: u64,
}

impl FromStr for TargetRange {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = text.split_once(':').ok_or("expected lo:hi")?;
        let lo = lo.parse::<u64>().map_err(|_| format!("not an integer: {lo}"))?;
        let hi = hi.parse::<u64>().map_err(|_| format!("not an integer: {hi}"))?;
        Ok(TargetRange { lo, hi })
    }
}

fn parse_method(text: &str) -> Result<Method, String> {
    match text {
        "1" | "method1" => Ok(Method::Method1),
        "2" | "method2" => Ok(Method::Method2),
        other => Err(format!("unknown method {other:?}, expected 1 or 2")),
    }
}

fn parse_mode(text: &str) -> Result<SamplingMode, String> {
    match text {
        "direct" => Ok(SamplingMode::Direct),
        "sampled" => Ok(SamplingMode::Sampled),
        other => Err(format!("unknown mode {other:?}, expected direct or sampled")),
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Curlicue(args) => run_curlicue(args),
        Command::Interferogram(args) => run_interferogram(args),
        Command::Plan(args) => run_plan(args),
        Command::Factor(args) => run_factor(args),
    }
}

fn run_curlicue(args: CurlicueArgs) -> Result<(), CliError> {
    let params = CurlicueParams::new(args.terms, args.order)?;
    let points: Vec<(f64, f64)> = args
        .zeta_range
        .points()
        .map(|zeta| {
            PhaseArgument::new(zeta)
                .map(|z| (zeta, ctes_core::curlicue_intensity(z, &params)))
                .map_err(CliError::from)
        })
        .collect::<Result<_, _>>()?;
    let rendered = csv::curlicue_csv(&points);
    emit(args.out.as_deref(), &rendered)?;
    if let Some(path) = args.plot.as_deref() {
        let panel = Panel {
            title: format!("|s({},{})|^2 over zeta", args.terms, args.order),
            x_label: "zeta".into(),
            y_label: "intensity".into(),
            curve: points,
            markers: Vec::new(),
        };
        write_plot(path, &[panel], &rendered)?;
    }
    Ok(())
}

fn run_interferogram(args: InterferogramArgs) -> Result<(), CliError> {
    let params = CurlicueParams::new(args.terms, args.order)?;
    let window = SpectralWindow::new(args.o_min, args.o_max)?;
    let cfg = SamplingConfig::new(args.samples_per_unit, !args.no_snap, SamplingMode::Direct)?;
    // grid density tracks xi_N when a target is bound, plain xi otherwise
    let grid_n = match args.target {
        Some(n) => n
            .checked_mul(args.s)
            .ok_or_else(|| CliError::Domain(format!("s*N overflows (s={}, N={n})", args.s)))?,
        None => 1,
    };
    let grid = build_grid(&window, args.x, grid_n.max(1), &cfg)?;
    let ig = record(&params, &window, args.x, &grid)?;
    let rendered = csv::interferogram_csv(&ig, args.target, args.s);
    emit(args.out.as_deref(), &rendered)?;
    if let Some(path) = args.plot.as_deref() {
        let panel = interferogram_panel(&ig, args.target, args.s, &cfg)?;
        write_plot(path, &[panel], &rendered)?;
    }
    Ok(())
}

fn interferogram_panel(
    ig: &Interferogram,
    target: Option<u64>,
    s: u64,
    cfg: &SamplingConfig,
) -> Result<Panel, CliError> {
    let (curve, markers, x_label) = match target {
        Some(n) => {
            let view = ig.rescale_scaled(n, s)?;
            let markers = trial_markers(&view, n, s, cfg);
            let label = if s > 1 { "xi_N_s".into() } else { "xi_N".into() };
            (view.samples().to_vec(), markers, label)
        }
        None => {
            let curve: Vec<(f64, f64)> = ig
                .samples()
                .iter()
                .map(|&(o, v)| (o / ig.x(), v))
                .collect();
            (curve, Vec::new(), "xi".to_string())
        }
    };
    Ok(Panel {
        title: match target {
            Some(n) => format!("I(o_xi; x={}) rescaled for N={n}", ig.x()),
            None => format!("I(o_xi; x={})", ig.x()),
        },
        x_label,
        y_label: "intensity".into(),
        curve,
        markers,
    })
}

fn trial_markers(view: &RescaledView, n: u64, s: u64, cfg: &SamplingConfig) -> Vec<Marker> {
    let classified = classify(n, s, candidate_trials(view, cfg), cfg.threshold());
    classified
        .iter()
        .filter_map(|cand| {
            let y = view.nearest_intensity(cand.ell as f64)?;
            let kind = match cand.verdict {
                Verdict::Factor => MarkerKind::Star,
                Verdict::NonFactor => MarkerKind::Triangle,
                Verdict::SArtifact => MarkerKind::Dot,
            };
            Some(Marker {
                x: cand.ell as f64,
                y,
                kind,
            })
        })
        .collect()
}

fn run_plan(args: PlanArgs) -> Result<(), CliError> {
    let window = SpectralWindow::new(args.o_min, args.o_max)?;
    let (lo, hi) = match (args.target, args.range) {
        (Some(n), None) => (n, n),
        (None, Some(range)) => (range.lo, range.hi),
        _ => return Err(CliError::Domain("pass exactly one of --N or --N-range".into())),
    };
    let options = PlanOptions {
        s: args.s,
        x0_override: args.x0,
        x_max: args.x_max,
    };
    let plan = sequence_plan(lo, hi, &window, args.method, &options)?;
    let json = to_pretty_json(&plan)?;
    emit(args.out.as_deref(), &json)
}

fn run_factor(args: FactorArgs) -> Result<(), CliError> {
    let params = CurlicueParams::new(args.terms, args.order)?;
    let window = SpectralWindow::new(args.o_min, args.o_max)?;
    let mut cfg = SamplingConfig::new(args.samples_per_unit, true, args.mode)?;
    if let Some(threshold) = args.threshold {
        cfg = cfg.with_threshold(threshold);
    }

    let run = match args.x_max {
        None => factor_run(args.target, &window, args.method, args.s, &params, &cfg)?,
        Some(x_max) => {
            let remainder = match args.method {
                Method::Method1 => args.target >> args.target.trailing_zeros(),
                Method::Method2 => args.target,
            };
            if args.method == Method::Method1 && remainder < 9 {
                factor_run(args.target, &window, args.method, args.s, &params, &cfg)?
            } else {
                let options = PlanOptions {
                    s: args.s,
                    x0_override: None,
                    x_max: Some(x_max),
                };
                let plan = sequence_plan(remainder, remainder, &window, args.method, &options)?;
                factor_run_with_plan(args.target, &plan, &params, &cfg)?
            }
        }
    };

    let json = to_pretty_json(&run.report)?;
    emit(args.out.as_deref(), &json)?;
    if let Some(path) = args.plot.as_deref() {
        let panels = factor_panels(&run);
        write_plot(path, &panels, &csv::factor_run_csv(&run))?;
    }
    Ok(())
}

fn factor_panels(run: &FactorRun) -> Vec<Panel> {
    let s = run.report.s;
    let axis = if s > 1 { "xi_N_s" } else { "xi_N" };
    run.views
        .iter()
        .enumerate()
        .map(|(index, view)| {
            let markers = run
                .report
                .candidates
                .iter()
                .filter(|c| c.interferogram_index == index as i64)
                .filter_map(|c| {
                    let y = view.nearest_intensity(c.ell as f64)?;
                    let kind = match c.verdict {
                        Verdict::Factor => MarkerKind::Star,
                        Verdict::NonFactor => MarkerKind::Triangle,
                        Verdict::SArtifact => MarkerKind::Dot,
                    };
                    Some(Marker {
                        x: c.ell as f64,
                        y,
                        kind,
                    })
                })
                .collect();
            Panel {
                title: format!(
                    "N={}  interferogram {index}  x={}",
                    run.report.n,
                    fmt_f64(view.x())
                ),
                x_label: axis.into(),
                y_label: "intensity".into(),
                curve: view.samples().to_vec(),
                markers,
            }
        })
        .collect()
}

fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut text| {
            text.push('\n');
            text
        })
        .map_err(|err| CliError::Io(err.to_string()))
}

fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, content).map_err(CliError::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Write the SVG plus its sibling data CSV next to it.
fn write_plot(path: &Path, panels: &[Panel], data_csv: &str) -> Result<(), CliError> {
    let svg = plot::render(panels)
        .ok_or_else(|| CliError::Domain("plot data is empty, nothing to draw".into()))?;
    std::fs::write(path, svg)?;
    std::fs::write(path.with_extension("csv"), data_csv)?;
    Ok(())
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(message) | CliError::Io(message) => write!(f, "{message}"),
        }
    }
}
