//! Command-line front end. `run` returns the process exit code:
//! 0 ok, 1 verification failure, 2 input error, 3 numerics failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::capacity::{gaussian_capacity, smin_gaussian};
use crate::channel::FermionicProductChannel;
use crate::error::Error;
use crate::minimizer::{minimize, MinimizerConfig};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICS: u8 = 3;

/// Restarts whose best entropy is within this of the overall best count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-8;

pub const CSV_HEADER: [&str; 8] = [
    "b",
    "family",
    "n",
    "smin_found",
    "smin_gaussian",
    "deviation",
    "restarts_agreeing",
    "wall_time_ms",
];

#[derive(Parser, Debug)]
#[command(
    name = "fermicap",
    version,
    about = "Capacities and minimum output entropies of fermionic product channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form Gaussian capacity and minimum output entropies.
    Capacity {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the iterative minimizer and compare with the Gaussian minimum.
    Smin {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        minimizer: MinimizerArgs,
        #[arg(long)]
        json: bool,
    },
    /// Sweep a channel family over a grid of b and write CSV.
    Sweep(SweepArgs),
    /// Run a property suite.
    Verify {
        #[arg(value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Plus,
    Times,
    Explicit,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Plus => "plus",
            Family::Times => "times",
            Family::Explicit => "explicit",
        }
    }

    /// Channel of this family at grid value b; `explicit` has no grid form.
    pub fn channel(self, n: usize, b: f64) -> crate::Result<FermionicProductChannel> {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidConfig(format!(
                "field `b`: grid value {b} outside [0, 1]"
            )));
        }
        match self {
            Family::Plus => FermionicProductChannel::plus(n, b),
            Family::Times => FermionicProductChannel::times(n, b),
            Family::Explicit => Err(Error::InvalidConfig(
                "field `family`: explicit channels need a coefficient list".into(),
            )),
        }
    }
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Channel JSON file {"n": int, "b": [2n floats]}.
    #[arg(long, conflicts_with_all = ["family", "b"])]
    channel: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    b: Option<f64>,
}

impl ChannelArgs {
    fn resolve(&self) -> crate::Result<FermionicProductChannel> {
        if let Some(path) = &self.channel {
            return FermionicProductChannel::from_json(&read_file(path)?);
        }
        let family = self.family.unwrap_or(Family::Plus);
        let n = self
            .n
            .ok_or_else(|| Error::InvalidConfig("field `n`: required without --channel".into()))?;
        let b = self
            .b
            .ok_or_else(|| Error::InvalidConfig("field `b`: required without --channel".into()))?;
        family.channel(n, b)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct MinimizerArgs {
    #[arg(long, default_value_t = 64)]
    iterations: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MinimizerArgs {
    fn config(self) -> MinimizerConfig {
        MinimizerConfig {
            iterations: self.iterations,
            restarts: self.restarts,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Sweep spec JSON; other sweep flags are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "plus")]
    family: Family,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Comma-separated grid, e.g. 0.1,0.2,0.3.
    #[arg(long, value_delimiter = ',')]
    b_grid: Option<Vec<f64>>,
    /// Extend the default grid to 0.99.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    minimizer: MinimizerArgs,
    /// Output CSV path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizerSpec {
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for MinimizerSpec {
    fn default() -> Self {
        let d = MinimizerConfig::default();
        Self {
            iterations: d.iterations,
            restarts: d.restarts,
            seed: d.seed,
        }
    }
}

/// A sweep over one channel family. For `explicit`, `points` lists the full
/// coefficient vector of every grid point and `b_grid` is unused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub b_grid: Vec<f64>,
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub minimizer: MinimizerSpec,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

/// 0.05, 0.10, …, 0.90; with `full`, continues in 0.05 steps and ends at 0.99.
pub fn default_grid(full: bool) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=18).map(|k| k as f64 / 20.0).collect();
    if full {
        grid.push(0.95);
        grid.push(0.99);
    }
    grid
}

/// printf-style `%.12g`.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{x:.*}", (11 - exp) as usize))
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Numerics(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerics(e.to_string())
        }
    }
}

fn read_file(path: &Path) -> crate::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))
}

fn io_error(e: io::Error) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Numerics(msg)) => {
            eprintln!("numerics failure: {msg}");
            EXIT_NUMERICS
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8, CliError> {
    match command {
        Command::Capacity { channel, json } => cmd_capacity(&channel.resolve()?, json, out),
        Command::Smin {
            channel,
            minimizer,
            json,
        } => cmd_smin(&channel.resolve()?, minimizer.config(), json, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Verify { suite, seed, json } => cmd_verify(suite, seed, json, out),
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_g12(*v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_capacity(
    ch: &FermionicProductChannel,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let report = gaussian_capacity(ch.coefficients())?;
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )
        .map_err(io_error)?;
    } else {
        writeln!(out, "n              {}", report.n).map_err(io_error)?;
        writeln!(out, "b_sorted       {}", join(&report.b_sorted)).map_err(io_error)?;
        writeln!(out, "smin_even      {}", format_g12(report.smin_even)).map_err(io_error)?;
        writeln!(out, "smin_gaussian  {}", format_g12(report.smin_gaussian)).map_err(io_error)?;
        writeln!(out, "c1_gaussian    {}", format_g12(report.c1_gaussian)).map_err(io_error)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SminSummary<'a> {
    n: usize,
    b: &'a [f64],
    best_entropy: f64,
    smin_gaussian: f64,
    deviation: f64,
    restarts: usize,
    restarts_agreeing: usize,
    dispersion: f64,
    floor_active: bool,
    gaussian_witness: Option<&'a crate::gaussian::GaussianWitness>,
}

fn cmd_smin(
    ch: &FermionicProductChannel,
    cfg: MinimizerConfig,
    json: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let run = minimize(ch, &cfg)?;
    let target = smin_gaussian(ch.coefficients())?;
    let summary = SminSummary {
        n: ch.n(),
        b: ch.coefficients(),
        best_entropy: run.best_entropy,
        smin_gaussian: target,
        deviation: run.best_entropy - target,
        restarts: run.restarts.len(),
        restarts_agreeing: run.restarts_agreeing(AGREEMENT_TOL),
        dispersion: run.dispersion(),
        floor_active: run.floor_active(),
        gaussian_witness: run.gaussian_witness.as_ref(),
    };
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&summary).expect("serializable")
        )
        .map_err(io_error)?;
        return Ok(EXIT_OK);
    }
    let lines = [
        format!("best_entropy       {}", format_g12(summary.best_entropy)),
        format!("smin_gaussian      {}", format_g12(summary.smin_gaussian)),
        format!("deviation          {}", format_g12(summary.deviation)),
        format!(
            "restarts_agreeing  {}/{}",
            summary.restarts_agreeing, summary.restarts
        ),
        format!("dispersion         {}", format_g12(summary.dispersion)),
        format!("log_floor_active   {}", summary.floor_active),
    ];
    for line in lines {
        writeln!(out, "{line}").map_err(io_error)?;
    }
    match summary.gaussian_witness {
        Some(w) => writeln!(
            out,
            "gaussian_witness   {} (singular values {}{})",
            if w.gaussian {
                "pure Gaussian pattern"
            } else {
                "not Gaussian"
            },
            join(&w.singular_values),
            if w.embedded { ", embedded" } else { "" }
        ),
        None => writeln!(out, "gaussian_witness   unavailable"),
    }
    .map_err(io_error)?;
    Ok(EXIT_OK)
}

fn sweep_spec(args: SweepArgs) -> Result<SweepSpec, CliError> {
    if let Some(path) = &args.spec {
        let spec: SweepSpec = serde_json::from_str(&read_file(path)?)
            .map_err(|e| CliError::Input(format!("sweep spec: {e}")))?;
        return Ok(SweepSpec {
            output_path: args.out.or(spec.output_path.clone()),
            ..spec
        });
    }
    Ok(SweepSpec {
        family: args.family,
        n: args.n,
        b_grid: args.b_grid.unwrap_or_else(|| default_grid(args.full)),
        points: Vec::new(),
        minimizer: MinimizerSpec {
            iterations: args.minimizer.iterations,
            restarts: args.minimizer.restarts,
            seed: args.minimizer.seed,
        },
        output_path: args.out,
    })
}

/// One (grid label, channel) per sweep point. The label is b, or the point
/// index for explicit sweeps.
fn sweep_points(spec: &SweepSpec) -> crate::Result<Vec<(f64, FermionicProductChannel)>> {
    if spec.family == Family::Explicit {
        if spec.points.is_empty() {
            return Err(Error::InvalidConfig(
                "field `points`: explicit sweeps need at least one point".into(),
            ));
        }
        return spec
            .points
            .iter()
            .enumerate()
            .map(|(i, b)| Ok((i as f64, FermionicProductChannel::new(spec.n, b.clone())?)))
            .collect();
    }
    if spec.b_grid.is_empty() {
        return Err(Error::InvalidConfig("field `b_grid`: empty grid".into()));
    }
    spec.b_grid
        .iter()
        .map(|&b| Ok((b, spec.family.channel(spec.n, b)?)))
        .collect()
}

/// Seed for grid point `index`, kept apart from the per-restart offsets.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64) << 32)
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let spec = sweep_spec(args)?;
    let points = sweep_points(&spec)?;
    let base = MinimizerConfig {
        iterations: spec.minimizer.iterations,
        restarts: spec.minimizer.restarts,
        seed: spec.minimizer.seed,
        ..Default::default()
    };
    base.validate()?;
    let sink: Box<dyn Write + '_> = match &spec.output_path {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?,
        ),
        None => Box::new(out),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let csv_error = |e: csv::Error| CliError::Input(format!("write failed: {e}"));
    writer.write_record(CSV_HEADER).map_err(csv_error)?;
    writer.flush().map_err(io_error)?;
    for (index, (label, ch)) in points.iter().enumerate() {
        let start = Instant::now();
        let cfg = MinimizerConfig {
            seed: point_seed(base.seed, index),
            ..base
        };
        let run = minimize(ch, &cfg)?;
        let target = smin_gaussian(ch.coefficients())?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        writer
            .write_record([
                format_g12(*label),
                spec.family.name().to_string(),
                spec.n.to_string(),
                format_g12(run.best_entropy),
                format_g12(target),
                format_g12(run.best_entropy - target),
                run.restarts_agreeing(AGREEMENT_TOL).to_string(),
                format_g12(elapsed),
            ])
            .map_err(csv_error)?;
        writer.flush().map_err(io_error)?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(suite: Suite, seed: u64, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = run_suite(suite, seed)?;
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        )
        .map_err(io_error)?;
    } else {
        for p in &report.properties {
            writeln!(out, "{p}").map_err(io_error)?;
        }
        let failed = report.properties.iter().filter(|p| !p.passed()).count();
        writeln!(
            out,
            "{} properties, {failed} failed (seed {seed})",
            report.properties.len()
        )
        .map_err(io_error)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
