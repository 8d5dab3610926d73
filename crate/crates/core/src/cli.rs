//! Command-line front-end.
//!
//! Every verb parses and validates its whole flag set before touching any
//! data. Output files are written through a temporary file in the target
//! directory and renamed into place, so a failed run leaves no partial file.
//!
//! Exit status: `0` success, `1` a verification ran but did not pass,
//! `2` invalid input, `3` numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{simulate_oscillator, OscillatorParams};
use crate::ops::{OpId, Operator};
use crate::positive::CompositionStyle;
use crate::signal::{atomic_write, format_g17, read_csv, write_csv, write_rows, write_table};
use crate::spectral::dft_forward;
use crate::special::{q_coefficient, Order};
use crate::verify::{convergence_study, gaussian_test_signal, verify_ft_relation, ConvergenceConfig};

/// Largest number of significant digits accepted in an order argument.
const MAX_ORDER_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "fracdiff", version, about = "Classical and positive fractional derivatives of sampled signals")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Apply a fractional operator to a `t,u` CSV signal
    Deriv(DerivArgs),
    /// Write the Fourier transform of a `t,u` CSV signal
    Spectrum(SpectrumArgs),
    /// Check operators against their Fourier symbols or closed forms
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run a model simulation
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Tabulate coefficients
    #[command(subcommand)]
    Table(TableCmd),
}

#[derive(Debug, Args)]
struct DerivArgs {
    #[arg(long, value_parser = parse_op)]
    op: OpId,
    #[arg(long, value_parser = parse_order)]
    order: f64,
    /// Compose with the integer derivative of this order
    #[arg(long)]
    compose_l: Option<u32>,
    #[arg(long, value_enum)]
    style: Option<StyleArg>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Compare the transform of an operator's output with its symbol
    Ft(FtArgs),
    /// Measure the observed order under dyadic grid refinement
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TestSignal {
    Gaussian,
}

#[derive(Debug, Args)]
struct FtArgs {
    #[arg(long, value_parser = parse_op)]
    op: OpId,
    #[arg(long, value_parser = parse_order)]
    order: f64,
    /// Integer derivative composed with a positive operator
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, value_enum, default_value = "gaussian")]
    signal: TestSignal,
    #[arg(long, default_value_t = 2048)]
    n: usize,
    #[arg(long, default_value_t = 40.0)]
    t_end: f64,
    /// Bins below this fraction of the peak input magnitude are ignored
    #[arg(long, default_value_t = 1e-6)]
    band_threshold: f64,
    /// Largest overall relative error that counts as a pass
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long, value_parser = parse_op)]
    op: OpId,
    #[arg(long, value_parser = parse_order)]
    order: f64,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Cells on [0, 1] at the coarsest level
    #[arg(long, default_value_t = 64)]
    base_n: usize,
    /// Exponent p of the t^p test signal [default: two above the inner
    /// integer derivative, at least 3]
    #[arg(long)]
    power: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    min_order: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SimulateCmd {
    /// Fractionally damped oscillator u'' + γ D^{1+η} u + ω₀²u + βu³ = 0
    Oscillator(OscillatorArgs),
}

#[derive(Debug, Args)]
struct OscillatorArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long, value_parser = parse_order)]
    eta: f64,
    #[arg(long)]
    omega0: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    u0: f64,
    #[arg(long, allow_negative_numbers = true)]
    v0: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    t_end: f64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Subcommand)]
enum TableCmd {
    /// Normalization coefficient q(η) of the positive derivative
    Q(TableQArgs),
}

#[derive(Debug, Args)]
struct TableQArgs {
    /// Order range `start:step:stop`, inclusive
    #[arg(long)]
    orders: String,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    CaputoFirst,
    RlOuter,
}

impl From<StyleArg> for CompositionStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::CaputoFirst => CompositionStyle::CaputoFirst,
            StyleArg::RlOuter => CompositionStyle::RlOuter,
        }
    }
}

fn parse_op(s: &str) -> std::result::Result<OpId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A decimal number with at most twelve significant digits.
pub fn parse_order(s: &str) -> std::result::Result<f64, String> {
    let mantissa = s.split(['e', 'E']).next().unwrap_or_default();
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let significant = digits.trim_start_matches('0');
    let significant = if mantissa.contains('.') { significant } else { significant.trim_end_matches('0') };
    if significant.len() > MAX_ORDER_DIGITS {
        return Err(format!("`{s}` has more than {MAX_ORDER_DIGITS} significant digits"));
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a decimal number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Expand `start:step:stop` into orders rounded to twelve significant digits.
pub fn parse_order_range(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidParams(format!("--orders `{s}`: {why}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [start, step, stop] = parts[..] else {
        return Err(bad("expected start:step:stop"));
    };
    let [start, step, stop] = [start, step, stop].map(|p| parse_order(p.trim()));
    let (start, step, stop) = (start.map_err(|e| bad(&e))?, step.map_err(|e| bad(&e))?, stop.map_err(|e| bad(&e))?);
    if !(step > 0.0) {
        return Err(bad("step must be positive"));
    }
    if stop < start {
        return Err(bad("stop is below start"));
    }
    let count = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(bad("too many orders"));
    }
    Ok((0..count)
        .map(|i| round_significant(start + i as f64 * step, MAX_ORDER_DIGITS))
        .collect())
}

fn round_significant(x: f64, digits: usize) -> f64 {
    format!("{:.*e}", digits - 1, x).parse().expect("formatted float")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    atomic_write(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    })
}

enum Outcome {
    Done,
    CheckFailed,
}

fn deriv(a: DerivArgs) -> Result<Outcome> {
    let op = Operator::new(a.op, a.order, a.compose_l, a.style.map(Into::into))?;
    let u = read_csv(&a.input)?;
    write_csv(&a.output, &op.apply(&u)?)?;
    Ok(Outcome::Done)
}

fn spectrum(a: SpectrumArgs) -> Result<Outcome> {
    let s = dft_forward(&read_csv(&a.input)?);
    let rows = s
        .omega()
        .iter()
        .zip(s.amps())
        .map(|(&w, z)| vec![w, z.re, z.im, z.norm()]);
    write_table(&a.output, &["omega", "re", "im", "abs"], rows)?;
    Ok(Outcome::Done)
}

fn verify_ft(a: FtArgs) -> Result<Outcome> {
    let op = Operator::new(a.op, a.order, a.l, None)?;
    if a.n < 16 {
        return Err(Error::InvalidParams(format!("--n {} is too small", a.n)));
    }
    if !(a.band_threshold >= 0.0 && a.band_threshold < 1.0) {
        return Err(Error::InvalidParams("--band-threshold must lie in [0, 1)".into()));
    }
    if !(a.tolerance > 0.0) {
        return Err(Error::InvalidParams("--tolerance must be positive".into()));
    }
    let u = match a.signal {
        TestSignal::Gaussian => gaussian_test_signal(a.n, a.t_end, a.t_end / 2.0, a.t_end / 20.0)?,
    };
    let report = verify_ft_relation(&op, &u, a.band_threshold, a.tolerance)?;
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    println!(
        "{} order {}: overall relative error {} (tolerance {}) {}",
        report.op,
        report.order,
        format_g17(report.overall_rel_error),
        report.tolerance,
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(if report.pass { Outcome::Done } else { Outcome::CheckFailed })
}

fn verify_convergence(a: ConvergenceArgs) -> Result<Outcome> {
    let op = Operator::new(a.op, a.order, None, None)?;
    let cfg = ConvergenceConfig {
        levels: a.levels,
        base_cells: a.base_n,
        power: a.power,
        min_order: a.min_order,
    };
    let report = convergence_study(&op, &cfg)?;
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    for (level, observed) in report.levels.iter().zip(std::iter::once(None).chain(report.observed_orders.iter().map(Some))) {
        let observed = observed.map_or_else(|| "-".to_string(), |o| format_g17(*o));
        println!("n={} dt={} max_error={} order={}", level.n, format_g17(level.dt), format_g17(level.max_error), observed);
    }
    println!(
        "{} order {}: minimum observed order {} (required {}) {}",
        report.op,
        report.order,
        format_g17(report.min_observed_order),
        report.min_order,
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(if report.pass { Outcome::Done } else { Outcome::CheckFailed })
}

fn simulate(a: OscillatorArgs) -> Result<Outcome> {
    let p = OscillatorParams {
        gamma: a.gamma,
        eta: a.eta,
        omega0: a.omega0,
        beta: a.beta,
        u0: a.u0,
        v0: a.v0,
        dt: a.dt,
        t_end: a.t_end,
    };
    let tr = simulate_oscillator(&p)?;
    let rows = (0..tr.grid.n()).map(|i| vec![tr.grid.t(i), tr.u[i], tr.v[i], tr.e[i]]);
    write_table(&a.output, &["t", "u", "v", "E"], rows)?;
    Ok(Outcome::Done)
}

fn table_q(a: TableQArgs) -> Result<Outcome> {
    let rows = parse_order_range(&a.orders)?
        .into_iter()
        .map(|eta| Ok(vec![eta, q_coefficient(Order::new(eta)?)?]))
        .collect::<Result<Vec<_>>>()?;
    let header = ["eta", "q"];
    match &a.output {
        Some(path) => write_table(path, &header, rows)?,
        None => {
            write_rows(std::io::stdout().lock(), &header, rows)?;
        }
    }
    Ok(Outcome::Done)
}

/// Parse `argv` (including the program name) and execute; returns the
/// process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests land here too
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.verb {
        Verb::Deriv(a) => deriv(a),
        Verb::Spectrum(a) => spectrum(a),
        Verb::Verify(VerifyCmd::Ft(a)) => verify_ft(a),
        Verb::Verify(VerifyCmd::Convergence(a)) => verify_convergence(a),
        Verb::Simulate(SimulateCmd::Oscillator(a)) => simulate(a),
        Verb::Table(TableCmd::Q(a)) => table_q(a),
    };
    match outcome {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::CheckFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
