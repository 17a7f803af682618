//! Command-line front end.
//!
//! Exit codes: 0 when every verdict passes, 2 when any fails, 64 for usage and
//! parse errors, 65 for domain and route errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};

use crate::decimal::scientific;
use crate::error::{Error, Result};
use crate::formulas::{parse_rational, table_entries, SeriesFamily};
use crate::specfun::PrecisionContext;
use crate::spectral::{coeffs, sample_wavefunction, samples_csv, CoeffRoute, WaveState};
use crate::verifier::{
    certify, identity24_check, render_results, render_table, verify_family, Format, SumResult, TableRow, Verdict,
    DEFAULT_TERMS, MIN_TERMS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DOMAIN: i32 = 65;

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 320;

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub precision_bits: u32,
    pub terms: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_BITS,
            terms: DEFAULT_TERMS,
            format: Format::Md,
            out: None,
        }
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::Parse(format!("--bits must be at least 64, got {}", self.precision_bits)));
        }
        if self.terms < MIN_TERMS {
            return Err(Error::Parse(format!("--terms must be at least {MIN_TERMS}, got {}", self.terms)));
        }
        Ok(())
    }

    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision_bits)
    }
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational("value", s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "wellsum", version, about = "Exact and certified Bessel and hypergeometric series sums")]
struct Args {
    /// Working precision in bits.
    #[arg(long, global = true, env = "WELLSUM_BITS", default_value_t = DEFAULT_BITS)]
    bits: u32,

    /// Number of series terms summed by brute force.
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS)]
    terms: usize,

    /// Report format: json, csv or md.
    #[arg(long, global = true, default_value = "md", value_parser = |s: &str| s.parse::<Format>())]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regenerate a table and certify every row numerically.
    Table {
        /// Table number, 1 to 7.
        id: u32,
        /// Also write the generated rows as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Certify one series, e.g. "odd-sq p=3 e=6", or "identity24".
    Verify { family: String },
    /// Expansion coefficients C_1 … C_n as CSV.
    Coeffs {
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg)]
        beta: Rational,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::All)]
        route: RouteArg,
    },
    /// The wave function on a uniform grid over [0, 1], as CSV.
    Sample {
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg)]
        beta: Rational,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Bessel,
    Hyper,
    Quad,
    All,
}

impl RouteArg {
    fn routes(self, s: &WaveState) -> Result<Vec<CoeffRoute>> {
        let one = |r: CoeffRoute| {
            if r.applies_to(s) {
                Ok(vec![r])
            } else {
                Err(Error::Route(format!("route {r} does not apply to state {s}")))
            }
        };
        match self {
            RouteArg::Bessel => one(CoeffRoute::BesselEqual),
            RouteArg::Hyper => one(CoeffRoute::Hypergeometric),
            RouteArg::Quad => one(CoeffRoute::Quadrature),
            RouteArg::All => Ok(CoeffRoute::ALL.into_iter().filter(|r| r.applies_to(s)).collect()),
        }
    }
}

/// A rendered report and the exit code it implies.
struct Report {
    text: String,
    code: i32,
}

fn exit_for(results: &[&SumResult]) -> i32 {
    if results.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

pub fn cmd_table(table: u32, emit: Option<&PathBuf>, cfg: &CliConfig) -> Result<(Vec<TableRow>, String)> {
    let ctx = cfg.context()?;
    let entries = table_entries(table)?;
    if let Some(path) = emit {
        let json = serde_json::to_string_pretty(&entries).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(path, json + "\n")?;
    }
    let mut rows = Vec::with_capacity(entries.len());
    for entry in entries {
        let result = certify(&entry.family, &entry.exact, cfg.terms, &ctx)?;
        rows.push(TableRow { entry, result });
    }
    let text = render_table(table, &rows, cfg.format, ctx.decimal_digits());
    Ok((rows, text))
}

pub fn cmd_verify(spec: &str, cfg: &CliConfig) -> Result<SumResult> {
    let ctx = cfg.context()?;
    if spec.trim() == "identity24" {
        return identity24_check(cfg.terms, &ctx);
    }
    let family: SeriesFamily = spec.parse()?;
    verify_family(&family, cfg.terms, &ctx)
}

fn coeffs_csv(s: &WaveState, n_max: usize, route: RouteArg, ctx: &PrecisionContext) -> Result<String> {
    let routes = route.routes(s)?;
    let columns: Vec<Vec<Float>> = routes.iter().map(|r| coeffs(s, n_max, *r, ctx)).collect::<Result<_>>()?;
    let digits = ctx.decimal_digits();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string()];
    if route == RouteArg::All {
        header.extend(routes.iter().map(|r| format!("c_n_{r}")));
    } else {
        header.push("c_n".into());
    }
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for i in 0..n_max {
        let mut rec = vec![(i + 1).to_string()];
        rec.extend(columns.iter().map(|c| scientific(&c[i], digits)));
        w.write_record(&rec).map_err(io)?;
    }
    let mut text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
        .map_err(|e| Error::Io(e.to_string()))?;
    if route == RouteArg::All {
        let prec = ctx.working_bits();
        let mut worst = Float::new(prec);
        for a in 0..columns.len() {
            for b in a + 1..columns.len() {
                for (x, y) in columns[a].iter().zip(&columns[b]) {
                    let d = Float::with_val(prec, x - y).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        let names: Vec<String> = routes.iter().map(|r| r.to_string()).collect();
        text.push_str(&format!("# max discrepancy ({}): {}\n", names.join(", "), scientific(&worst, 6)));
    }
    Ok(text)
}

pub fn cmd_coeffs(alpha: Rational, beta: Rational, n_max: usize, route: &str, cfg: &CliConfig) -> Result<String> {
    let route = RouteArg::from_str(route, true).map_err(Error::Parse)?;
    let s = WaveState::new(alpha, beta)?;
    coeffs_csv(&s, n_max, route, &cfg.context()?)
}

pub fn cmd_sample(alpha: Rational, beta: Rational, points: usize, cfg: &CliConfig) -> Result<String> {
    let ctx = cfg.context()?;
    let s = WaveState::new(alpha, beta)?;
    let samples = sample_wavefunction(&s, points, &ctx)?;
    Ok(samples_csv(&samples, ctx.decimal_digits()))
}

fn dispatch(command: Command, cfg: &CliConfig) -> Result<Report> {
    match command {
        Command::Table { id, emit } => {
            let (rows, text) = cmd_table(id, emit.as_ref(), cfg)?;
            let results: Vec<&SumResult> = rows.iter().map(|r| &r.result).collect();
            Ok(Report { code: exit_for(&results), text })
        }
        Command::Verify { family } => {
            let r = cmd_verify(&family, cfg)?;
            let text = render_results(std::slice::from_ref(&r), cfg.format, cfg.context()?.decimal_digits());
            Ok(Report { code: exit_for(&[&r]), text })
        }
        Command::Coeffs { alpha, beta, n_max, route } => {
            let s = WaveState::new(alpha, beta)?;
            let text = coeffs_csv(&s, n_max, route, &cfg.context()?)?;
            Ok(Report { text, code: EXIT_OK })
        }
        Command::Sample { alpha, beta, points } => Ok(Report {
            text: cmd_sample(alpha, beta, points, cfg)?,
            code: EXIT_OK,
        }),
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = CliConfig {
        precision_bits: args.bits,
        terms: args.terms,
        format: args.format,
        out: args.out,
    };
    let outcome = cfg.validate().and_then(|_| dispatch(args.command, &cfg)).and_then(|report| {
        match &cfg.out {
            Some(path) => std::fs::write(path, &report.text)?,
            None => stdout.write_all(report.text.as_bytes())?,
        }
        Ok(report.code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
