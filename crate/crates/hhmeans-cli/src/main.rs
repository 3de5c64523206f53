//! `hhmeans`: compute weighted means, verify inequality chains over seeded
//! random samples, scan grids, and aggregate reports.
//!
//! Exit codes: `0` all checks pass, `1` a mathematical violation was found,
//! `2` configuration or usage error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// A value either fixed (`1.5`) or swept (`lo:hi:count`).
#[derive(Debug, Clone)]
pub enum GridSpec {
    Fixed(f64),
    Sweep { lo: f64, hi: f64, count: usize },
}

impl GridSpec {
    fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => {
                let v: f64 = v.parse().map_err(|_| format!("`{s}` is not a number"))?;
                Ok(GridSpec::Fixed(v))
            }
            [lo, hi, count] => {
                let lo: f64 = lo.parse().map_err(|_| format!("bad sweep start in `{s}`"))?;
                let hi: f64 = hi.parse().map_err(|_| format!("bad sweep end in `{s}`"))?;
                let count: usize = count.parse().map_err(|_| format!("bad sweep count in `{s}`"))?;
                Ok(GridSpec::Sweep { lo, hi, count })
            }
            _ => Err(format!("`{s}` is neither a value nor lo:hi:count")),
        }
    }

    /// Materializes the grid: log-spaced when `log` is set (positive sweeps),
    /// linear otherwise. An empty sweep is a configuration error.
    pub fn values(&self, log: bool) -> Result<Vec<f64>, String> {
        match *self {
            GridSpec::Fixed(v) => Ok(vec![v]),
            GridSpec::Sweep { lo, hi, count } => {
                if count == 0 {
                    return Err("empty grid: sweep count must be at least 1".into());
                }
                if !(hi > lo) {
                    return Err(format!("sweep needs lo < hi, got {lo}:{hi}"));
                }
                if count == 1 {
                    return Ok(vec![lo]);
                }
                if log && !(lo > 0.0) {
                    return Err(format!("log-spaced sweep needs positive bounds, got {lo}"));
                }
                let (a, b) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
                let step = (b - a) / (count - 1) as f64;
                Ok((0..count)
                    .map(|i| {
                        let v = a + step * i as f64;
                        if log {
                            v.exp()
                        } else {
                            v
                        }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hhmeans", version, about = "Weighted-mean inequality verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every mean and constant at one (a, b, ν) point.
    Mean(commands::mean::MeanArgs),
    /// Run a seeded randomized suite over one chain or all of them.
    Verify(commands::verify::VerifyArgs),
    /// Evaluate a chain over a parameter grid and emit rows.
    Scan(commands::scan::ScanArgs),
    /// Aggregate saved suite summaries into a pass/fail table.
    Report(commands::report::ReportArgs),
}

/// Shared sampling/tolerance knobs.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// PRNG seed (the HHMEANS_SEED environment variable overrides this).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Relative slack tolerance for violation flagging.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub a_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub a_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub b_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub b_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub nu_max: f64,
    /// Convex function for the functional chains (grammar: +,-,*,/,^ over
    /// numbers, x, exp, log, sqrt, abs).
    #[arg(long = "fn")]
    pub func: Option<String>,
}

impl CommonArgs {
    /// Seed after applying the HHMEANS_SEED override.
    pub fn effective_seed(&self) -> Result<u64, String> {
        match std::env::var("HHMEANS_SEED") {
            Ok(s) => s
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("HHMEANS_SEED=`{s}` is not a 64-bit unsigned integer")),
            Err(_) => Ok(self.seed),
        }
    }

    pub fn parsed_fn(&self) -> Result<Option<hhmeans::ConvexFn>, String> {
        match &self.func {
            None => Ok(None),
            Some(src) => {
                let ast = hhmeans::fnspec::parse(src).map_err(|e| e.to_string())?;
                Ok(Some(hhmeans::ConvexFn::from_ast(ast, None)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mean(args) => commands::mean::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Scan(args) => commands::scan::run(args),
        Command::Report(args) => commands::report::run(args),
    };
    match result {
        Ok(violations) if violations == 0 => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
