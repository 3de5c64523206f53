//! `hhmeans verify`: seeded randomized suites over the chain registry.

use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};

use hhmeans::chains::{run_suite, ChainId, ChainReport, SuiteConfig};
use hhmeans::QuadratureSpec;

use crate::output::{csv_field, emit, fmt_f64, Format};
use crate::CommonArgs;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Chain name or `all`. Registered: cor12, thm28, cor29, thm23, prop26,
    /// thm210, cor213, cor214, cor215, thm217, cor218, cor219-log,
    /// cor219-identric, rem222-kant, rem222-identric, young-pq.
    #[arg(long)]
    pub chain: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Sequence depth for the cor29 chain.
    #[arg(long, default_value_t = 30)]
    pub m_max: u32,
    #[arg(long, default_value_t = 1.1)]
    pub p_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub p_max: f64,
    /// Override the per-chain sample cap for quadrature-heavy chains.
    #[arg(long)]
    pub quad_cap: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Serialized per-chain suite result. Wall time is reported on stderr only,
/// so identical runs emit byte-identical files.
#[derive(Debug, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub chain: String,
    pub samples: u64,
    pub skipped: u64,
    pub violations: u64,
    pub worst_score: Option<f64>,
    pub worst: Option<ChainReport>,
}

pub fn run(args: VerifyArgs) -> Result<u64, String> {
    let chains: Vec<ChainId> = if args.chain == "all" {
        ChainId::ALL.to_vec()
    } else {
        vec![ChainId::parse(&args.chain)
            .ok_or_else(|| format!("unknown chain `{}` (try `all`)", args.chain))?]
    };

    let cfg = SuiteConfig {
        seed: args.common.effective_seed()?,
        samples: args.samples,
        tol_rel: args.common.tol,
        a_range: (args.common.a_min, args.common.a_max),
        b_range: (args.common.b_min, args.common.b_max),
        nu_range: (args.common.nu_min, args.common.nu_max),
        p_range: (args.p_min, args.p_max),
        m_max: args.m_max,
        func: args.common.parsed_fn()?,
        quad: QuadratureSpec::default(),
        policy: Default::default(),
        quad_cap: args.quad_cap,
    };

    let mut summaries = Vec::with_capacity(chains.len());
    let mut total_violations = 0u64;
    for chain in &chains {
        let start = Instant::now();
        let outcome = run_suite(*chain, &cfg).map_err(|e| e.to_string())?;
        let wall = start.elapsed().as_secs_f64();
        total_violations += outcome.violations;
        eprintln!(
            "{:<16} samples={:<7} skipped={:<3} violations={:<3} worst_score={:<12.4e} ({wall:.2}s)",
            outcome.chain_name, outcome.samples, outcome.skipped, outcome.violations,
            outcome.worst_score,
        );
        summaries.push(SuiteSummary {
            chain: outcome.chain_name,
            samples: outcome.samples,
            skipped: outcome.skipped,
            violations: outcome.violations,
            worst_score: outcome.worst.as_ref().map(|_| outcome.worst_score),
            worst: outcome.worst,
        });
    }

    let content = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&summaries).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        Format::Csv => summaries_csv(&summaries),
    };
    emit(args.output.as_deref(), &content)?;
    Ok(total_violations)
}

/// One row per chain. Header:
/// `chain,samples,skipped,violations,worst_score,worst_min_slack,worst_scale,worst_tol,worst_edge,worst_inputs`
pub fn summaries_csv(summaries: &[SuiteSummary]) -> String {
    let mut s = String::from(
        "chain,samples,skipped,violations,worst_score,worst_min_slack,worst_scale,worst_tol,worst_edge,worst_inputs\n",
    );
    for sm in summaries {
        let (score, slack, scale, tol, edge, inputs) = match (&sm.worst_score, &sm.worst) {
            (Some(score), Some(w)) => (
                fmt_f64(*score),
                fmt_f64(w.min_slack),
                fmt_f64(w.scale),
                fmt_f64(w.tol),
                format!("{}->{}", w.min_slack_edge.0, w.min_slack_edge.1),
                w.inputs
                    .iter()
                    .map(|(k, v)| format!("{k}={}", fmt_f64(*v)))
                    .collect::<Vec<_>>()
                    .join(";"),
            ),
            _ => Default::default(),
        };
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&sm.chain),
            sm.samples,
            sm.skipped,
            sm.violations,
            score,
            slack,
            scale,
            tol,
            csv_field(&edge),
            csv_field(&inputs),
        ));
    }
    s
}
