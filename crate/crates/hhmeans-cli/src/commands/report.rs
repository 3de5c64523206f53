//! `hhmeans report`: aggregate saved suite summaries into one table.

use clap::Args;

use crate::commands::verify::SuiteSummary;
use crate::output::fmt_f64;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// One or more JSON files written by `verify` (single summary or array).
    #[arg(required = true)]
    pub inputs: Vec<String>,
}

pub fn run(args: ReportArgs) -> Result<u64, String> {
    let mut summaries: Vec<SuiteSummary> = Vec::new();
    for path in &args.inputs {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        // accept both one summary and an array of them
        if let Ok(list) = serde_json::from_str::<Vec<SuiteSummary>>(&text) {
            summaries.extend(list);
        } else {
            let one: SuiteSummary = serde_json::from_str(&text)
                .map_err(|e| format!("{path} is not a suite summary: {e}"))?;
            summaries.push(one);
        }
    }
    if summaries.is_empty() {
        return Err("no summaries found in the given files".into());
    }

    let mut violations = 0u64;
    println!("{:<18} {:>9} {:>8} {:>11} {:>12}  status", "chain", "samples", "skipped", "violations", "worst_score");
    for s in &summaries {
        violations += s.violations;
        let status = if s.violations == 0 { "pass" } else { "FAIL" };
        let score = s.worst_score.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<18} {:>9} {:>8} {:>11} {:>12}  {status}",
            s.chain, s.samples, s.skipped, s.violations, score
        );
    }
    println!(
        "{} suites, {} violation(s): {}",
        summaries.len(),
        violations,
        if violations == 0 { "all pass" } else { "FAIL" }
    );
    Ok(violations)
}
