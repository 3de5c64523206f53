//! `hhmeans scan`: evaluate one chain over a parameter grid.
//!
//! Grid axes: `--a` and `--b` accept a fixed value or a log-spaced sweep
//! `lo:hi:count`; `--nu` accepts a fixed value or a linear sweep. Rows are
//! emitted in a-major, then b, then ν order. One-variable chains (cor29,
//! thm23, prop26) read `t` from the a-axis and require `--b 1`. The
//! pair-functional chains run with their default function map the a/b axes
//! through `ln` (matching `verify`); with `--fn` the axes are used directly.
//!
//! CSV header (fixed):
//! `chain,subchain,a,b,nu,p,min_slack,violated,term_1..term_K,slack_1..slack_{K-1}`
//! where `K` is the widest sub-chain arity; missing cells stay empty. JSON
//! emits an array of flat objects with the same keys (missing cells null).

use clap::Args;
use serde_json::{json, Map, Value};

use hhmeans::chains::{ChainContext, ChainId, ChainReport, SampleError, SamplePoint, SuiteConfig};

use crate::output::{csv_field, emit, fmt_f64, Format};
use crate::{CommonArgs, GridSpec};

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub chain: String,
    /// Fixed value or sweep `lo:hi:count` (log-spaced).
    #[arg(long, value_parser = GridSpec::parse, default_value = "1:1000:10")]
    pub a: GridSpec,
    /// Fixed value or sweep `lo:hi:count` (log-spaced).
    #[arg(long, value_parser = GridSpec::parse, default_value = "1")]
    pub b: GridSpec,
    /// Fixed value or sweep `lo:hi:count` (linear).
    #[arg(long, value_parser = GridSpec::parse, default_value = "0.5")]
    pub nu: GridSpec,
    /// Young exponent for the p,q chain.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: ScanArgs) -> Result<u64, String> {
    let chain = ChainId::parse(&args.chain)
        .ok_or_else(|| format!("unknown chain `{}`", args.chain))?;

    let cfg = SuiteConfig {
        seed: args.common.effective_seed()?,
        tol_rel: args.common.tol,
        a_range: (args.common.a_min, args.common.a_max),
        b_range: (args.common.b_min, args.common.b_max),
        nu_range: (args.common.nu_min, args.common.nu_max),
        func: args.common.parsed_fn()?,
        ..Default::default()
    };
    let ctx = ChainContext::new(chain, &cfg).map_err(|e| e.to_string())?;

    let a_values = args.a.values(true)?;
    let b_values = args.b.values(true)?;
    let nu_values = args.nu.values(false)?;

    let mut rows: Vec<(SamplePoint, ChainReport)> = Vec::new();
    let mut violations = 0u64;
    for &a in &a_values {
        for &b in &b_values {
            for &nu in &nu_values {
                let (pa, pb) = if ctx.maps_pair_through_ln() {
                    if !(a > 0.0 && b > 0.0) {
                        return Err(format!("log-mapped axes need positive a, b; got ({a}, {b})"));
                    }
                    (a.ln(), b.ln())
                } else {
                    (a, b)
                };
                let point = SamplePoint { a: pa, b: pb, nu, p: args.p };
                match ctx.eval_at(point) {
                    Ok(reports) => {
                        for r in reports {
                            if r.violated {
                                violations += 1;
                            }
                            rows.push((point, r));
                        }
                    }
                    Err(SampleError::Degenerate(msg)) => {
                        return Err(format!(
                            "grid point (a={a}, b={b}, nu={nu}) is degenerate for {}: {msg}",
                            chain.name()
                        ))
                    }
                    Err(SampleError::Config(msg)) => return Err(msg),
                }
            }
        }
    }
    if rows.is_empty() {
        return Err("empty grid: no rows produced".into());
    }

    let arity = rows.iter().map(|(_, r)| r.terms.len()).max().unwrap_or(2);
    let content = match args.format {
        Format::Csv => csv_rows(&rows, arity),
        Format::Json => {
            let objs: Vec<Value> = rows.iter().map(|(pt, r)| row_json(pt, r, arity)).collect();
            let mut s = serde_json::to_string_pretty(&objs).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    emit(args.output.as_deref(), &content)?;
    Ok(violations)
}

fn csv_rows(rows: &[(SamplePoint, ChainReport)], arity: usize) -> String {
    let mut s = String::from("chain,subchain,a,b,nu,p,min_slack,violated");
    for i in 1..=arity {
        s.push_str(&format!(",term_{i}"));
    }
    for i in 1..arity {
        s.push_str(&format!(",slack_{i}"));
    }
    s.push('\n');
    for (pt, r) in rows {
        let base = r.chain_name.split('.').next().unwrap_or(&r.chain_name);
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            csv_field(base),
            csv_field(&r.chain_name),
            fmt_f64(pt.a),
            fmt_f64(pt.b),
            fmt_f64(pt.nu),
            fmt_f64(pt.p),
            fmt_f64(r.min_slack),
            r.violated,
        ));
        for i in 0..arity {
            match r.terms.get(i) {
                Some((_, v)) => s.push_str(&format!(",{}", fmt_f64(*v))),
                None => s.push(','),
            }
        }
        for i in 0..arity - 1 {
            match r.slacks.get(i) {
                Some(v) => s.push_str(&format!(",{}", fmt_f64(*v))),
                None => s.push(','),
            }
        }
        s.push('\n');
    }
    s
}

fn row_json(pt: &SamplePoint, r: &ChainReport, arity: usize) -> Value {
    let mut obj = Map::new();
    let base = r.chain_name.split('.').next().unwrap_or(&r.chain_name);
    obj.insert("chain".into(), json!(base));
    obj.insert("subchain".into(), json!(r.chain_name));
    obj.insert("a".into(), json!(pt.a));
    obj.insert("b".into(), json!(pt.b));
    obj.insert("nu".into(), json!(pt.nu));
    obj.insert("p".into(), json!(pt.p));
    obj.insert("min_slack".into(), json!(r.min_slack));
    obj.insert("violated".into(), json!(r.violated));
    for i in 0..arity {
        let key = format!("term_{}", i + 1);
        obj.insert(key, r.terms.get(i).map(|(_, v)| json!(v)).unwrap_or(Value::Null));
    }
    for i in 0..arity - 1 {
        let key = format!("slack_{}", i + 1);
        obj.insert(key, r.slacks.get(i).map(|v| json!(v)).unwrap_or(Value::Null));
    }
    Value::Object(obj)
}
