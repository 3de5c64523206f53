//! `hhmeans mean`: every mean and constant at one point.

use clap::Args;
use serde::Serialize;

use hhmeans::chains::chain_cor12;
use hhmeans::hh::{r_tilde, R_tilde};
use hhmeans::means::{
    alpha, kantorovich, weighted_arithmetic, weighted_geometric, weighted_identric,
    weighted_logarithmic,
};
use hhmeans::{LimitPolicy, PositivePair, Weight};

use crate::output::{emit, fmt_f64};

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub nu: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct MeanRecord {
    a: f64,
    b: f64,
    nu: f64,
    arithmetic: f64,
    geometric: f64,
    logarithmic: f64,
    /// Absent at endpoint weights or equal arguments.
    identric: Option<f64>,
    kantorovich: f64,
    r_tilde: Option<f64>,
    #[serde(rename = "R_tilde")]
    big_r_tilde: Option<f64>,
    alpha: Option<f64>,
    chain_cor12: Vec<(String, f64)>,
}

pub fn run(args: MeanArgs) -> Result<u64, String> {
    let pair = PositivePair::new(args.a, args.b).map_err(|e| e.to_string())?;
    let w = Weight::new(args.nu).map_err(|e| e.to_string())?;
    let lp = LimitPolicy::default();

    let record = MeanRecord {
        a: args.a,
        b: args.b,
        nu: args.nu,
        arithmetic: weighted_arithmetic(pair, w),
        geometric: weighted_geometric(pair, w),
        logarithmic: weighted_logarithmic(pair, w, &lp),
        identric: weighted_identric(pair, w, &lp).ok(),
        kantorovich: kantorovich(pair),
        r_tilde: r_tilde(args.nu).ok(),
        big_r_tilde: R_tilde(args.nu).ok(),
        alpha: alpha(pair, w, &lp).ok(),
        chain_cor12: chain_cor12(pair, w, &lp, 1e-10).terms,
    };

    let content = match args.format {
        TextFormat::Json => {
            let mut s = serde_json::to_string_pretty(&record).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        TextFormat::Text => {
            let opt = |v: Option<f64>| match v {
                Some(x) => fmt_f64(x),
                None => "undefined".to_string(),
            };
            let mut s = String::new();
            s.push_str(&format!("a           = {}\n", fmt_f64(record.a)));
            s.push_str(&format!("b           = {}\n", fmt_f64(record.b)));
            s.push_str(&format!("nu          = {}\n", fmt_f64(record.nu)));
            s.push_str(&format!("arithmetic  = {}\n", fmt_f64(record.arithmetic)));
            s.push_str(&format!("geometric   = {}\n", fmt_f64(record.geometric)));
            s.push_str(&format!("logarithmic = {}\n", fmt_f64(record.logarithmic)));
            s.push_str(&format!("identric    = {}\n", opt(record.identric)));
            s.push_str(&format!("kantorovich = {}\n", fmt_f64(record.kantorovich)));
            s.push_str(&format!("r_tilde     = {}\n", opt(record.r_tilde)));
            s.push_str(&format!("R_tilde     = {}\n", opt(record.big_r_tilde)));
            s.push_str(&format!("alpha       = {}\n", opt(record.alpha)));
            s.push_str("chain cor12:\n");
            for (label, value) in &record.chain_cor12 {
                s.push_str(&format!("  {label:<14} = {}\n", fmt_f64(*value)));
            }
            s
        }
    };
    emit(args.output.as_deref(), &content)?;
    Ok(0)
}
