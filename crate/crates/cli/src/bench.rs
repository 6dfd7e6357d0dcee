//! `cdut bench`: timing sweeps over generated instances.

use std::fmt::Write as _;
use std::path::PathBuf;

use cdut::{cdut_exact_1d, cdut_exact_l1_linf, Metric, PointSet};
use serde::Serialize;

use crate::args::{BenchArgs, Expectation, GenArgs};
use crate::generate::{build, generator_name};
use crate::run::{run_algorithm, RunParams};
use crate::{CliError, Output};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub family: String,
    pub n: usize,
    pub dim: usize,
    pub rep: usize,
    pub wall_ms: f64,
    pub value: f64,
    /// Exact optimum when one is cheap to get (d = 1, or ℓ1/ℓ∞).
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
}

fn reference(a: &PointSet, b: &PointSet, metric: Metric) -> Option<f64> {
    if a.dim() == 1 {
        cdut_exact_1d(a, b).ok().map(|r| r.value)
    } else if metric != Metric::L2 && a.len() * b.len() <= 400 {
        cdut_exact_l1_linf(a, b, metric).ok().map(|r| r.value)
    } else {
        None
    }
}

pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if args.algorithms.is_empty() || args.sizes.is_empty() {
        return Err(CliError::Invalid("need at least one algorithm and one size".into()));
    }
    let metric = args.metric.unwrap_or_default();
    let mut rows = Vec::new();
    for &n in &args.sizes {
        for rep in 0..args.reps {
            let seed = args.seed.wrapping_add(rep as u64);
            let gen = GenArgs {
                generator: args.family,
                out: PathBuf::new(),
                n,
                m: None,
                dim: args.dim,
                seed,
                metric: Some(metric),
                scale: 50.0,
                clusters: 4,
                noise: 0.5,
                x: Vec::new(),
                y: Vec::new(),
                radius: 1.0,
                epsilon: args.epsilon,
                c: args.c,
                answer: Expectation::Yes,
            };
            let instance = build(&gen)?;
            let (a, b) = (&instance.a, &instance.b);
            let exact = reference(a, b, metric);
            let params = RunParams {
                metric,
                epsilon: args.epsilon,
                c: args.c,
                delta: None,
                seed,
                union_net: false,
                grid_step: None,
            };
            for &choice in &args.algorithms {
                let record = run_algorithm(choice, a, b, &params)?;
                let ratio = exact.map(|opt| if opt > 0.0 { record.value / opt } else if record.value == 0.0 { 1.0 } else { f64::INFINITY });
                rows.push(BenchRow {
                    algorithm: record.algorithm,
                    family: generator_name(args.family),
                    n,
                    dim: a.dim(),
                    rep,
                    wall_ms: record.wall_ms,
                    value: record.value,
                    reference: exact,
                    ratio,
                });
            }
        }
    }
    Ok(rows)
}

pub fn bench(args: &BenchArgs) -> Result<Output, CliError> {
    let rows = bench_rows(args)?;
    let mut out = String::new();
    if args.json {
        for row in &rows {
            let _ = writeln!(out, "{}", serde_json::to_string(row).expect("rows serialize"));
        }
    } else {
        let _ = writeln!(
            out,
            "{:<14} {:<18} {:>7} {:>4} {:>4} {:>11} {:>14} {:>14} {:>8}",
            "algorithm", "family", "n", "d", "rep", "wall_ms", "value", "reference", "ratio"
        );
        let opt = |x: Option<f64>, prec: usize| x.map_or("-".to_string(), |v| format!("{v:.prec$}"));
        for r in &rows {
            let _ = writeln!(
                out,
                "{:<14} {:<18} {:>7} {:>4} {:>4} {:>11.3} {:>14.6} {:>14} {:>8}",
                r.algorithm,
                r.family,
                r.n,
                r.dim,
                r.rep,
                r.wall_ms,
                r.value,
                opt(r.reference, 6),
                opt(r.ratio, 4)
            );
        }
    }
    Ok(Output::ok(out))
}
