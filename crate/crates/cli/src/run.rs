use std::fmt::Write as _;
use std::time::Instant;

use cdut::oracle::{oracle_cdut_grid, GridSearchSpec, GRID_BUDGET};
use cdut::{
    cdut_approx_v1, cdut_approx_v2, cdut_exact_1d, cdut_exact_l1_linf, cdut_localnet,
    decide_cdut, oracle_cdut_1d, Answer, ApproxConfig, DecisionConfig, LocalNetConfig, Metric,
    PointSet,
};
use serde::Serialize;

use crate::args::{AlgorithmChoice, ComputeArgs, DecideArgs};
use crate::instance::read_instance;
use crate::record::{join, RunRecord};
use crate::{CliError, Output, EXIT_NO, EXIT_OK};

/// Settings shared by every algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub metric: Metric,
    pub epsilon: f64,
    pub c: f64,
    pub delta: Option<f64>,
    pub seed: u64,
    pub union_net: bool,
    pub grid_step: Option<f64>,
}

pub fn resolve_metric(
    flag: Option<Metric>,
    a: Option<Metric>,
    b: Option<Metric>,
) -> Result<Metric, CliError> {
    if let Some(metric) = flag {
        return Ok(metric);
    }
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(CliError::Invalid(format!(
            "instance files disagree on the metric ({x} vs {y}); pass --metric"
        ))),
        (Some(x), _) | (_, Some(x)) => Ok(x),
        (None, None) => Ok(Metric::L2),
    }
}

/// Grid covering the differences `b − a`, widened by the sampled estimate of
/// the average per-point cost, with a step keeping it within budget.
fn default_grid(a: &PointSet, b: &PointSet, params: &RunParams) -> Result<GridSearchSpec, CliError> {
    let estimate = cdut_approx_v1(a, b, &ApproxConfig::new(1.0).with_metric(params.metric), params.seed)?;
    let margin = estimate.value / a.len() as f64;
    let probe = GridSearchSpec::around_differences(a, b, 1.0, margin)?;
    let step = match params.grid_step {
        Some(step) => step,
        None => {
            let target = 1e6_f64;
            let extents: Vec<f64> = probe.lo.iter().zip(&probe.hi).map(|(l, h)| h - l).collect();
            let volume: f64 = extents.iter().map(|e| e.max(f64::MIN_POSITIVE)).product();
            let mut step = (volume / target).powf(1.0 / a.dim() as f64);
            if !(step.is_finite() && step > 0.0) {
                step = 1.0;
            }
            let mut spec = GridSearchSpec { step, ..probe.clone() };
            while spec.size() > GRID_BUDGET / 10 {
                spec.step *= 1.1;
            }
            spec.step
        }
    };
    Ok(GridSearchSpec { step, ..probe })
}

pub fn run_algorithm(
    choice: AlgorithmChoice,
    a: &PointSet,
    b: &PointSet,
    params: &RunParams,
) -> Result<RunRecord, CliError> {
    let start = Instant::now();
    let approx = || {
        let mut cfg = ApproxConfig::new(params.epsilon)
            .with_metric(params.metric)
            .with_c(params.c);
        if let Some(delta) = params.delta {
            cfg = cfg.with_delta(delta);
        }
        cfg
    };
    let mut slack = None;
    let mut c = None;
    let report = match choice {
        AlgorithmChoice::Exact1d => cdut_exact_1d(a, b)?,
        AlgorithmChoice::ExactL1Linf => cdut_exact_l1_linf(a, b, params.metric)?,
        AlgorithmChoice::ApproxV1 => cdut_approx_v1(a, b, &approx(), params.seed)?,
        AlgorithmChoice::ApproxV2 => {
            c = Some(params.c);
            cdut_approx_v2(a, b, &approx(), params.seed)?
        }
        AlgorithmChoice::LocalNet => {
            let mut cfg = LocalNetConfig::new(params.epsilon)
                .with_metric(params.metric)
                .with_union(params.union_net);
            if let Some(delta) = params.delta {
                cfg = cfg.with_delta(delta);
            }
            cdut_localnet(a, b, &cfg, params.seed)?
        }
        AlgorithmChoice::Oracle1d => oracle_cdut_1d(a, b)?,
        AlgorithmChoice::OracleGrid => {
            let spec = default_grid(a, b, params)?;
            let out = oracle_cdut_grid(a, b, &spec, params.metric)?;
            slack = Some(out.slack);
            out.report
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut record = RunRecord::from_report(&report, params.metric, c, wall_ms);
    record.slack = slack;
    Ok(record)
}

pub fn compute(args: &ComputeArgs) -> Result<Output, CliError> {
    let a = read_instance(&args.a)?;
    let b = read_instance(&args.b)?;
    let metric = resolve_metric(args.metric, a.metric, b.metric)?;
    let params = RunParams {
        metric,
        epsilon: args.epsilon,
        c: args.c,
        delta: args.delta,
        seed: args.seed,
        union_net: args.union_net,
        grid_step: args.grid_step,
    };
    let record = run_algorithm(args.algorithm, &a.points, &b.points, &params)?;
    let text = if args.json {
        record.to_json() + "\n"
    } else {
        record.to_text()
    };
    Ok(Output::ok(text))
}

#[derive(Debug, Serialize)]
struct DecisionRecord<'a> {
    answer: &'a str,
    radius: f64,
    epsilon: f64,
    c: f64,
    seed: u64,
    min_pairwise: f64,
    threshold: f64,
    median_total: f64,
    witness: &'a [f64],
    value: f64,
    evaluations: u64,
    wall_ms: f64,
}

pub fn decide(args: &DecideArgs) -> Result<Output, CliError> {
    let a = read_instance(&args.a)?;
    let b = read_instance(&args.b)?;
    if let Some(metric) = a.metric.or(b.metric).filter(|m| *m != Metric::L2) {
        return Err(CliError::Invalid(format!("decide works in l2, files are tagged {metric}")));
    }
    let config = DecisionConfig {
        anchors: args.anchors,
        ..DecisionConfig::new(args.radius, args.epsilon, args.c)
    };
    let start = Instant::now();
    let outcome = decide_cdut(&a.points, &b.points, &config, args.seed)?;
    let record = DecisionRecord {
        answer: outcome.answer.as_str(),
        radius: args.radius,
        epsilon: args.epsilon,
        c: args.c,
        seed: args.seed,
        min_pairwise: outcome.certificate.min_pairwise,
        threshold: outcome.certificate.threshold,
        median_total: outcome.median_total,
        witness: &outcome.report.translation,
        value: outcome.report.value,
        evaluations: outcome.report.evaluations,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let text = if args.json {
        serde_json::to_string(&record).expect("records serialize") + "\n"
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "answer:       {}", record.answer);
        let _ = writeln!(out, "separation:   min pairwise {} >= threshold {}", record.min_pairwise, record.threshold);
        let _ = writeln!(out, "median total: {}", record.median_total);
        let _ = writeln!(out, "witness:      {}", join(record.witness));
        let _ = writeln!(out, "value:        {}", record.value);
        let _ = writeln!(out, "evaluations:  {}", record.evaluations);
        out
    };
    let code = match outcome.answer {
        Answer::Yes => EXIT_OK,
        Answer::No => EXIT_NO,
    };
    Ok(Output { text, code })
}
