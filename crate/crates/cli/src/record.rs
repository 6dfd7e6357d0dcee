use std::fmt::Write as _;

use cdut::ChamferReport;
use serde::Serialize;

/// One algorithm run, printable as text or as a single JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub metric: String,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub value: f64,
    pub translation: Vec<f64>,
    pub wall_ms: f64,
    pub evaluations: u64,
    /// Additive error bound, reported by the grid oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

impl RunRecord {
    pub fn from_report(report: &ChamferReport, metric: cdut::Metric, c: Option<f64>, wall_ms: f64) -> Self {
        RunRecord {
            algorithm: report.algorithm.to_string(),
            metric: metric.to_string(),
            epsilon: report.epsilon,
            c,
            seed: report.seed,
            value: report.value,
            translation: report.translation.clone(),
            wall_ms,
            evaluations: report.evaluations,
            slack: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algorithm:   {}", self.algorithm);
        let _ = writeln!(out, "metric:      {}", self.metric);
        let _ = writeln!(out, "value:       {}", self.value);
        let _ = writeln!(out, "translation: {}", join(&self.translation));
        if let Some(eps) = self.epsilon {
            let _ = writeln!(out, "epsilon:     {eps}");
        }
        if let Some(c) = self.c {
            let _ = writeln!(out, "c:           {c}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed:        {seed}");
        }
        if let Some(slack) = self.slack {
            let _ = writeln!(out, "slack:       {slack}");
        }
        let _ = writeln!(out, "evaluations: {}", self.evaluations);
        let _ = writeln!(out, "wall_ms:     {:.3}", self.wall_ms);
        out
    }
}

pub(crate) fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
