//! Exact fixed-translation Chamfer evaluation.

use std::fmt;

use crate::error::Result;
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;

/// Which routine produced a [`ChamferReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Chamfer,
    Sweep1d,
    ExactL1Linf,
    ApproxV1,
    ApproxV2,
    LocalNet,
    LocalNetUnion,
    Decision,
    Oracle1d,
    OracleGrid,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Chamfer => "chamfer",
            Algorithm::Sweep1d => "exact1d",
            Algorithm::ExactL1Linf => "exact-l1linf",
            Algorithm::ApproxV1 => "approx-v1",
            Algorithm::ApproxV2 => "approx-v2",
            Algorithm::LocalNet => "localnet",
            Algorithm::LocalNetUnion => "localnet-union",
            Algorithm::Decision => "decide",
            Algorithm::Oracle1d => "oracle-1d",
            Algorithm::OracleGrid => "oracle-grid",
        }
    }

    /// Whether `value` is an exact Chamfer sum of `assignment`.
    pub fn is_exact(self) -> bool {
        !matches!(self, Algorithm::ApproxV2)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of any Chamfer or Chamfer-under-translation computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamferReport {
    pub value: f64,
    pub translation: Vec<f64>,
    /// For every point of A, the index in B it was matched to.
    pub assignment: Vec<usize>,
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    /// Number of fixed-translation evaluations (exact or approximate) performed.
    pub evaluations: u64,
}

impl ChamferReport {
    pub(crate) fn with_meta(
        mut self,
        algorithm: Algorithm,
        epsilon: Option<f64>,
        seed: Option<u64>,
        evaluations: u64,
    ) -> Self {
        self.algorithm = algorithm;
        self.epsilon = epsilon;
        self.seed = seed;
        self.evaluations = evaluations;
        self
    }

    /// Recomputes Σ d(a_i + t, B[assignment_i]) from scratch.
    pub fn recompute(&self, a: &PointSet, b: &PointSet, metric: Metric) -> f64 {
        a.iter()
            .zip(&self.assignment)
            .map(|(p, &j)| metric.shifted_distance(p, &self.translation, b.point(j)))
            .sum()
    }
}

impl NearestIndex {
    /// Exact CD(A + t, B) with the full assignment.
    pub fn chamfer_translated(&self, a: &PointSet, t: &[f64]) -> Result<ChamferReport> {
        a.check_same_dim(self.source())?;
        a.check_vector(t)?;
        let mut value = 0.0;
        let mut assignment = Vec::with_capacity(a.len());
        let mut query = vec![0.0; a.dim()];
        for p in a.iter() {
            shift_into(&mut query, p, t);
            let hit = self.nearest(&query);
            value += hit.distance;
            assignment.push(hit.index);
        }
        Ok(ChamferReport {
            value,
            translation: t.to_vec(),
            assignment,
            algorithm: Algorithm::Chamfer,
            epsilon: None,
            seed: None,
            evaluations: 1,
        })
    }

    /// Exact CD(A + t, B), value only. Callers must have validated dimensions.
    pub fn chamfer_value(&self, a: &PointSet, t: &[f64]) -> f64 {
        debug_assert_eq!(a.dim(), t.len());
        let mut query = vec![0.0; a.dim()];
        let mut value = 0.0;
        for p in a.iter() {
            shift_into(&mut query, p, t);
            value += self.nearest(&query).distance;
        }
        value
    }
}

#[inline]
pub(crate) fn shift_into(out: &mut [f64], p: &[f64], t: &[f64]) {
    for ((o, x), s) in out.iter_mut().zip(p).zip(t) {
        *o = x + s;
    }
}

/// CD(A, B) = Σ_{a∈A} min_{b∈B} d(a, b).
pub fn chamfer(a: &PointSet, b: &PointSet, metric: Metric) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    let zero = vec![0.0; a.dim()];
    chamfer_translated(a, &zero, b, metric)
}

/// CD(A + t, B).
pub fn chamfer_translated(
    a: &PointSet,
    t: &[f64],
    b: &PointSet,
    metric: Metric,
) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    let index = NearestIndex::build(b, metric, Backend::Auto);
    index.chamfer_translated(a, t)
}
