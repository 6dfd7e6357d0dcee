//! Sampled-candidate (2+ε)-approximation.
//!
//! Anchors `a` are drawn from A; every `b - a` with `b ∈ B` is a candidate
//! translation. Variant 1 scores candidates with a pluggable fixed-translation
//! estimator (exact by default). Variant 2 builds one [`ScaleLadder`] on B and
//! scores each candidate by summing approximate nearest-neighbour distances.

use rand::Rng;
use rayon::prelude::*;

use crate::ann::{LadderConfig, ScaleLadder};
use crate::chamfer::{shift_into, Algorithm, ChamferReport};
use crate::error::{check_epsilon, check_factor, check_open_unit, Error, Result};
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;
use crate::rng::{split_seed, stream_rng, STREAM_ANCHORS, STREAM_ESTIMATOR, STREAM_LADDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Difference,
    Midpoint,
    Net,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateTranslation {
    pub t: Vec<f64>,
    pub source_a: usize,
    pub source_b: usize,
    pub provenance: Provenance,
}

/// All `B[j] - A[i]` for the given anchors, anchor-major.
pub fn difference_candidates(
    a: &PointSet,
    b: &PointSet,
    anchors: &[usize],
) -> Vec<CandidateTranslation> {
    let mut out = Vec::with_capacity(anchors.len() * b.len());
    for &i in anchors {
        let p = a.point(i);
        for (j, q) in b.iter().enumerate() {
            out.push(CandidateTranslation {
                t: q.iter().zip(p).map(|(y, x)| y - x).collect(),
                source_a: i,
                source_b: j,
                provenance: Provenance::Difference,
            });
        }
    }
    out
}

/// ⌈(2/ε) ln(1/δ)⌉.
pub fn anchor_count(epsilon: f64, delta: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    check_open_unit("delta", delta)?;
    let raw = 2.0 / epsilon * (1.0 / delta).ln();
    // e.g. δ = e^-3 should give exactly 6/ε, not one more
    Ok(((raw - 1e-9).ceil() as usize).max(1))
}

/// `k` anchor indices drawn uniformly with replacement from `0..m`.
pub fn sample_anchors(a: &PointSet, epsilon: f64, delta: f64, seed: u64) -> Result<Vec<usize>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = anchor_count(epsilon, delta)?;
    let mut rng = stream_rng(seed, STREAM_ANCHORS);
    Ok((0..k).map(|_| rng.random_range(0..a.len())).collect())
}

/// Fixed-translation Chamfer estimator used by variant 1.
///
/// Implementations should return a value in `[CD(A+t,B), (1+ε/4) CD(A+t,B)]`
/// with their own stated probability. `seed` is unique per candidate.
pub trait ChamferEstimator: Sync {
    fn estimate(&self, a: &PointSet, t: &[f64], seed: u64) -> Result<f64>;
}

/// Exact evaluation through a [`NearestIndex`].
#[derive(Debug, Clone)]
pub struct ExactEstimator {
    index: NearestIndex,
}

impl ExactEstimator {
    pub fn new(b: &PointSet, metric: Metric) -> Self {
        ExactEstimator {
            index: NearestIndex::build(b, metric, Backend::Auto),
        }
    }
}

impl ChamferEstimator for ExactEstimator {
    fn estimate(&self, a: &PointSet, t: &[f64], _seed: u64) -> Result<f64> {
        Ok(self.index.chamfer_value(a, t))
    }
}

/// Median of `runs` independent estimates, scaled up by `1/(1 - ε/16)` so a
/// median of `(1 ± ε/16)` estimates does not underestimate.
#[derive(Debug, Clone)]
pub struct MedianBoosted<E> {
    inner: E,
    runs: usize,
    scale: f64,
}

impl<E: ChamferEstimator> MedianBoosted<E> {
    pub fn new(inner: E, runs: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if runs == 0 {
            return Err(Error::invalid("runs", "need at least one run"));
        }
        Ok(MedianBoosted {
            inner,
            runs,
            scale: 1.0 / (1.0 - epsilon / 16.0),
        })
    }

    /// Run count making a single median fail with probability at most
    /// `0.05 ε / (12 m n)` when each run succeeds with probability 0.99.
    pub fn runs_for(epsilon: f64, m: usize, n: usize) -> usize {
        let target = 0.05 * epsilon / (12.0 * (m.max(1) * n.max(1)) as f64);
        (target.ln() / 0.02f64.ln()).ceil().max(1.0) as usize
    }

    pub fn runs(&self) -> usize {
        self.runs
    }
}

impl<E: ChamferEstimator> ChamferEstimator for MedianBoosted<E> {
    fn estimate(&self, a: &PointSet, t: &[f64], seed: u64) -> Result<f64> {
        let mut values = (0..self.runs)
            .map(|r| self.inner.estimate(a, t, split_seed(seed, r as u64)))
            .collect::<Result<Vec<f64>>>()?;
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len() % 2 == 1 {
            values[mid]
        } else {
            0.5 * (values[mid - 1] + values[mid])
        };
        Ok(median * self.scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxConfig {
    /// Approximation slack in (0, 1].
    pub epsilon: f64,
    /// Anchor-sampling failure probability in (0, 1).
    pub delta: f64,
    pub metric: Metric,
    /// ANN factor for variant 2.
    pub c: f64,
}

impl ApproxConfig {
    pub fn new(epsilon: f64) -> Self {
        ApproxConfig {
            epsilon,
            delta: 0.05,
            metric: Metric::L2,
            c: 2.0,
        }
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }
}

/// Lowest `(value, candidate index)`; candidate order is (anchor, b) lexicographic.
fn better(x: (f64, usize), y: (f64, usize)) -> (f64, usize) {
    if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

/// Variant 1 with the exact estimator.
pub fn cdut_approx_v1(
    a: &PointSet,
    b: &PointSet,
    config: &ApproxConfig,
    seed: u64,
) -> Result<ChamferReport> {
    let estimator = ExactEstimator::new(b, config.metric);
    cdut_approx_v1_with(a, b, config, &estimator, seed)
}

/// Variant 1: minimum estimate over all `k·n` sampled candidates.
pub fn cdut_approx_v1_with(
    a: &PointSet,
    b: &PointSet,
    config: &ApproxConfig,
    estimator: &dyn ChamferEstimator,
    seed: u64,
) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    let anchors = sample_anchors(a, config.epsilon, config.delta, seed)?;
    let n = b.len();
    let total = anchors.len() * n;
    let est_seed = split_seed(seed, STREAM_ESTIMATOR);
    let candidate = |idx: usize| -> Vec<f64> {
        let (p, q) = (a.point(anchors[idx / n]), b.point(idx % n));
        q.iter().zip(p).map(|(y, x)| y - x).collect()
    };

    let (value, best) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let t = candidate(idx);
            estimator
                .estimate(a, &t, split_seed(est_seed, idx as u64))
                .map(|v| (v, idx))
        })
        .try_reduce(|| (f64::INFINITY, usize::MAX), |x, y| Ok(better(x, y)))
        .map_err(|e| match e {
            Error::Estimator(msg) => Error::Estimator(msg),
            other => Error::Estimator(other.to_string()),
        })?;

    let t = candidate(best);
    let index = NearestIndex::build(b, config.metric, Backend::Auto);
    let mut report = index.chamfer_translated(a, &t)?;
    report.value = value;
    Ok(report.with_meta(
        Algorithm::ApproxV1,
        Some(config.epsilon),
        Some(seed),
        total as u64,
    ))
}

/// Variant 2: candidates scored by summed c-approximate nearest-neighbour distances.
pub fn cdut_approx_v2(
    a: &PointSet,
    b: &PointSet,
    config: &ApproxConfig,
    seed: u64,
) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    check_factor("c", config.c)?;
    let anchors = sample_anchors(a, config.epsilon, config.delta, seed)?;
    let upper = a.diameter(config.metric) + b.diameter(config.metric);
    let ladder_config = LadderConfig::new(
        config.metric,
        config.c,
        upper,
        split_seed(seed, STREAM_LADDER),
    );
    let ladder = ScaleLadder::build(b, &ladder_config)?;

    let n = b.len();
    let total = anchors.len() * n;
    let candidate = |idx: usize| -> Vec<f64> {
        let (p, q) = (a.point(anchors[idx / n]), b.point(idx % n));
        q.iter().zip(p).map(|(y, x)| y - x).collect()
    };
    let score = |t: &[f64], query: &mut Vec<f64>| -> f64 {
        a.iter()
            .map(|p| {
                shift_into(query, p, t);
                ladder.query_unchecked(query).distance
            })
            .sum()
    };

    let (value, best) = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; a.dim()],
            |query, idx| (score(&candidate(idx), query), idx),
        )
        .reduce(|| (f64::INFINITY, usize::MAX), better);

    let t = candidate(best);
    let mut query = vec![0.0; a.dim()];
    let assignment = a
        .iter()
        .map(|p| {
            shift_into(&mut query, p, &t);
            ladder.query_unchecked(&query).index
        })
        .collect();
    Ok(ChamferReport {
        value,
        translation: t,
        assignment,
        algorithm: Algorithm::ApproxV2,
        epsilon: Some(config.epsilon),
        seed: Some(seed),
        evaluations: total as u64,
    })
}
