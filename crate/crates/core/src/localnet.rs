//! Sampled local-net (1+ε)-approximation for small dimension.
//!
//! A sample Q of A yields candidate translations `b - a`, whose best exact
//! value `u` fixes a search radius `R = (1+γ)u/m` and a net spacing
//! `ρ = εu/(hm)`. The exact Chamfer value is evaluated at every point of a
//! ρ-net around every candidate.
//!
//! All nets are cut from one global lattice anchored at the origin, so
//! overlapping balls share net points. The union mode evaluates each shared
//! point once and therefore returns exactly the per-ball result.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::approx::anchor_count;
use crate::chamfer::{Algorithm, ChamferReport};
use crate::error::{check_epsilon, check_open_unit, Error, Result};
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;
use crate::rng::{stream_rng, STREAM_NET_SAMPLE};

pub const MAX_NET_DIM: usize = 6;
/// Upper limit on net points evaluated by one run.
pub const NET_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct NetSpec {
    pub center: Vec<f64>,
    pub radius: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalNetConfig {
    pub epsilon: f64,
    pub gamma: f64,
    pub delta: f64,
    pub h: f64,
    pub union_mode: bool,
    pub metric: Metric,
}

impl LocalNetConfig {
    /// γ = ε, δ = 0.1, h = 3, per-ball nets, ℓ2.
    pub fn new(epsilon: f64) -> Self {
        LocalNetConfig {
            epsilon,
            gamma: epsilon,
            delta: 0.1,
            h: 3.0,
            union_mode: false,
            metric: Metric::L2,
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

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_union(mut self, union_mode: bool) -> Self {
        self.union_mode = union_mode;
        self
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if !(self.gamma.is_finite() && self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::invalid("gamma", format!("{} is not in (0, 1]", self.gamma)));
        }
        check_open_unit("delta", self.delta)?;
        if !(self.h.is_finite() && self.h >= 2.0 + self.gamma) {
            return Err(Error::invalid(
                "h",
                format!("{} is below 2 + gamma = {}", self.h, 2.0 + self.gamma),
            ));
        }
        Ok(())
    }
}

/// Grid step giving covering radius `rho / 2`.
fn lattice_step(rho: f64, dim: usize, metric: Metric) -> f64 {
    rho / (2.0 * metric.half_cell_diagonal(1.0, dim))
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_NET_DIM {
        return Err(Error::DimensionTooLarge {
            operation: "local net search",
            dim,
            max: MAX_NET_DIM,
        });
    }
    Ok(())
}

/// Axis-aligned grid around `spec.center` covering the ball of radius
/// `spec.radius` with covering radius `spec.rho / 2`.
pub fn build_net(spec: &NetSpec, dim: usize, metric: Metric) -> Result<Vec<Vec<f64>>> {
    check_dim(dim)?;
    if spec.center.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: spec.center.len(),
        });
    }
    if !(spec.rho.is_finite() && spec.rho > 0.0) {
        return Err(Error::invalid("rho", "must be positive"));
    }
    if !(spec.radius.is_finite() && spec.radius >= 0.0) {
        return Err(Error::invalid("radius", "must be finite and nonnegative"));
    }
    let step = lattice_step(spec.rho, dim, metric);
    let reach = (spec.radius / step).ceil() as i64;
    let side = (2 * reach + 1) as u128;
    let size = side.saturating_pow(dim as u32);
    if size > NET_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "net construction",
            required: size,
            limit: NET_BUDGET,
        });
    }
    let cutoff = spec.radius + spec.rho / 2.0;
    let mut out = Vec::new();
    let mut offset = vec![0.0; dim];
    for_each_index(&vec![-reach; dim], &vec![reach; dim], |k| {
        for (o, &ki) in offset.iter_mut().zip(k) {
            *o = ki as f64 * step;
        }
        if metric.norm(&offset) <= cutoff {
            out.push(spec.center.iter().zip(&offset).map(|(c, o)| c + o).collect());
        }
    });
    Ok(out)
}

/// Visits every integer vector in the box `[lo, hi]`, last axis fastest.
fn for_each_index(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut k = lo.to_vec();
    loop {
        visit(&k);
        let mut axis = k.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if k[axis] < hi[axis] {
                k[axis] += 1;
                break;
            }
            k[axis] = lo[axis];
        }
    }
}

/// Full outcome of a local-net run.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalNetOutcome {
    pub report: ChamferReport,
    /// Best exact value over the sampled candidates.
    pub u: f64,
    /// Search radius `(1+γ)u/m`.
    pub radius: f64,
    /// Net spacing `εu/(hm)`.
    pub rho: f64,
    pub candidates: u64,
    /// Net points whose exact value was computed.
    pub net_evaluations: u64,
}

pub fn cdut_localnet(
    a: &PointSet,
    b: &PointSet,
    config: &LocalNetConfig,
    seed: u64,
) -> Result<ChamferReport> {
    localnet_search(a, b, config, seed).map(|o| o.report)
}

/// Same as [`cdut_localnet`] with shared net points evaluated once.
pub fn cdut_localnet_union(
    a: &PointSet,
    b: &PointSet,
    config: &LocalNetConfig,
    seed: u64,
) -> Result<ChamferReport> {
    let config = config.with_union(true);
    localnet_search(a, b, &config, seed).map(|o| o.report)
}

fn lattice_point(k: &[i64], step: f64) -> Vec<f64> {
    k.iter().map(|&ki| ki as f64 * step).collect()
}

/// Smaller value wins, then the lexicographically smaller lattice index.
fn better<'k>(x: (f64, &'k [i64]), y: (f64, &'k [i64])) -> (f64, &'k [i64]) {
    if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

pub fn localnet_search(
    a: &PointSet,
    b: &PointSet,
    config: &LocalNetConfig,
    seed: u64,
) -> Result<LocalNetOutcome> {
    config.validate()?;
    a.check_same_dim(b)?;
    let dim = a.dim();
    check_dim(dim)?;
    let m = a.len();
    let algorithm = if config.union_mode {
        Algorithm::LocalNetUnion
    } else {
        Algorithm::LocalNet
    };
    let index = NearestIndex::build(b, config.metric, Backend::Auto);

    let k = anchor_count(config.gamma, config.delta)?.min(m);
    let mut rng = stream_rng(seed, STREAM_NET_SAMPLE);
    let sampled = sample(&mut rng, m, k).into_vec();
    let candidates: Vec<Vec<f64>> = sampled
        .iter()
        .flat_map(|&i| {
            let p = a.point(i);
            b.iter()
                .map(move |q| q.iter().zip(p).map(|(y, x)| y - x).collect::<Vec<f64>>())
        })
        .collect();

    let (u, best_candidate) = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, t)| (index.chamfer_value(a, t), idx))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |x, y| if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
        );
    let n_candidates = candidates.len() as u64;
    let meta = |report: ChamferReport, evals: u64| {
        report.with_meta(algorithm, Some(config.epsilon), Some(seed), evals)
    };

    if u == 0.0 {
        let report = index.chamfer_translated(a, &candidates[best_candidate])?;
        return Ok(LocalNetOutcome {
            report: meta(report, n_candidates),
            u,
            radius: 0.0,
            rho: 0.0,
            candidates: n_candidates,
            net_evaluations: 0,
        });
    }

    let mf = m as f64;
    let radius = (1.0 + config.gamma) * u / mf;
    let rho = (config.epsilon * u) / (config.h * mf);
    // The cutoff uses the coarsest admissible spacing, so refining ρ only
    // ever adds lattice points.
    let rho_max = (config.epsilon * u) / ((2.0 + config.gamma) * mf);
    let cutoff = radius + rho_max / 2.0;
    let step = lattice_step(rho, dim, config.metric);

    let boxes: Vec<(Vec<i64>, Vec<i64>)> = candidates
        .iter()
        .map(|c| {
            let lo = c.iter().map(|x| ((x - cutoff) / step).ceil() as i64).collect();
            let hi = c.iter().map(|x| ((x + cutoff) / step).floor() as i64).collect();
            (lo, hi)
        })
        .collect();
    let required: u128 = boxes
        .iter()
        .map(|(lo, hi)| {
            lo.iter()
                .zip(hi)
                .map(|(l, h)| (h - l + 1).max(0) as u128)
                .fold(1u128, |acc, s| acc.saturating_mul(s))
        })
        .fold(0u128, |acc, s| acc.saturating_add(s));
    if required > NET_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "local net search",
            required,
            limit: NET_BUDGET,
        });
    }

    let in_ball = |k: &[i64], center: &[f64]| {
        let p = lattice_point(k, step);
        config.metric.distance(&p, center) <= cutoff
    };
    let points: Vec<Vec<i64>> = if config.union_mode {
        let mut set = BTreeSet::new();
        for (c, (lo, hi)) in candidates.iter().zip(&boxes) {
            for_each_index(lo, hi, |k| {
                if in_ball(k, c) {
                    set.insert(k.to_vec());
                }
            });
        }
        set.into_iter().collect()
    } else {
        let mut all = Vec::new();
        for (c, (lo, hi)) in candidates.iter().zip(&boxes) {
            for_each_index(lo, hi, |k| {
                if in_ball(k, c) {
                    all.push(k.to_vec());
                }
            });
        }
        all
    };

    let (best_value, best_key) = points
        .par_iter()
        .map(|k| (index.chamfer_value(a, &lattice_point(k, step)), k.as_slice()))
        .reduce(|| (f64::INFINITY, &[][..]), better);

    let t = if best_value <= u {
        lattice_point(best_key, step)
    } else {
        candidates[best_candidate].clone()
    };
    let report = index.chamfer_translated(a, &t)?;
    let net_evaluations = points.len() as u64;
    Ok(LocalNetOutcome {
        report: meta(report, n_candidates + net_evaluations),
        u,
        radius,
        rho,
        candidates: n_candidates,
        net_evaluations,
    })
}
