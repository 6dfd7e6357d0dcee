//! Decision procedure for well-separated B.
//!
//! When every pair of points of B is at least `(c+1)(1+2/m)R` apart, a
//! candidate translation close to an optimum induces the optimal assignment,
//! and the geometric median of the induced difference vectors is itself an
//! optimal translation. The procedure answers YES iff some candidate's
//! median total distance is at most `R(1+ε)`.

mod median;

pub use median::{geometric_median, total_distance, MedianResult};

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::ann::{boosted_failure, LadderConfig, ScaleLadder};
use crate::chamfer::{shift_into, Algorithm, ChamferReport};
use crate::error::{check_factor, Error, Result};
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;
use crate::rng::{split_seed, stream_rng, STREAM_ANCHORS, STREAM_DECISION, STREAM_LADDER};

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationCertificate {
    pub c: f64,
    pub radius: f64,
    pub m: usize,
    /// Smallest pairwise distance in B; infinite for a single point.
    pub min_pairwise: f64,
    /// `(c+1)(1+2/m)R`.
    pub threshold: f64,
    pub holds: bool,
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("radius", format!("{radius} must be positive")))
    }
}

pub fn separation_threshold(c: f64, radius: f64, m: usize) -> f64 {
    (c + 1.0) * (1.0 + 2.0 / m as f64) * radius
}

/// Exact all-pairs check of the separation assumption for `|A| = m`.
pub fn check_separation(b: &PointSet, c: f64, radius: f64, m: usize) -> Result<SeparationCertificate> {
    check_factor("c", c)?;
    check_radius(radius)?;
    if m == 0 {
        return Err(Error::EmptySet);
    }
    let mut min_pairwise = f64::INFINITY;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            min_pairwise = min_pairwise.min(Metric::L2.distance(b.point(i), b.point(j)));
        }
    }
    let threshold = separation_threshold(c, radius, m);
    Ok(SeparationCertificate {
        c,
        radius,
        m,
        min_pairwise,
        threshold,
        holds: min_pairwise >= threshold,
    })
}

/// Difference vectors `Δ_i = B[σ(i)] − A[i]` for an assignment σ.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceSet {
    pub deltas: PointSet,
    /// Translation whose nearest-neighbour assignment produced σ, if any.
    pub translation: Option<Vec<f64>>,
    pub assignment: Vec<usize>,
}

impl DifferenceSet {
    pub fn from_assignment(a: &PointSet, b: &PointSet, assignment: &[usize]) -> Result<Self> {
        a.check_same_dim(b)?;
        if assignment.len() != a.len() {
            return Err(Error::invalid(
                "assignment",
                format!("has {} entries for {} points", assignment.len(), a.len()),
            ));
        }
        if let Some(&j) = assignment.iter().find(|&&j| j >= b.len()) {
            return Err(Error::invalid("assignment", format!("index {j} out of range")));
        }
        let mut coords = Vec::with_capacity(a.len() * a.dim());
        for (p, &j) in a.iter().zip(assignment) {
            coords.extend(b.point(j).iter().zip(p).map(|(y, x)| y - x));
        }
        Ok(DifferenceSet {
            deltas: PointSet::new(a.dim(), coords)?,
            translation: None,
            assignment: assignment.to_vec(),
        })
    }

    /// `D_t` from the exact nearest-neighbour assignment at `t` (ℓ2).
    pub fn at_translation(a: &PointSet, b: &PointSet, t: &[f64]) -> Result<Self> {
        let index = NearestIndex::build(b, Metric::L2, Backend::Auto);
        let report = index.chamfer_translated(a, t)?;
        let mut set = DifferenceSet::from_assignment(a, b, &report.assignment)?;
        set.translation = Some(t.to_vec());
        Ok(set)
    }

    /// `s_p(D) = Σ ‖Δ_i − p‖`.
    pub fn total_distance(&self, p: &[f64]) -> f64 {
        total_distance(&self.deltas, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionConfig {
    pub radius: f64,
    pub epsilon: f64,
    /// Separation strength, also the ANN approximation factor.
    pub c: f64,
    pub anchors: usize,
}

impl DecisionConfig {
    pub fn new(radius: f64, epsilon: f64, c: f64) -> Self {
        DecisionConfig {
            radius,
            epsilon,
            c,
            anchors: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionOutcome {
    pub answer: Answer,
    pub certificate: SeparationCertificate,
    /// Best median found; its translation is the median point and its value
    /// the exact CD(A + μ̂, B).
    pub report: ChamferReport,
    /// `s_μ̂(D)` of the best candidate.
    pub median_total: f64,
}

/// Decides `CDuT(A, B) ≤ R` versus `> R(1+ε)` for ℓ2 under separation.
pub fn decide_cdut(
    a: &PointSet,
    b: &PointSet,
    config: &DecisionConfig,
    seed: u64,
) -> Result<DecisionOutcome> {
    a.check_same_dim(b)?;
    if !(config.epsilon.is_finite() && config.epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    if config.anchors == 0 {
        return Err(Error::invalid("anchors", "need at least one"));
    }
    let certificate = check_separation(b, config.c, config.radius, a.len())?;
    if !certificate.holds {
        return Err(Error::SeparationViolated(certificate));
    }

    let m = a.len();
    let n = b.len();
    let mut rng = stream_rng(seed, STREAM_ANCHORS);
    let anchors: Vec<usize> = (0..config.anchors).map(|_| rng.random_range(0..m)).collect();
    let upper = a.diameter(Metric::L2) + b.diameter(Metric::L2);
    let ladder = ScaleLadder::build(
        b,
        &LadderConfig::new(Metric::L2, config.c, upper, split_seed(seed, STREAM_LADDER))
            .with_failure(boosted_failure(anchors.len(), n)),
    )?;
    let accuracy = config.epsilon * config.radius / m as f64;

    let total = anchors.len() * n;
    let evaluate = |idx: usize| -> Result<(f64, Vec<f64>)> {
        let (p, q) = (a.point(anchors[idx / n]), b.point(idx % n));
        let t: Vec<f64> = q.iter().zip(p).map(|(y, x)| y - x).collect();
        let mut query = vec![0.0; a.dim()];
        let assignment: Vec<usize> = a
            .iter()
            .map(|x| {
                shift_into(&mut query, x, &t);
                ladder.query_unchecked(&query).index
            })
            .collect();
        let deltas = DifferenceSet::from_assignment(a, b, &assignment)?;
        let median = geometric_median(&deltas.deltas, accuracy)?;
        Ok((median.total_distance, median.point))
    };
    let (median_total, best) = (0..total)
        .into_par_iter()
        .map(|idx| evaluate(idx).map(|(s, _)| (s, idx)))
        .try_reduce(
            || (f64::INFINITY, usize::MAX),
            |x, y| Ok(if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
        )?;
    let (_, witness) = evaluate(best)?;

    let answer = if median_total <= config.radius * (1.0 + config.epsilon) {
        Answer::Yes
    } else {
        Answer::No
    };
    let report = NearestIndex::build(b, Metric::L2, Backend::Auto)
        .chamfer_translated(a, &witness)?
        .with_meta(
            Algorithm::Decision,
            Some(config.epsilon),
            Some(seed),
            total as u64,
        );
    Ok(DecisionOutcome {
        answer,
        certificate,
        report,
        median_total,
    })
}

/// Whether the nearest-neighbour assignment at `t_star` is injective, given
/// that points of A are more than `R(1+ε)` apart.
pub fn verify_emd_equivalence(
    a: &PointSet,
    b: &PointSet,
    radius: f64,
    epsilon: f64,
    t_star: &[f64],
) -> Result<bool> {
    a.check_same_dim(b)?;
    a.check_vector(t_star)?;
    let gap = radius * (1.0 + epsilon);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d = Metric::L2.distance(a.point(i), a.point(j));
            if d <= gap {
                return Err(Error::AssumptionViolated(format!(
                    "points {i} and {j} of A are {d} apart, need more than {gap}"
                )));
            }
        }
    }
    let report = NearestIndex::build(b, Metric::L2, Backend::Auto).chamfer_translated(a, t_star)?;
    let mut seen = HashSet::with_capacity(report.assignment.len());
    Ok(report.assignment.iter().all(|j| seen.insert(*j)))
}

/// `n` points pairwise at least `gap` apart (ℓ2), each jittered inside its
/// own cell of a grid with spacing `2·gap`.
pub fn separated_points(n: usize, dim: usize, gap: f64, seed: u64) -> Result<PointSet> {
    if dim == 0 {
        return Err(Error::invalid("dim", "must be positive"));
    }
    if !(gap.is_finite() && gap > 0.0) {
        return Err(Error::invalid("gap", "must be positive"));
    }
    let side = (1..).find(|s: &usize| s.pow(dim as u32) >= n).unwrap_or(1);
    let mut rng = stream_rng(seed, STREAM_DECISION);
    let mut coords = Vec::with_capacity(n * dim);
    for cell in 0..n {
        let mut rest = cell;
        for _ in 0..dim {
            let k = (rest % side) as f64;
            rest /= side;
            coords.push(2.0 * gap * k + rng.random_range(-gap / 2.0..=gap / 2.0));
        }
    }
    PointSet::new(dim, coords)
}

fn random_direction(rng: &mut impl Rng, dim: usize, length: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = Metric::L2.norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|x| x * length / norm).collect();
        }
    }
}

/// A planted decision instance with its construction parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub a: PointSet,
    pub b: PointSet,
    /// Translation carrying the planted copy of A onto B.
    pub shift: Vec<f64>,
    pub radius: f64,
    pub epsilon: f64,
    pub c: f64,
    /// Whether the construction guarantees CDuT ≤ R (else > R(1+ε)).
    pub expect_yes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedSpec {
    pub m: usize,
    pub n: usize,
    pub dim: usize,
    pub radius: f64,
    pub epsilon: f64,
    pub c: f64,
}

impl PlantedSpec {
    fn separated_b(&self, seed: u64) -> Result<PointSet> {
        // slack keeps the certificate strict despite rounding
        let gap = 1.01 * separation_threshold(self.c, self.radius, self.m);
        separated_points(self.n, self.dim, gap, seed)
    }

    fn shift(&self, rng: &mut impl Rng) -> Vec<f64> {
        (0..self.dim).map(|_| rng.random_range(-10.0..10.0) * self.radius).collect()
    }

    fn check(&self) -> Result<()> {
        check_factor("c", self.c)?;
        check_radius(self.radius)?;
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid("epsilon", "must lie in (0, 1]"));
        }
        if self.m == 0 || self.m > self.n {
            return Err(Error::invalid("m", "need 1 <= m <= n"));
        }
        Ok(())
    }

    /// A = (m distinct points of B) − s + noise of total norm R/2.
    pub fn yes(&self, seed: u64) -> Result<PlantedInstance> {
        self.check()?;
        let b = self.separated_b(seed)?;
        let mut rng = stream_rng(seed, STREAM_DECISION + 100);
        let shift = self.shift(&mut rng);
        let picks = rand::seq::index::sample(&mut rng, self.n, self.m).into_vec();
        let weights: Vec<f64> = (0..self.m).map(|_| rng.random_range(0.1..1.0)).collect();
        let sum: f64 = weights.iter().sum();
        let mut coords = Vec::with_capacity(self.m * self.dim);
        for (&j, w) in picks.iter().zip(&weights) {
            let noise = random_direction(&mut rng, self.dim, 0.5 * self.radius * w / sum);
            coords.extend(
                b.point(j)
                    .iter()
                    .zip(&shift)
                    .zip(&noise)
                    .map(|((y, s), v)| y - s + v),
            );
        }
        Ok(PlantedInstance {
            a: PointSet::new(self.dim, coords)?,
            b,
            shift,
            radius: self.radius,
            epsilon: self.epsilon,
            c: self.c,
            expect_yes: true,
        })
    }

    /// A holds m/2 antipodal pairs `B[k] − s ± v` with `‖v‖ = 2R(1+ε)/m`.
    ///
    /// Every translation pays at least `2‖v‖` per pair, so CDuT ≥ 2R(1+ε).
    pub fn no(&self, seed: u64) -> Result<PlantedInstance> {
        self.check()?;
        if self.m < 4 || self.m % 2 == 1 {
            return Err(Error::invalid("m", "the NO construction needs an even m >= 4"));
        }
        let r = 2.0 * self.radius * (1.0 + self.epsilon) / self.m as f64;
        if separation_threshold(self.c, self.radius, self.m) < 4.0 * r {
            return Err(Error::invalid("c", "separation too weak for the NO construction"));
        }
        let b = self.separated_b(seed)?;
        let mut rng = stream_rng(seed, STREAM_DECISION + 200);
        let shift = self.shift(&mut rng);
        let picks = rand::seq::index::sample(&mut rng, self.n, self.m / 2).into_vec();
        let mut coords = Vec::with_capacity(self.m * self.dim);
        for &j in &picks {
            let v = random_direction(&mut rng, self.dim, r);
            for sign in [1.0, -1.0] {
                coords.extend(
                    b.point(j)
                        .iter()
                        .zip(&shift)
                        .zip(&v)
                        .map(|((y, s), x)| y - s + sign * x),
                );
            }
        }
        Ok(PlantedInstance {
            a: PointSet::new(self.dim, coords)?,
            b,
            shift,
            radius: self.radius,
            epsilon: self.epsilon,
            c: self.c,
            expect_yes: false,
        })
    }
}
