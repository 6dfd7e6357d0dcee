//! Multi-scale locality-sensitive hashing for c-approximate nearest neighbours.
//!
//! A [`ScaleLadder`] holds an exact hash of B (for zero-distance hits) and,
//! for radii `R_i = c^(i-1) L`, an `(R_i, c R_i)` near-neighbour structure
//! made of `T` tables of `K` concatenated p-stable hashes. Queries binary
//! search the scales for the smallest one that reports a point within
//! `c R_i`. Every reported distance is recomputed exactly, and a query that
//! misses on every probed scale falls back to a linear scan, so answers never
//! underestimate the true nearest distance.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Cauchy, Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_factor, Error, Result};
use crate::index::Neighbor;
use crate::metric::Metric;
use crate::point_set::PointSet;
use crate::rng::{stream_rng, STREAM_LADDER};

/// Bucket width as a multiple of the scale radius.
const WIDTH_FACTOR: f64 = 4.0;
const MAX_HASHES_PER_TABLE: usize = 24;
const MAX_TABLES: usize = 512;
/// Deepest descent when the lower bound is derived automatically.
const MAX_AUTO_SCALES: usize = 64;

#[derive(Debug, Clone)]
pub struct LadderConfig {
    pub metric: Metric,
    /// Approximation factor, > 1.
    pub c: f64,
    /// Smallest scale. Derived from B when `None`.
    pub lower: Option<f64>,
    /// Upper bound on any nearest-neighbour distance that will be queried.
    pub upper: f64,
    /// Target probability that a single scale misses a point within `R_i`.
    pub failure: f64,
    pub seed: u64,
}

impl LadderConfig {
    pub fn new(metric: Metric, c: f64, upper: f64, seed: u64) -> Self {
        LadderConfig {
            metric,
            c,
            lower: None,
            upper,
            failure: 0.1,
            seed,
        }
    }

    pub fn with_lower(mut self, lower: f64) -> Self {
        self.lower = Some(lower);
        self
    }

    pub fn with_failure(mut self, failure: f64) -> Self {
        self.failure = failure;
        self
    }
}

/// Failure target `1/(kn)` for `k` anchors over `n` points, never looser
/// than the per-scale 0.1 baseline.
pub fn boosted_failure(anchors: usize, n: usize) -> f64 {
    (1.0 / (anchors.max(1) * n.max(1)) as f64).min(0.1)
}

#[derive(Debug, Clone)]
enum Projection {
    Dense(Vec<f64>),
    Coordinate(usize),
}

#[derive(Debug, Clone)]
struct HashFn {
    projection: Projection,
    offset: f64,
    width: f64,
}

impl HashFn {
    #[inline]
    fn apply(&self, p: &[f64]) -> i64 {
        let dot = match &self.projection {
            Projection::Dense(w) => w.iter().zip(p).map(|(a, b)| a * b).sum::<f64>(),
            Projection::Coordinate(axis) => p[*axis],
        };
        ((dot + self.offset) / self.width).floor() as i64
    }
}

#[derive(Debug, Clone)]
struct HashTable {
    funcs: Vec<HashFn>,
    buckets: HashMap<u64, Vec<u32>>,
}

impl HashTable {
    /// Folds the K bucket coordinates into one key. Distinct coordinate
    /// tuples may share a key; that only adds candidates, which are then
    /// checked exactly.
    fn key(&self, p: &[f64]) -> u64 {
        self.funcs.iter().fold(0xcbf2_9ce4_8422_2325, |h: u64, f| {
            (h ^ f.apply(p) as u64).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(29)
        })
    }
}

#[derive(Debug, Clone)]
struct Scale {
    radius: f64,
    tables: Vec<HashTable>,
}

/// Per-scale LSH parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub hashes_per_table: usize,
    pub tables: usize,
    /// Collision probability of one hash at distance `R`.
    pub p_near: f64,
    /// Collision probability of one hash at distance `cR`.
    pub p_far: f64,
}

/// Single-hash collision probability at distance `r` for bucket width `w`.
fn collision_probability(metric: Metric, w_over_r: f64) -> f64 {
    let s = w_over_r;
    match metric {
        Metric::L2 => {
            let phi = Normal::new(0.0, 1.0).expect("standard normal");
            1.0 - 2.0 * phi.cdf(-s)
                - 2.0 / ((2.0 * std::f64::consts::PI).sqrt() * s) * (1.0 - (-s * s / 2.0).exp())
        }
        Metric::L1 => {
            2.0 * s.atan() / std::f64::consts::PI
                - (1.0 + s * s).ln() / (std::f64::consts::PI * s)
        }
        // one sampled coordinate differs by at most r
        Metric::LInf => (1.0 - 1.0 / s).max(0.0),
    }
}

/// K and T for an `(R, cR)` structure over `n` points.
pub fn scale_params(metric: Metric, c: f64, n: usize, failure: f64) -> ScaleParams {
    let p_near = collision_probability(metric, WIDTH_FACTOR);
    let p_far = collision_probability(metric, WIDTH_FACTOR / c).clamp(1e-6, p_near);
    let k = if p_far >= 1.0 {
        1
    } else {
        ((n.max(2) as f64).ln() / (1.0 / p_far).ln()).ceil() as usize
    };
    let k = k.clamp(1, MAX_HASHES_PER_TABLE);
    let hit = p_near.powi(k as i32);
    let t = (failure.ln() / (1.0 - hit).ln()).ceil();
    let t = if t.is_finite() { t as usize } else { MAX_TABLES };
    ScaleParams {
        hashes_per_table: k,
        tables: t.clamp(1, MAX_TABLES),
        p_near,
        p_far,
    }
}

/// c-approximate nearest-neighbour answer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnAnswer {
    pub index: usize,
    /// Exact distance from the query to `B[index]`.
    pub distance: f64,
    /// Scale whose structure produced the hit; `None` for exact-table hits and scans.
    pub scale: Option<usize>,
    /// Whether the linear-scan fallback answered.
    pub scanned: bool,
}

#[derive(Debug, Clone)]
pub struct ScaleLadder {
    source: PointSet,
    metric: Metric,
    c: f64,
    lower: f64,
    upper: f64,
    params: ScaleParams,
    exact: HashMap<Vec<u64>, usize>,
    scales: Vec<Scale>,
}

fn exact_key(p: &[f64]) -> Vec<u64> {
    // +0.0 and -0.0 are the same location
    p.iter().map(|&x| (x + 0.0).to_bits()).collect()
}

impl ScaleLadder {
    pub fn build(b: &PointSet, config: &LadderConfig) -> Result<ScaleLadder> {
        check_factor("c", config.c)?;
        if !(config.upper.is_finite() && config.upper >= 0.0) {
            return Err(Error::invalid("upper", "must be finite and nonnegative"));
        }
        if !(config.failure > 0.0 && config.failure < 1.0) {
            return Err(Error::invalid("failure", "must lie in (0, 1)"));
        }
        if let Some(lower) = config.lower {
            if !(lower > 0.0 && lower <= config.upper) {
                return Err(Error::invalid(
                    "lower",
                    format!("need 0 < L <= U, got L = {lower}, U = {}", config.upper),
                ));
            }
        }

        let mut exact = HashMap::new();
        for (i, p) in b.iter().enumerate() {
            exact.entry(exact_key(p)).or_insert(i);
        }
        let params = scale_params(config.metric, config.c, b.len(), config.failure);
        let mut ladder = ScaleLadder {
            source: b.clone(),
            metric: config.metric,
            c: config.c,
            lower: config.lower.unwrap_or(0.0),
            upper: config.upper,
            params,
            exact,
            scales: Vec::new(),
        };
        // A single distinct location needs no scales: the scan is exact and O(1)-ish.
        if ladder.exact.len() < 2 || config.upper == 0.0 {
            return Ok(ladder);
        }

        let mut rng = stream_rng(config.seed, STREAM_LADDER);
        match config.lower {
            Some(lower) => {
                let count = scale_count(config.c, lower, config.upper);
                for i in 0..count {
                    let radius = lower * config.c.powi(i as i32);
                    ladder.scales.push(ladder.build_scale(radius, &mut rng));
                }
            }
            None => {
                // Descend from the top; stop at the first scale where no two
                // distinct points of B share a bucket within c·R.
                let mut radius = config.upper / config.c;
                let mut built = Vec::new();
                for _ in 0..MAX_AUTO_SCALES {
                    let scale = ladder.build_scale(radius, &mut rng);
                    let crowded = ladder.has_close_collision(&scale);
                    built.push(scale);
                    if !crowded {
                        break;
                    }
                    radius /= config.c;
                }
                built.reverse();
                ladder.lower = built[0].radius;
                ladder.scales = built;
            }
        }
        Ok(ladder)
    }

    fn build_scale(&self, radius: f64, rng: &mut impl Rng) -> Scale {
        let dim = self.source.dim();
        let width = WIDTH_FACTOR * radius;
        let tables = (0..self.params.tables)
            .map(|_| {
                let funcs = (0..self.params.hashes_per_table)
                    .map(|_| {
                        let projection = match self.metric {
                            Metric::L2 => Projection::Dense(
                                (0..dim).map(|_| StandardNormal.sample(rng)).collect(),
                            ),
                            Metric::L1 => {
                                let cauchy = Cauchy::new(0.0, 1.0).expect("unit Cauchy");
                                Projection::Dense((0..dim).map(|_| cauchy.sample(rng)).collect())
                            }
                            Metric::LInf => Projection::Coordinate(rng.random_range(0..dim)),
                        };
                        HashFn {
                            projection,
                            offset: rng.random_range(0.0..width),
                            width,
                        }
                    })
                    .collect();
                let mut table = HashTable {
                    funcs,
                    buckets: HashMap::new(),
                };
                for (i, p) in self.source.iter().enumerate() {
                    let key = table.key(p);
                    table.buckets.entry(key).or_default().push(i as u32);
                }
                table
            })
            .collect();
        Scale { radius, tables }
    }

    fn has_close_collision(&self, scale: &Scale) -> bool {
        let limit = self.c * scale.radius;
        scale.tables.iter().any(|table| {
            table.buckets.values().any(|bucket| {
                bucket.iter().enumerate().any(|(x, &i)| {
                    let p = self.source.point(i as usize);
                    bucket[x + 1..].iter().any(|&j| {
                        let q = self.source.point(j as usize);
                        p != q && self.metric.distance(p, q) <= limit
                    })
                })
            })
        })
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn params(&self) -> ScaleParams {
        self.params
    }

    pub fn num_scales(&self) -> usize {
        self.scales.len()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.scales.iter().map(|s| s.radius).collect()
    }

    /// For each table of `scale`, the bucket key of every point of B.
    pub fn bucket_keys(&self, scale: usize) -> Vec<Vec<u64>> {
        self.scales[scale]
            .tables
            .iter()
            .map(|t| self.source.iter().map(|p| t.key(p)).collect())
            .collect()
    }

    /// Best point of B colliding with `q` in any table of `scale`, if it
    /// lies within `c · R_scale`.
    pub fn probe_scale(&self, q: &[f64], scale: usize) -> Option<Neighbor> {
        let best = self.probe_candidates(q, scale)?;
        (best.distance <= self.c * self.scales[scale].radius).then_some(best)
    }

    fn probe_candidates(&self, q: &[f64], scale: usize) -> Option<Neighbor> {
        let mut best: Option<Neighbor> = None;
        for table in &self.scales[scale].tables {
            if let Some(bucket) = table.buckets.get(&table.key(q)) {
                for &j in bucket {
                    let j = j as usize;
                    let d = self.metric.distance(q, self.source.point(j));
                    match best {
                        Some(b) if d > b.distance || (d == b.distance && j >= b.index) => {}
                        _ => {
                            best = Some(Neighbor {
                                distance: d,
                                index: j,
                            })
                        }
                    }
                }
            }
        }
        best
    }

    /// Approximate nearest neighbour of `q` in B.
    pub fn query(&self, q: &[f64]) -> Result<AnnAnswer> {
        self.source.check_vector(q)?;
        Ok(self.query_unchecked(q))
    }

    pub(crate) fn query_unchecked(&self, q: &[f64]) -> AnnAnswer {
        if let Some(&index) = self.exact.get(&exact_key(q)) {
            return AnnAnswer {
                index,
                distance: 0.0,
                scale: None,
                scanned: false,
            };
        }

        let mut best: Option<(Neighbor, usize)> = None;
        let (mut lo, mut hi) = (0, self.scales.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match self.probe_scale(q, mid) {
                Some(hit) => {
                    let replace = match best {
                        None => true,
                        Some((b, _)) => {
                            hit.distance < b.distance
                                || (hit.distance == b.distance && hit.index < b.index)
                        }
                    };
                    if replace {
                        best = Some((hit, mid));
                    }
                    hi = mid;
                }
                None => lo = mid + 1,
            }
        }

        match best {
            Some((hit, scale)) => AnnAnswer {
                index: hit.index,
                distance: hit.distance,
                scale: Some(scale),
                scanned: false,
            },
            None => {
                let mut hit = Neighbor {
                    distance: f64::INFINITY,
                    index: usize::MAX,
                };
                for (j, p) in self.source.iter().enumerate() {
                    let d = self.metric.distance(q, p);
                    if d < hit.distance {
                        hit = Neighbor { distance: d, index: j };
                    }
                }
                AnnAnswer {
                    index: hit.index,
                    distance: hit.distance,
                    scale: None,
                    scanned: true,
                }
            }
        }
    }
}

/// ⌈log_c(U / L)⌉, at least one.
pub fn scale_count(c: f64, lower: f64, upper: f64) -> usize {
    let raw = (upper / lower).ln() / c.ln();
    // guard exact powers of c against rounding up
    ((raw - 1e-9).ceil() as usize).max(1)
}
