//! Exact Chamfer distance under translation in one dimension, and the exact
//! alignment-candidate search for ℓ1 / ℓ∞ in small dimension.
//!
//! In 1D, `t ↦ CD(A + t, B)` is piecewise linear with breakpoints at
//! `b_i - a` (a point passes over some `b`, slope +2) and at
//! `(b_i + b_{i+1}) / 2 - a` (a point switches nearest neighbour, slope -2).
//! Sweeping the sorted breakpoints while carrying the slope evaluates the
//! whole function in O(mn log mn).

use rayon::prelude::*;

use crate::chamfer::{Algorithm, ChamferReport};
use crate::error::{Error, Result};
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;

/// A breakpoint of the 1D objective with its multiplicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEvent {
    pub t: f64,
    /// Pairs with `t = b_i - a_j`.
    pub n_match: u32,
    /// Pairs with `t = (b_i + b_{i+1}) / 2 - a_j`.
    pub n_mid: u32,
}

/// Full output of a sweep: every event with the objective value there.
#[derive(Debug, Clone)]
pub struct SweepTrace {
    pub events: Vec<SweepEvent>,
    pub values: Vec<f64>,
    /// Slope of the objective right of the last event; always `+m`.
    pub final_slope: i64,
}

fn check_1d(a: &PointSet, b: &PointSet) -> Result<()> {
    for set in [a, b] {
        if set.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: set.dim(),
            });
        }
    }
    Ok(())
}

fn sorted_values(set: &PointSet) -> Vec<f64> {
    let mut v = set.as_flat().to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Sorted, merged breakpoints of `t ↦ CD(A + t, B)`.
pub fn build_events(a: &PointSet, b: &PointSet) -> Result<Vec<SweepEvent>> {
    check_1d(a, b)?;
    let bs = sorted_values(b);
    let n = bs.len();
    let mut raw: Vec<(f64, bool)> = Vec::with_capacity(a.len() * (2 * n - 1));
    for &x in a.as_flat() {
        raw.extend(bs.iter().map(|&y| (y - x, true)));
        raw.extend(bs.windows(2).map(|w| ((w[0] + w[1]) / 2.0 - x, false)));
    }
    raw.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut events: Vec<SweepEvent> = Vec::with_capacity(raw.len());
    for (t, is_match) in raw {
        match events.last_mut() {
            Some(last) if last.t == t => {}
            _ => events.push(SweepEvent {
                t,
                n_match: 0,
                n_mid: 0,
            }),
        }
        let last = events.last_mut().expect("pushed above");
        if is_match {
            last.n_match += 1;
        } else {
            last.n_mid += 1;
        }
    }
    Ok(events)
}

/// Evaluates the objective at every breakpoint.
///
/// The value at the first breakpoint is computed exactly; every later value
/// follows from the previous one and the slope on the segment between them.
/// The slope is updated after evaluating an event, for the segment to its right.
pub fn sweep_trace(a: &PointSet, b: &PointSet) -> Result<SweepTrace> {
    let events = build_events(a, b)?;
    let m = a.len() as i64;
    let index = NearestIndex::build(b, Metric::L1, Backend::Auto);

    let mut slope = -m;
    let mut prev = events[0].t;
    let mut cd = index.chamfer_value(a, &[prev]);
    let mut values = Vec::with_capacity(events.len());
    for ev in &events {
        cd += (ev.t - prev) * slope as f64;
        values.push(cd);
        slope += 2 * ev.n_match as i64 - 2 * ev.n_mid as i64;
        debug_assert!((-m..=m).contains(&slope), "slope {slope} outside [-{m}, {m}]");
        prev = ev.t;
    }
    Ok(SweepTrace {
        events,
        values,
        final_slope: slope,
    })
}

/// Exact CDuT(A, B) for one-dimensional sets.
///
/// The returned translation is the smallest `b - a` attaining the minimum;
/// the reported value and assignment are recomputed exactly there.
pub fn cdut_exact_1d(a: &PointSet, b: &PointSet) -> Result<ChamferReport> {
    let trace = sweep_trace(a, b)?;
    let best = trace.values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = trace.values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-10 * scale;
    // A pure-midpoint event is a local maximum, so some match event always
    // attains the minimum; among those the leftmost wins.
    let chosen = trace
        .events
        .iter()
        .zip(&trace.values)
        .position(|(ev, &v)| ev.n_match > 0 && v <= best + tol)
        .expect("a match event attains the minimum");

    let t = trace.events[chosen].t;
    let index = NearestIndex::build(b, Metric::L1, Backend::Auto);
    let report = index.chamfer_translated(a, &[t])?;
    Ok(report.with_meta(Algorithm::Sweep1d, None, None, trace.events.len() as u64))
}

/// Dimensions above this are refused by [`cdut_exact_l1_linf`].
pub const MAX_ALIGNMENT_DIM: usize = 3;
/// Cap on candidate translations × |A| for [`cdut_exact_l1_linf`].
pub const ALIGNMENT_BUDGET: u128 = 400_000_000;

/// One block of candidate translations: a Cartesian product of per-slot
/// value lists, optionally mapped through a small linear solve.
struct CandidateFamily {
    slots: Vec<Vec<f64>>,
    /// Row-major `dim × dim` inverse; `None` means slots are coordinates.
    inverse: Option<Vec<f64>>,
}

impl CandidateFamily {
    fn len(&self) -> u128 {
        self.slots.iter().map(|s| s.len() as u128).product()
    }

    fn decode(&self, mut idx: u128, out: &mut [f64]) {
        let dim = self.slots.len();
        let mut rhs = [0.0f64; MAX_ALIGNMENT_DIM];
        for (k, slot) in self.slots.iter().enumerate().rev() {
            let len = slot.len() as u128;
            rhs[k] = slot[(idx % len) as usize];
            idx /= len;
        }
        match &self.inverse {
            None => out.copy_from_slice(&rhs[..dim]),
            Some(inv) => {
                for (r, o) in out.iter_mut().enumerate() {
                    *o = (0..dim).map(|c| inv[r * dim + c] * rhs[c]).sum();
                }
            }
        }
    }
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Projections `normal · (b - a)` over all pairs, deduplicated.
fn projected_differences(a: &PointSet, b: &PointSet, normal: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a.iter() {
        for q in b.iter() {
            out.push(
                normal
                    .iter()
                    .zip(p.iter().zip(q))
                    .map(|(w, (x, y))| w * (y - x))
                    .sum(),
            );
        }
    }
    dedup_sorted(out)
}

fn axis_normal(dim: usize, axis: usize) -> Vec<f64> {
    let mut n = vec![0.0; dim];
    n[axis] = 1.0;
    n
}

fn invert_small(rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut aug: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs()))?;
        if aug[pivot][col].abs() < 1e-12 {
            return None;
        }
        aug.swap(col, pivot);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                if f != 0.0 {
                    let pivot_row = aug[col].clone();
                    for (v, p) in aug[r].iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
    }
    Some(aug.into_iter().flat_map(|r| r[n..].to_vec()).collect())
}

fn candidate_families(a: &PointSet, b: &PointSet, metric: Metric) -> Vec<CandidateFamily> {
    let dim = a.dim();
    let mut families = vec![CandidateFamily {
        slots: (0..dim)
            .map(|axis| projected_differences(a, b, &axis_normal(dim, axis)))
            .collect(),
        inverse: None,
    }];
    if metric == Metric::LInf && dim >= 2 {
        // ℓ∞ cones kink along x_i ± x_j = const, not along the axes, so an
        // optimum of a fixed assignment sits on a vertex of that arrangement.
        let mut normals = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for sign in [1.0, -1.0] {
                    let mut n = vec![0.0; dim];
                    n[i] = 1.0;
                    n[j] = sign;
                    normals.push(n);
                }
            }
        }
        let values: Vec<Vec<f64>> = normals
            .iter()
            .map(|n| projected_differences(a, b, n))
            .collect();
        for subset in combinations(normals.len(), dim) {
            let rows: Vec<Vec<f64>> = subset.iter().map(|&k| normals[k].clone()).collect();
            if let Some(inverse) = invert_small(&rows) {
                families.push(CandidateFamily {
                    slots: subset.iter().map(|&k| values[k].clone()).collect(),
                    inverse: Some(inverse),
                });
            }
        }
    }
    families
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact CDuT under ℓ1 or ℓ∞ for `d ≤ 3` by exhaustive candidate evaluation.
///
/// For ℓ1 the objective of any fixed assignment is separable, so an optimum
/// is aligned (`a_i + t_i = b_i` for some pair) on every axis. For ℓ∞ in
/// `d ≥ 2` the axis-aligned candidates are kept and the vertices of the
/// `x_i ± x_j = (b - a)_i ± (b - a)_j` arrangement are added.
pub fn cdut_exact_l1_linf(a: &PointSet, b: &PointSet, metric: Metric) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    if metric == Metric::L2 {
        return Err(Error::UnsupportedMetric {
            operation: "exact ℓ1/ℓ∞ alignment search",
            metric,
        });
    }
    let dim = a.dim();
    if dim > MAX_ALIGNMENT_DIM {
        return Err(Error::DimensionTooLarge {
            operation: "exact ℓ1/ℓ∞ alignment search",
            dim,
            max: MAX_ALIGNMENT_DIM,
        });
    }

    let families = candidate_families(a, b, metric);
    let total: u128 = families.iter().map(CandidateFamily::len).sum();
    let required = total * a.len() as u128;
    if required > ALIGNMENT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "exact ℓ1/ℓ∞ alignment search",
            required,
            limit: ALIGNMENT_BUDGET,
        });
    }

    let index = NearestIndex::build(b, metric, Backend::Auto);
    let mut offset = 0u128;
    let mut best = (f64::INFINITY, u128::MAX);
    for family in &families {
        let len = family.len();
        let local = (0..len as u64)
            .into_par_iter()
            .map_init(
                || vec![0.0; dim],
                |t, i| {
                    family.decode(i as u128, t);
                    (index.chamfer_value(a, t), offset + i as u128)
                },
            )
            .reduce(|| (f64::INFINITY, u128::MAX), better);
        best = better(best, local);
        offset += len;
    }

    let mut t = vec![0.0; dim];
    let mut idx = best.1;
    for family in &families {
        if idx < family.len() {
            family.decode(idx, &mut t);
            break;
        }
        idx -= family.len();
    }
    let report = index.chamfer_translated(a, &t)?;
    Ok(report.with_meta(Algorithm::ExactL1Linf, None, None, total as u64))
}

/// Lower value wins; equal values fall back to the lower candidate index.
fn better(x: (f64, u128), y: (f64, u128)) -> (f64, u128) {
    if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}
