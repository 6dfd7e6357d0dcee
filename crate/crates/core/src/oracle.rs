//! Brute-force references for small instances.

use rayon::prelude::*;

use crate::chamfer::{Algorithm, ChamferReport};
use crate::error::{Error, Result};
use crate::index::{Backend, NearestIndex};
use crate::metric::Metric;
use crate::point_set::PointSet;

pub const ORACLE_1D_LIMIT: usize = 10_000;
pub const GRID_BUDGET: u128 = 10_000_000;

fn lowest(x: (f64, usize), y: (f64, usize)) -> (f64, usize) {
    if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

/// Exact 1D optimum: the best of the `m·n` translations `b − a`, each
/// evaluated by a plain scan. Ties go to the smallest translation.
pub fn oracle_cdut_1d(a: &PointSet, b: &PointSet) -> Result<ChamferReport> {
    a.check_same_dim(b)?;
    if a.dim() != 1 {
        return Err(Error::invalid("dimension", "the 1D oracle needs d = 1"));
    }
    let pairs = a.len() * b.len();
    if pairs > ORACLE_1D_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "1D oracle",
            required: pairs as u128,
            limit: ORACLE_1D_LIMIT as u128,
        });
    }
    let mut ts: Vec<f64> = b
        .as_flat()
        .iter()
        .flat_map(|y| a.as_flat().iter().map(move |x| y - x))
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let value_at = |t: f64| -> f64 {
        a.as_flat()
            .iter()
            .map(|x| {
                b.as_flat()
                    .iter()
                    .map(|y| (x + t - y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    };
    let (_, best) = ts
        .par_iter()
        .enumerate()
        .map(|(i, &t)| (value_at(t), i))
        .reduce(|| (f64::INFINITY, usize::MAX), lowest);
    let index = NearestIndex::build(b, Metric::L2, Backend::Brute);
    Ok(index
        .chamfer_translated(a, &[ts[best]])?
        .with_meta(Algorithm::Oracle1d, None, None, ts.len() as u64))
}

/// Axis-aligned translation grid `lo + k·step`, `k = 0..`, up to `hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub step: f64,
}

impl GridSearchSpec {
    /// Bounding box of all differences `b − a`, widened by `margin` per side.
    pub fn around_differences(a: &PointSet, b: &PointSet, step: f64, margin: f64) -> Result<Self> {
        a.check_same_dim(b)?;
        let (alo, ahi) = a.bounding_box();
        let (blo, bhi) = b.bounding_box();
        let lo = blo.iter().zip(&ahi).map(|(y, x)| y - x - margin).collect();
        let hi = bhi.iter().zip(&alo).map(|(y, x)| y - x + margin).collect();
        Ok(GridSearchSpec { lo, hi, step })
    }

    fn axis_counts(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| ((h - l) / self.step + 1e-9).floor() as usize + 1)
            .collect()
    }

    pub fn size(&self) -> u128 {
        self.axis_counts()
            .iter()
            .fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub report: ChamferReport,
    /// `m ·` covering radius of the grid: the grid value is at most
    /// `OPT + slack` whenever the box contains an optimum.
    pub slack: f64,
}

pub fn oracle_cdut_grid(
    a: &PointSet,
    b: &PointSet,
    spec: &GridSearchSpec,
    metric: Metric,
) -> Result<GridOutcome> {
    a.check_same_dim(b)?;
    let dim = a.dim();
    if spec.lo.len() != dim || spec.hi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: spec.lo.len().min(spec.hi.len()),
        });
    }
    if !(spec.step.is_finite() && spec.step > 0.0) {
        return Err(Error::invalid("step", "must be positive"));
    }
    if spec.lo.iter().zip(&spec.hi).any(|(l, h)| l > h || !l.is_finite() || !h.is_finite()) {
        return Err(Error::invalid("box", "need finite lo <= hi on every axis"));
    }
    let size = spec.size();
    if size > GRID_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "grid oracle",
            required: size,
            limit: GRID_BUDGET,
        });
    }
    let counts = spec.axis_counts();
    let point = |mut flat: usize| -> Vec<f64> {
        let mut t = vec![0.0; dim];
        for axis in (0..dim).rev() {
            t[axis] = spec.lo[axis] + (flat % counts[axis]) as f64 * spec.step;
            flat /= counts[axis];
        }
        t
    };
    let index = NearestIndex::build(b, metric, Backend::Auto);
    let (_, best) = (0..size as usize)
        .into_par_iter()
        .map(|i| (index.chamfer_value(a, &point(i)), i))
        .reduce(|| (f64::INFINITY, usize::MAX), lowest);
    let report = index
        .chamfer_translated(a, &point(best))?
        .with_meta(Algorithm::OracleGrid, None, None, size as u64);
    Ok(GridOutcome {
        report,
        slack: a.len() as f64 * metric.half_cell_diagonal(spec.step, dim),
    })
}
