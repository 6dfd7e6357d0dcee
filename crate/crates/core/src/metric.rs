use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The ℓp norms supported throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    L1,
    #[default]
    L2,
    LInf,
}

impl Metric {
    /// Distance between two coordinate slices of equal length.
    #[inline]
    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        let acc = x
            .iter()
            .zip(y)
            .fold(0.0, |acc, (a, b)| self.accumulate(acc, a - b));
        self.finish(acc)
    }

    /// Distance between `x + shift` and `y`, without materialising the shifted point.
    #[inline]
    pub fn shifted_distance(self, x: &[f64], shift: &[f64], y: &[f64]) -> f64 {
        let acc = x
            .iter()
            .zip(shift)
            .zip(y)
            .fold(0.0, |acc, ((a, s), b)| self.accumulate(acc, (a + s) - b));
        self.finish(acc)
    }

    /// Norm of a single vector.
    pub fn norm(self, v: &[f64]) -> f64 {
        let acc = v.iter().fold(0.0, |acc, x| self.accumulate(acc, *x));
        self.finish(acc)
    }

    /// Folds one per-axis difference into a running accumulator.
    ///
    /// `finish(fold(accumulate))` is monotone in every `|diff|`, which is what
    /// lets the kd-tree use the same routine for rectangle lower bounds.
    #[inline]
    pub(crate) fn accumulate(self, acc: f64, diff: f64) -> f64 {
        match self {
            Metric::L1 => acc + diff.abs(),
            Metric::L2 => acc + diff * diff,
            Metric::LInf => acc.max(diff.abs()),
        }
    }

    #[inline]
    pub(crate) fn finish(self, acc: f64) -> f64 {
        match self {
            Metric::L2 => acc.sqrt(),
            _ => acc,
        }
    }

    /// Distance from the centre of an axis-aligned cube of side `side` in
    /// dimension `dim` to its farthest corner.
    pub fn half_cell_diagonal(self, side: f64, dim: usize) -> f64 {
        match self {
            Metric::L1 => side * dim as f64 / 2.0,
            Metric::L2 => side * (dim as f64).sqrt() / 2.0,
            Metric::LInf => side / 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
            Metric::LInf => "linf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "manhattan" => Ok(Metric::L1),
            "l2" | "euclidean" => Ok(Metric::L2),
            "linf" | "l_inf" | "chebyshev" | "max" => Ok(Metric::LInf),
            other => Err(Error::invalid("metric", format!("unknown metric `{other}`"))),
        }
    }
}
