use crate::error::{Error, Result};
use crate::metric::Metric;

/// A nonempty multiset of points in ℝ^d, stored row-major.
///
/// Duplicates are kept: Chamfer sums run over indexed elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "dimension must be positive"));
        }
        if coords.is_empty() {
            return Err(Error::EmptySet);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                point: pos / dim,
                axis: pos % dim,
            });
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptySet)?;
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(dim * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        PointSet::new(dim, coords)
    }

    /// One-dimensional set from scalar positions.
    pub fn from_1d(values: &[f64]) -> Result<Self> {
        PointSet::new(1, values.to_vec())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// `A + t`. The receiver is left untouched.
    pub fn translated(&self, t: &[f64]) -> Result<PointSet> {
        self.check_vector(t)?;
        let coords = self
            .iter()
            .flat_map(|p| p.iter().zip(t).map(|(x, s)| x + s))
            .collect();
        Ok(PointSet {
            dim: self.dim,
            coords,
        })
    }

    pub fn check_same_dim(&self, other: &PointSet) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    /// Validates that `v` is a finite vector of this set's dimension.
    pub fn check_vector(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        if let Some(axis) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { point: 0, axis });
        }
        Ok(())
    }

    /// Exact diameter by all-pairs scan, O(n²).
    pub fn diameter(&self, metric: Metric) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(metric.distance(self.point(i), self.point(j)));
            }
        }
        best
    }

    /// Per-axis (min, max).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter().skip(1) {
            for (axis, &x) in p.iter().enumerate() {
                lo[axis] = lo[axis].min(x);
                hi[axis] = hi[axis].max(x);
            }
        }
        (lo, hi)
    }

    /// Concatenation of two sets of the same dimension.
    pub fn concat(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_dim(other)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointSet {
            dim: self.dim,
            coords,
        })
    }
}

/// `b - a` as a fresh vector.
pub fn difference(b: &[f64], a: &[f64]) -> Vec<f64> {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PointSet::new(2, vec![]), Err(Error::EmptySet)));
        assert!(matches!(
            PointSet::new(2, vec![1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            PointSet::new(2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { point: 0, axis: 1 })
        ));
        assert!(matches!(
            PointSet::from_rows(&[vec![1.0], vec![1.0, 2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        let empty: [Vec<f64>; 0] = [];
        assert!(matches!(PointSet::from_rows(&empty), Err(Error::EmptySet)));
    }

    #[test]
    fn translation_is_pure() {
        let a = PointSet::from_rows(&[[0.0, 0.0], [1.0, 2.0]]).unwrap();
        let moved = a.translated(&[3.0, 4.0]).unwrap();
        assert_eq!(moved.point(1), &[4.0, 6.0]);
        assert_eq!(a.point(1), &[1.0, 2.0]);
        assert!(a.translated(&[1.0]).is_err());
    }

    #[test]
    fn keeps_duplicates() {
        let a = PointSet::from_1d(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn diameter_and_box() {
        let a = PointSet::from_rows(&[[0.0, 0.0], [3.0, 4.0], [1.0, -1.0]]).unwrap();
        assert_eq!(a.diameter(Metric::L2), 5.0_f64.max((4.0f64 + 25.0).sqrt()));
        let (lo, hi) = a.bounding_box();
        assert_eq!(lo, vec![0.0, -1.0]);
        assert_eq!(hi, vec![3.0, 4.0]);
    }
}
