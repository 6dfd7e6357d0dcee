//! Orthogonal-vectors gadgets in one dimension.
//!
//! For `x, y ∈ {0,1}^d`, the sets `A(x)` and `B(y)` live in `[0, 4d+1]`.
//! Coordinate `i` owns the slots `4i−3 .. 4i`: `A` occupies the inner pair
//! when `x_i = 0` and the outer pair when `x_i = 1`; `B` fills all four slots
//! when `y_i = 0` and only the inner pair when `y_i = 1`. Hence
//! `A(x) ⊆ B(y)` exactly when `x · y = 0`.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point_set::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::invalid("bits", format!("entry {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector)
    }

    /// Low `dim` bits of `mask`, least significant first.
    pub fn from_mask(mask: u64, dim: usize) -> Self {
        BitVector((0..dim).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn is_orthogonal(&self, other: &BitVector) -> bool {
        !self.0.iter().zip(&other.0).any(|(x, y)| *x && *y)
    }
}

impl std::str::FromStr for BitVector {
    type Err = Error;

    /// Accepts `0110` or `0,1,1,0`.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::invalid("bits", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        BitVector::from_bits(&bits)
    }
}

/// Gadget pair for one vector pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub points_a: PointSet,
    pub points_b: PointSet,
    /// `4d + 1`.
    pub width: f64,
    pub x: BitVector,
    pub y: BitVector,
}

impl GadgetInstance {
    pub fn new(x: &BitVector, y: &BitVector) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        Ok(GadgetInstance {
            points_a: gadget_a(x),
            points_b: gadget_b(y),
            width: gadget_width(x.len()),
            x: x.clone(),
            y: y.clone(),
        })
    }
}

pub fn gadget_width(d: usize) -> f64 {
    (4 * d + 1) as f64
}

fn sorted_set(mut values: Vec<f64>) -> PointSet {
    values.sort_by(f64::total_cmp);
    PointSet::from_1d(&values).expect("gadget coordinates are finite")
}

pub fn gadget_a(x: &BitVector) -> PointSet {
    let d = x.len();
    let mut values = vec![0.0, gadget_width(d)];
    for (i, &bit) in (1..).zip(x.bits()) {
        let base = 4.0 * i as f64;
        if bit {
            values.extend([base - 3.0, base]);
        } else {
            values.extend([base - 2.0, base - 1.0]);
        }
    }
    sorted_set(values)
}

pub fn gadget_b(y: &BitVector) -> PointSet {
    let d = y.len();
    let mut values = vec![0.0, gadget_width(d)];
    for (i, &bit) in (1..).zip(y.bits()) {
        let base = 4.0 * i as f64;
        if bit {
            values.extend([base - 2.0, base - 1.0]);
        } else {
            values.extend([base - 3.0, base - 2.0, base - 1.0, base]);
        }
    }
    sorted_set(values)
}

/// CD(A(x) + t, B(y)) once `|t| ≥ 4d + 1`: every point of A is matched to
/// the nearest endpoint of B.
pub fn far_translation_value(d: usize, t: f64) -> f64 {
    let d = d as f64;
    t.abs() * 2.0 * (d + 1.0) - 4.0 * d * d - 5.0 * d - 1.0
}

/// Places pair `i` (1-based) at offset `(U·i, 0, …)` with `U = 10·N·Δ`,
/// where N counts all points and Δ is the diameter of the union.
pub fn combine_gadgets(pairs: &[(PointSet, PointSet)], metric: Metric) -> Result<(PointSet, PointSet)> {
    let first = pairs.first().ok_or(Error::EmptySet)?;
    let dim = first.0.dim();
    for (a, b) in pairs {
        if a.dim() != dim || b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: if a.dim() != dim { a.dim() } else { b.dim() },
            });
        }
    }
    let mut union = first.0.clone();
    let mut total = 0usize;
    for (a, b) in pairs {
        union = union.concat(a)?.concat(b)?;
        total += a.len() + b.len();
    }
    let diameter = union.diameter(metric);
    let spacing = 10.0 * total as f64 * if diameter > 0.0 { diameter } else { 1.0 };

    let place = |sets: &mut dyn Iterator<Item = &PointSet>| -> Result<PointSet> {
        let mut coords = Vec::new();
        for (i, set) in (1..).zip(sets) {
            let mut offset = vec![0.0; dim];
            offset[0] = spacing * i as f64;
            coords.extend_from_slice(set.translated(&offset)?.as_flat());
        }
        PointSet::new(dim, coords)
    };
    let a = place(&mut pairs.iter().map(|(a, _)| a))?;
    let b = place(&mut pairs.iter().map(|(_, b)| b))?;
    Ok((a, b))
}

/// Whether any `x ∈ xs`, `y ∈ ys` are orthogonal.
pub fn has_orthogonal_pair(xs: &[BitVector], ys: &[BitVector]) -> bool {
    xs.iter().any(|x| ys.iter().any(|y| x.is_orthogonal(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(p: &PointSet) -> Vec<f64> {
        p.as_flat().to_vec()
    }

    #[test]
    fn single_bit_gadgets() {
        let zero = BitVector::from_bits(&[0]).unwrap();
        let one = BitVector::from_bits(&[1]).unwrap();
        assert_eq!(values(&gadget_a(&zero)), vec![0.0, 2.0, 3.0, 5.0]);
        assert_eq!(values(&gadget_a(&one)), vec![0.0, 1.0, 4.0, 5.0]);
        assert_eq!(values(&gadget_b(&zero)), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(values(&gadget_b(&one)), vec![0.0, 2.0, 3.0, 5.0]);
    }

    #[test]
    fn sizes_and_centre_of_mass() {
        for d in 0..=6 {
            for mask in 0..(1u64 << d) {
                let x = BitVector::from_mask(mask, d);
                let a = gadget_a(&x);
                assert_eq!(a.len(), 2 * d + 2);
                let mean = a.as_flat().iter().sum::<f64>() / a.len() as f64;
                assert_eq!(mean, gadget_width(d) / 2.0);
                let zeros = x.bits().iter().filter(|b| !**b).count();
                assert_eq!(gadget_b(&x).len(), 2 + 4 * zeros + 2 * (d - zeros));
            }
        }
    }

    #[test]
    fn orthogonal_means_subset() {
        for d in 1..=4 {
            for xm in 0..(1u64 << d) {
                for ym in 0..(1u64 << d) {
                    let (x, y) = (BitVector::from_mask(xm, d), BitVector::from_mask(ym, d));
                    let b = values(&gadget_b(&y));
                    let subset = values(&gadget_a(&x)).iter().all(|v| b.contains(v));
                    assert_eq!(subset, x.is_orthogonal(&y));
                }
            }
        }
    }

    #[test]
    fn far_formula_spot_value() {
        assert_eq!(far_translation_value(1, 5.0), 10.0);
        assert_eq!(far_translation_value(1, -5.0), 10.0);
    }

    #[test]
    fn parsing() {
        assert_eq!("0110".parse::<BitVector>().unwrap(), BitVector::from_bits(&[0, 1, 1, 0]).unwrap());
        assert_eq!("1,0".parse::<BitVector>().unwrap(), BitVector::from_bits(&[1, 0]).unwrap());
        assert!("012".parse::<BitVector>().is_err());
        assert!(BitVector::from_bits(&[2]).is_err());
    }

    #[test]
    fn combination_layout() {
        let x = BitVector::from_bits(&[1, 0]).unwrap();
        let y = BitVector::from_bits(&[0, 1]).unwrap();
        let g = GadgetInstance::new(&x, &y).unwrap();
        let pairs = vec![(g.points_a.clone(), g.points_b.clone()); 2];
        let (a, b) = combine_gadgets(&pairs, Metric::L2).unwrap();
        assert_eq!(a.len(), 2 * g.points_a.len());
        assert_eq!(b.len(), 2 * g.points_b.len());
        // N = 2·(6 + 8) points, Δ = 9
        let spacing = 10.0 * 28.0 * 9.0;
        assert_eq!(a.point(0)[0], spacing);
        assert_eq!(a.point(g.points_a.len())[0], 2.0 * spacing);
        assert!(combine_gadgets(&[], Metric::L2).is_err());
        assert!(GadgetInstance::new(&x, &BitVector::from_bits(&[1]).unwrap()).is_err());
    }
}
