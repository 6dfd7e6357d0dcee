//! Geometric median by Weiszfeld iteration.
//!
//! Iterates landing on a data point are handled with the Vardi–Zhang
//! modification: the data point is accepted when the pull of the remaining
//! points does not exceed its multiplicity, otherwise the step is damped away
//! from it instead of dividing by zero.

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::point_set::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub struct MedianResult {
    pub point: Vec<f64>,
    /// Σ ‖p − point‖ over the input.
    pub total_distance: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Σ ‖p − x‖₂ over `points`.
pub fn total_distance(points: &PointSet, x: &[f64]) -> f64 {
    points.iter().map(|p| Metric::L2.distance(p, x)).sum()
}

/// Approximate geometric median; stops once an iterate moves by less than
/// `accuracy / 2` or after `10·m·d + 1000` iterations.
pub fn geometric_median(points: &PointSet, accuracy: f64) -> Result<MedianResult> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(accuracy.is_finite() && accuracy > 0.0) {
        return Err(Error::invalid("accuracy", "must be positive"));
    }
    let dim = points.dim();
    let m = points.len();
    let cap = 10 * m * dim + 1000;

    let mut y = vec![0.0; dim];
    for p in points.iter() {
        for (yi, x) in y.iter_mut().zip(p) {
            *yi += x;
        }
    }
    y.iter_mut().for_each(|yi| *yi /= m as f64);

    let mut numer = vec![0.0; dim];
    let mut pull = vec![0.0; dim];
    let mut next = vec![0.0; dim];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cap {
        iterations += 1;
        numer.fill(0.0);
        pull.fill(0.0);
        let mut weight = 0.0;
        let mut coincident = 0.0;
        for p in points.iter() {
            let d = Metric::L2.distance(p, &y);
            if d == 0.0 {
                coincident += 1.0;
                continue;
            }
            let w = 1.0 / d;
            weight += w;
            for axis in 0..dim {
                numer[axis] += p[axis] * w;
                pull[axis] += (p[axis] - y[axis]) * w;
            }
        }
        if weight == 0.0 {
            // every point sits on y
            converged = true;
            break;
        }
        let pull_norm = Metric::L2.norm(&pull);
        if coincident > 0.0 && pull_norm <= coincident {
            // subgradient condition: y is optimal
            converged = true;
            break;
        }
        let damp = if coincident > 0.0 {
            (coincident / pull_norm).min(1.0)
        } else {
            0.0
        };
        for axis in 0..dim {
            next[axis] = (1.0 - damp) * numer[axis] / weight + damp * y[axis];
        }
        let step = Metric::L2.distance(&next, &y);
        std::mem::swap(&mut y, &mut next);
        if step < accuracy / 2.0 {
            converged = true;
            break;
        }
    }
    Ok(MedianResult {
        total_distance: total_distance(points, &y),
        point: y,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_corners() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let r = geometric_median(&p, 1e-9).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-6 && (r.point[1] - 0.5).abs() < 1e-6);
        assert!((r.total_distance - 2.0 * 2f64.sqrt()).abs() < 1e-5);
        assert!(r.converged);
    }

    #[test]
    fn one_dimensional_median() {
        let p = PointSet::from_1d(&[0.0, 2.0, 10.0]).unwrap();
        let r = geometric_median(&p, 1e-6).unwrap();
        assert!((r.total_distance - 10.0).abs() <= 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn data_point_median_is_accepted() {
        // the mean is exactly the middle data point, which is optimal
        let p = PointSet::from_1d(&[-1.0, 0.0, 1.0]).unwrap();
        let r = geometric_median(&p, 1e-9).unwrap();
        assert_eq!(r.point, vec![0.0]);
        assert_eq!(r.total_distance, 2.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn non_optimal_data_point_is_left() {
        // the mean (1, 0) coincides with a data point that is not the median
        let p = PointSet::from_rows(&[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [4.0, 0.0], [1.0, 0.0]])
            .unwrap();
        let r = geometric_median(&p, 1e-9).unwrap();
        assert!((r.total_distance - 5.0).abs() < 1e-6);
    }

    #[test]
    fn single_and_repeated_points() {
        let p = PointSet::from_rows(&[[3.0, -1.0], [3.0, -1.0]]).unwrap();
        let r = geometric_median(&p, 1e-6).unwrap();
        assert_eq!(r.point, vec![3.0, -1.0]);
        assert_eq!(r.total_distance, 0.0);
    }

    #[test]
    fn beats_local_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let p = PointSet::new(3, (0..90).map(|_| rng.random_range(-10.0..10.0)).collect()).unwrap();
            let accuracy = 1e-4;
            let r = geometric_median(&p, accuracy).unwrap();
            let mut best = f64::INFINITY;
            let h = 0.01;
            for i in -10..=10 {
                for j in -10..=10 {
                    for k in -10..=10 {
                        let q = [
                            r.point[0] + i as f64 * h,
                            r.point[1] + j as f64 * h,
                            r.point[2] + k as f64 * h,
                        ];
                        best = best.min(total_distance(&p, &q));
                    }
                }
            }
            assert!(r.total_distance <= best + accuracy, "{} vs {best}", r.total_distance);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let p = PointSet::from_1d(&[1.0]).unwrap();
        assert!(geometric_median(&p, 0.0).is_err());
    }
}
