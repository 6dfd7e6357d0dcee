mod common;

use cdut::{cdut_exact_1d, chamfer_translated, oracle_cdut_1d, Metric, PointSet};
use common::{close, instance_1d, rng};
use proptest::prelude::*;
use rand::Rng;

fn per_point_distances(a: &PointSet, b: &PointSet, t: f64) -> Vec<f64> {
    a.as_flat()
        .iter()
        .map(|x| b.as_flat().iter().map(|y| (x + t - y).abs()).fold(f64::INFINITY, f64::min))
        .collect()
}

#[test]
fn difference_candidates_give_factor_two() {
    let mut rng = rng(100);
    for _ in 0..200 {
        let (a, b) = instance_1d(&mut rng, 20);
        let opt = cdut_exact_1d(&a, &b).unwrap().value;
        let mut best = f64::INFINITY;
        for x in a.as_flat() {
            for y in b.as_flat() {
                best = best.min(chamfer_translated(&a, &[y - x], &b, Metric::L1).unwrap().value);
            }
        }
        assert!(best >= opt - 1e-9 * opt.max(1.0));
        assert!(best <= 2.0 * opt + 1e-9);
    }
}

#[test]
fn closest_candidate_is_within_average_cost() {
    let mut rng = rng(101);
    for _ in 0..200 {
        let (a, b) = instance_1d(&mut rng, 20);
        let r = cdut_exact_1d(&a, &b).unwrap();
        let (opt, t) = (r.value, r.translation[0]);
        let m = a.len() as f64;
        let gap = a
            .as_flat()
            .iter()
            .flat_map(|x| b.as_flat().iter().map(move |y| ((y - x) - t).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(gap <= opt / m + 1e-12 * opt.max(1.0), "{gap} > {}", opt / m);
    }
}

#[test]
fn many_points_are_nearly_average() {
    let mut rng = rng(102);
    for _ in 0..200 {
        let (a, b) = instance_1d(&mut rng, 20);
        let r = cdut_exact_1d(&a, &b).unwrap();
        let m = a.len();
        let dists = per_point_distances(&a, &b, r.translation[0]);
        for eps in [0.2, 0.5, 1.0] {
            let limit = (1.0 + eps) * r.value / m as f64;
            let count = dists.iter().filter(|&&d| d <= limit * (1.0 + 1e-12)).count();
            assert!(count >= (m as f64 * eps / 2.0).floor() as usize);
        }
    }
}

#[test]
fn shifting_the_optimum_costs_at_most_m_per_unit() {
    let mut rng = rng(103);
    for _ in 0..200 {
        let (a, b) = instance_1d(&mut rng, 20);
        let r = cdut_exact_1d(&a, &b).unwrap();
        let m = a.len() as f64;
        for k in [0.5, 1.0, 3.0] {
            let radius = k / m * r.value;
            let t = r.translation[0] + rng.random_range(-1.0..=1.0) * radius;
            let v = chamfer_translated(&a, &[t], &b, Metric::L2).unwrap().value;
            assert!(v <= (1.0 + k) * r.value + 1e-9);
        }
    }
}

#[test]
fn sweep_agrees_with_scan_oracle() {
    let mut rng = rng(104);
    for _ in 0..500 {
        let (a, b) = instance_1d(&mut rng, 30);
        let sweep = cdut_exact_1d(&a, &b).unwrap();
        let oracle = oracle_cdut_1d(&a, &b).unwrap();
        assert!(close(sweep.value, oracle.value, 1e-9));
        assert!(close(sweep.recompute(&a, &b, Metric::L2), sweep.value, 1e-12));
    }
}

proptest! {
    #[test]
    fn sweep_is_optimal_on_integer_inputs(
        a in prop::collection::vec(-20i32..20, 1..12),
        b in prop::collection::vec(-20i32..20, 1..12),
    ) {
        let a = PointSet::from_1d(&a.iter().map(|&x| f64::from(x)).collect::<Vec<_>>()).unwrap();
        let b = PointSet::from_1d(&b.iter().map(|&x| f64::from(x)).collect::<Vec<_>>()).unwrap();
        let sweep = cdut_exact_1d(&a, &b).unwrap();
        let oracle = oracle_cdut_1d(&a, &b).unwrap();
        prop_assert_eq!(sweep.value, oracle.value);
        // a half-integer grid contains every breakpoint of the objective
        for k in -160..=160 {
            let t = f64::from(k) / 4.0;
            let v = chamfer_translated(&a, &[t], &b, Metric::L2).unwrap().value;
            prop_assert!(v >= sweep.value);
        }
    }

    #[test]
    fn optimum_is_translation_invariant(
        a in prop::collection::vec(-50i32..50, 1..10),
        b in prop::collection::vec(-50i32..50, 1..10),
        shift in -30i32..30,
    ) {
        let to = |v: &[i32], s: i32| PointSet::from_1d(&v.iter().map(|&x| f64::from(x + s)).collect::<Vec<_>>()).unwrap();
        let base = cdut_exact_1d(&to(&a, 0), &to(&b, 0)).unwrap();
        let moved = cdut_exact_1d(&to(&a, shift), &to(&b, 0)).unwrap();
        prop_assert_eq!(base.value, moved.value);
        prop_assert_eq!(base.translation[0] - f64::from(shift), moved.translation[0]);
    }
}
