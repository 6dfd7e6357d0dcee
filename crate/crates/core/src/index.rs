//! Exact nearest-neighbour indexes over a [`PointSet`].
//!
//! Both backends return the same `(distance, index)` pair for every query,
//! including ties: the lowest index in the indexed set wins. The kd-tree
//! prunes only when a node's rectangle bound is *strictly* larger than the
//! current best, so equidistant points in sibling subtrees are still visited.

use std::cmp::Ordering;

use crate::error::Result;
use crate::metric::Metric;
use crate::point_set::PointSet;

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Brute,
    KdTree,
    /// kd-tree for sets large enough to benefit, brute scan otherwise.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub distance: f64,
    pub index: usize,
}

impl Neighbor {
    const NONE: Neighbor = Neighbor {
        distance: f64::INFINITY,
        index: usize::MAX,
    };

    #[inline]
    fn offer(&mut self, distance: f64, index: usize) {
        if distance < self.distance || (distance == self.distance && index < self.index) {
            self.distance = distance;
            self.index = index;
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct KdTree {
    nodes: Vec<Node>,
    /// Per node: `dim` lows followed by `dim` highs.
    bounds: Vec<f64>,
    order: Vec<usize>,
}

/// Exact nearest-neighbour index over a point set.
#[derive(Debug, Clone)]
pub struct NearestIndex {
    source: PointSet,
    metric: Metric,
    tree: Option<KdTree>,
}

impl NearestIndex {
    pub fn build(source: &PointSet, metric: Metric, backend: Backend) -> NearestIndex {
        let use_tree = match backend {
            Backend::Brute => false,
            Backend::KdTree => true,
            Backend::Auto => source.len() >= 64 && source.dim() <= 12,
        };
        let tree = use_tree.then(|| KdTree::build(source));
        NearestIndex {
            source: source.clone(),
            metric,
            tree,
        }
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn backend(&self) -> Backend {
        if self.tree.is_some() {
            Backend::KdTree
        } else {
            Backend::Brute
        }
    }

    /// Exact nearest neighbour of `query`; ties go to the lowest index.
    pub fn nearest(&self, query: &[f64]) -> Neighbor {
        debug_assert_eq!(query.len(), self.source.dim());
        match &self.tree {
            Some(tree) => tree.nearest(&self.source, self.metric, query),
            None => brute_nearest(&self.source, self.metric, query),
        }
    }

    /// Validating wrapper around [`NearestIndex::nearest`].
    pub fn query(&self, query: &[f64]) -> Result<Neighbor> {
        self.source.check_vector(query)?;
        Ok(self.nearest(query))
    }
}

fn brute_nearest(source: &PointSet, metric: Metric, query: &[f64]) -> Neighbor {
    let mut best = Neighbor::NONE;
    for (j, p) in source.iter().enumerate() {
        best.offer(metric.distance(query, p), j);
    }
    best
}

impl KdTree {
    fn build(source: &PointSet) -> KdTree {
        let mut tree = KdTree {
            nodes: Vec::new(),
            bounds: Vec::new(),
            order: (0..source.len()).collect(),
        };
        let n = source.len();
        tree.build_node(source, 0, n);
        tree
    }

    fn build_node(&mut self, source: &PointSet, start: usize, end: usize) -> usize {
        let dim = source.dim();
        let id = self.nodes.len();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (axis, &x) in source.point(i).iter().enumerate() {
                lo[axis] = lo[axis].min(x);
                hi[axis] = hi[axis].max(x);
            }
        }
        self.bounds.extend_from_slice(&lo);
        self.bounds.extend_from_slice(&hi);
        self.nodes.push(Node::Leaf { start, end });

        let (axis, spread) = (0..dim)
            .map(|a| (a, hi[a] - lo[a]))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((0, 0.0));
        if end - start <= LEAF_SIZE || spread <= 0.0 {
            return id;
        }

        let mid = start + (end - start) / 2;
        self.order[start..end].select_nth_unstable_by(mid - start, |&i, &j| {
            source.point(i)[axis]
                .total_cmp(&source.point(j)[axis])
                .then(i.cmp(&j))
        });
        let value = source.point(self.order[mid])[axis];
        let left = self.build_node(source, start, mid);
        let right = self.build_node(source, mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    fn nearest(&self, source: &PointSet, metric: Metric, query: &[f64]) -> Neighbor {
        let mut best = Neighbor::NONE;
        self.search(0, source, metric, query, &mut best);
        best
    }

    fn rect_bound(&self, node: usize, metric: Metric, query: &[f64]) -> f64 {
        let dim = query.len();
        let base = node * 2 * dim;
        let lo = &self.bounds[base..base + dim];
        let hi = &self.bounds[base + dim..base + 2 * dim];
        let mut acc = 0.0;
        for axis in 0..dim {
            let q = query[axis];
            let gap = if q < lo[axis] {
                q - lo[axis]
            } else if q > hi[axis] {
                q - hi[axis]
            } else {
                0.0
            };
            acc = metric.accumulate(acc, gap);
        }
        metric.finish(acc)
    }

    fn search(
        &self,
        node: usize,
        source: &PointSet,
        metric: Metric,
        query: &[f64],
        best: &mut Neighbor,
    ) {
        if self.rect_bound(node, metric, query) > best.distance {
            return;
        }
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    best.offer(metric.distance(query, source.point(i)), i);
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let (near, far) = match query[axis].partial_cmp(&value) {
                    Some(Ordering::Less) => (left, right),
                    _ => (right, left),
                };
                self.search(near, source, metric, query, best);
                self.search(far, source, metric, query, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize, grid: bool) -> PointSet {
        let coords = (0..n * d)
            .map(|_| {
                if grid {
                    // coarse lattice to force plenty of exact ties
                    rng.random_range(-3i32..=3) as f64
                } else {
                    rng.random_range(-50.0..50.0)
                }
            })
            .collect();
        PointSet::new(d, coords).unwrap()
    }

    #[test]
    fn simple_queries() {
        let b = PointSet::from_rows(&[[0.0, 0.0], [10.0, 0.0]]).unwrap();
        for backend in [Backend::Brute, Backend::KdTree] {
            let index = NearestIndex::build(&b, Metric::L2, backend);
            let hit = index.nearest(&[1.0, 0.0]);
            assert_eq!((hit.distance, hit.index), (1.0, 0));
            assert_eq!(index.nearest(&[10.0, 0.0]).distance, 0.0);
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let b = PointSet::from_1d(&[2.0, -2.0, 2.0, -2.0]).unwrap();
        for backend in [Backend::Brute, Backend::KdTree] {
            let index = NearestIndex::build(&b, Metric::L1, backend);
            assert_eq!(index.nearest(&[0.0]).index, 0);
            assert_eq!(index.nearest(&[-2.0]).index, 1);
        }
    }

    #[test]
    fn kd_tree_matches_brute_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..100 {
            let n = rng.random_range(1..=200);
            let d = rng.random_range(1..=8);
            let grid = round % 3 == 0;
            let b = random_set(&mut rng, n, d, grid);
            let queries = random_set(&mut rng, 50, d, grid);
            for metric in [Metric::L1, Metric::L2, Metric::LInf] {
                let brute = NearestIndex::build(&b, metric, Backend::Brute);
                let tree = NearestIndex::build(&b, metric, Backend::KdTree);
                for q in queries.iter() {
                    let x = brute.nearest(q);
                    let y = tree.nearest(q);
                    assert_eq!(x, y, "metric {metric}, n {n}, d {d}");
                }
            }
        }
    }

    #[test]
    fn query_checks_dimension() {
        let b = PointSet::from_1d(&[0.0]).unwrap();
        let index = NearestIndex::build(&b, Metric::L2, Backend::Auto);
        assert!(index.query(&[0.0, 1.0]).is_err());
    }
}
