//! Exact k-nearest-neighbors over a KD-tree.
//!
//! The index is exact by contract: query results are identical to a
//! brute-force scan, including the tie rule (equal distances break toward
//! the lower stored index). That exactness is load-bearing — the KDE-KNN
//! validator and the DCR privacy metric both promise oracle equivalence.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::Error;
use crate::matrix::{sq_dist, Matrix};
use crate::Result;

const LEAF_SIZE: usize = 24;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: u32, end: u32 },
    Split { dim: u32, value: f64, left: u32, right: u32 },
}

/// Exact KD-tree over the rows of a matrix.
#[derive(Debug, Clone)]
pub struct KdTree {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

/// Max-heap entry ordered by (squared distance, index): the root is the
/// current worst candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    sq: f64,
    idx: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.sq
            .total_cmp(&other.sq)
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl KdTree {
    /// Build the index over all rows of `points`.
    pub fn build(points: &Matrix) -> KdTree {
        let n = points.rows();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut nodes = Vec::new();
        if n > 0 {
            build_node(points, &mut order, 0, n, &mut nodes);
        }
        KdTree { nodes, order }
    }

    /// The `k` exact nearest rows to `x`, sorted ascending by
    /// (distance, index). Distances are Euclidean.
    pub fn kneighbors(&self, points: &Matrix, x: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
        if x.len() != points.cols() {
            return Err(Error::DimMismatch {
                expected: points.cols(),
                got: x.len(),
            });
        }
        if k == 0 || k > points.rows() {
            return Err(Error::InvalidParam(format!(
                "k must lie in 1..={}, got {k}",
                points.rows()
            )));
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        self.search(points, x, k, 0, &mut heap);
        let mut found: Vec<Candidate> = heap.into_vec();
        found.sort_unstable();
        Ok(found
            .into_iter()
            .map(|c| (c.idx as usize, c.sq.sqrt()))
            .collect())
    }

    fn search(&self, points: &Matrix, x: &[f64], k: usize, node: u32, heap: &mut BinaryHeap<Candidate>) {
        match &self.nodes[node as usize] {
            Node::Leaf { start, end } => {
                for &idx in &self.order[*start as usize..*end as usize] {
                    let cand = Candidate {
                        sq: sq_dist(x, points.row(idx as usize)),
                        idx,
                    };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = x[*dim as usize] - value;
                let (near, far) = if diff <= 0.0 { (*left, *right) } else { (*right, *left) };
                self.search(points, x, k, near, heap);
                // A far-side point can still tie the current worst and win on
                // index, so the bound is non-strict.
                let bound = diff * diff;
                if heap.len() < k || bound <= heap.peek().expect("heap is full").sq {
                    self.search(points, x, k, far, heap);
                }
            }
        }
    }
}

fn build_node(points: &Matrix, order: &mut [u32], start: usize, end: usize, nodes: &mut Vec<Node>) -> u32 {
    let id = nodes.len() as u32;
    let len = end - start;
    let slice = &mut order[start..end];

    // widest dimension of this subset; zero spread means all points coincide
    let d = points.cols();
    let mut best_dim = 0;
    let mut best_spread = -1.0;
    for dim in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in slice.iter() {
            let v = points.get(i as usize, dim);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let spread = hi - lo;
        if spread > best_spread {
            best_spread = spread;
            best_dim = dim;
        }
    }

    if len <= LEAF_SIZE || best_spread <= 0.0 {
        nodes.push(Node::Leaf {
            start: start as u32,
            end: end as u32,
        });
        return id;
    }

    let mid = len / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        points
            .get(a as usize, best_dim)
            .total_cmp(&points.get(b as usize, best_dim))
    });
    let value = points.get(slice[mid] as usize, best_dim);

    nodes.push(Node::Split {
        dim: best_dim as u32,
        value,
        left: 0,
        right: 0,
    });
    let left = build_node(points, order, start, start + mid, nodes);
    let right = build_node(points, order, start + mid, end, nodes);
    if let Node::Split { left: l, right: r, .. } = &mut nodes[id as usize] {
        *l = left;
        *r = right;
    }
    id
}

/// KNN classifier: stored points, binary labels, neighbor count `k`, and the
/// exact index. Immutable after fit; queries are read-only.
#[derive(Debug, Clone)]
pub struct KnnModel {
    points: Matrix,
    labels: Vec<u8>,
    k: usize,
    tree: KdTree,
}

impl KnnModel {
    pub fn fit(points: Matrix, labels: Vec<u8>, k: usize) -> Result<KnnModel> {
        let n = points.rows();
        if n == 0 {
            return Err(Error::InsufficientData("KNN fit needs at least 1 point".into()));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParam(format!(
                "k must lie in 1..={n}, got {k}"
            )));
        }
        if labels.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::InvalidParam("labels must be 0 or 1".into()));
        }
        let tree = KdTree::build(&points);
        Ok(KnnModel {
            points,
            labels,
            k,
            tree,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.points.rows()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// The `k` exact nearest stored points to `x`.
    pub fn kneighbors(&self, x: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
        self.tree.kneighbors(&self.points, x, k)
    }

    /// Majority label among the model's `k` nearest neighbors. An even split
    /// falls back to the single nearest neighbor's label.
    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        let neighbors = self.kneighbors(x, self.k)?;
        let ones = neighbors
            .iter()
            .filter(|(i, _)| self.labels[*i] == 1)
            .count();
        let zeros = neighbors.len() - ones;
        Ok(if ones > zeros {
            1
        } else if zeros > ones {
            0
        } else {
            self.labels[neighbors[0].0]
        })
    }
}
