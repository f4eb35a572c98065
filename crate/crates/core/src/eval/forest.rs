//! Random forest of CART trees with Gini splits.
//!
//! With `bootstrap = false` every tree trains on the full sample set and
//! randomness enters only through the per-split candidate-feature draw, so a
//! seed pins the whole forest. Trees derive their streams from
//! `(seed, tree index)` and can be built in any order.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::matrix::Matrix;
use crate::rng::{self, RngKey};
use crate::Result;

/// Random-forest hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RfParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub max_features: usize,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
    pub bootstrap: bool,
}

impl Default for RfParams {
    fn default() -> Self {
        RfParams {
            n_trees: 500,
            max_depth: 20,
            max_features: 5,
            min_samples_leaf: 5,
            min_samples_split: 12,
            bootstrap: false,
        }
    }
}

impl RfParams {
    fn validate(&self) -> Result<()> {
        if self.n_trees == 0 || self.max_depth == 0 || self.max_features == 0 {
            return Err(Error::InvalidParam(
                "forest sizes must be positive".into(),
            ));
        }
        if self.min_samples_leaf == 0 || self.min_samples_split < 2 {
            return Err(Error::InvalidParam(
                "min_samples_leaf must be >= 1 and min_samples_split >= 2".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum TreeNode {
    Leaf { vote: u8 },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    fn vote(&self, x: &[f64]) -> u8 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { vote } => return *vote,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }
}

/// A trained forest.
#[derive(Debug, Clone)]
pub struct Forest {
    trees: Vec<Tree>,
    dim: usize,
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Per-tree class votes for one feature vector.
    pub fn tree_votes(&self, x: &[f64]) -> Result<Vec<u8>> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.trees.iter().map(|t| t.vote(x)).collect())
    }

    /// Fraction of trees voting class 1.
    pub fn vote_fraction(&self, x: &[f64]) -> Result<f64> {
        let votes = self.tree_votes(x)?;
        let ones = votes.iter().filter(|&&v| v == 1).count();
        Ok(ones as f64 / votes.len() as f64)
    }
}

struct TreeBuilder<'a> {
    features: &'a Matrix,
    labels: &'a [u8],
    params: &'a RfParams,
    rng: ChaCha8Rng,
    nodes: Vec<TreeNode>,
    feature_pool: Vec<usize>,
    scratch: Vec<(f64, u8)>,
}

impl<'a> TreeBuilder<'a> {
    fn leaf(&mut self, ones: usize, total: usize) -> u32 {
        let vote = u8::from(2 * ones > total);
        self.nodes.push(TreeNode::Leaf { vote });
        (self.nodes.len() - 1) as u32
    }

    /// Draw `max_features` distinct candidate features (all of them when the
    /// pool is smaller).
    fn sample_features(&mut self) -> Vec<usize> {
        let d = self.feature_pool.len();
        let take = self.params.max_features.min(d);
        for i in 0..take {
            let j = i + rng::uniform_index(&mut self.rng, d - i);
            self.feature_pool.swap(i, j);
        }
        self.feature_pool[..take].to_vec()
    }

    fn build(&mut self, samples: &mut [usize], depth: usize) -> u32 {
        let total = samples.len();
        let ones = samples.iter().filter(|&&i| self.labels[i] == 1).count();
        if ones == 0
            || ones == total
            || depth >= self.params.max_depth
            || total < self.params.min_samples_split
        {
            return self.leaf(ones, total);
        }

        let min_leaf = self.params.min_samples_leaf;
        let candidates = self.sample_features();
        let mut best: Option<(f64, usize, f64)> = None; // (weighted gini, feature, threshold)
        for &feature in &candidates {
            self.scratch.clear();
            self.scratch.extend(
                samples
                    .iter()
                    .map(|&i| (self.features.get(i, feature), self.labels[i])),
            );
            self.scratch
                .sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_ones = 0usize;
            for i in 1..total {
                left_ones += (self.scratch[i - 1].1 == 1) as usize;
                if self.scratch[i].0 == self.scratch[i - 1].0 {
                    continue;
                }
                let (nl, nr) = (i, total - i);
                if nl < min_leaf || nr < min_leaf {
                    continue;
                }
                let right_ones = ones - left_ones;
                let gini_l = gini(left_ones, nl);
                let gini_r = gini(right_ones, nr);
                let weighted = (nl as f64 * gini_l + nr as f64 * gini_r) / total as f64;
                if best.map_or(true, |(w, _, _)| weighted < w) {
                    let threshold = 0.5 * (self.scratch[i - 1].0 + self.scratch[i].0);
                    best = Some((weighted, feature, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            return self.leaf(ones, total);
        };

        // partition in place, preserving relative order for determinism
        let mut ordered: Vec<usize> = samples
            .iter()
            .copied()
            .filter(|&i| self.features.get(i, feature) <= threshold)
            .collect();
        let split_at = ordered.len();
        ordered.extend(
            samples
                .iter()
                .copied()
                .filter(|&i| self.features.get(i, feature) > threshold),
        );
        samples.copy_from_slice(&ordered);

        let id = self.nodes.len() as u32;
        self.nodes.push(TreeNode::Split {
            feature: feature as u32,
            threshold,
            left: 0,
            right: 0,
        });
        let (left_samples, right_samples) = samples.split_at_mut(split_at);
        let left = self.build(left_samples, depth + 1);
        let right = self.build(right_samples, depth + 1);
        if let TreeNode::Split { left: l, right: r, .. } = &mut self.nodes[id as usize] {
            *l = left;
            *r = right;
        }
        id
    }
}

#[inline]
fn gini(ones: usize, total: usize) -> f64 {
    let p = ones as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

/// Train a forest. Tree `t` uses the stream `(seed, t)`.
pub fn train_forest(
    params: &RfParams,
    features: &Matrix,
    labels: &[u8],
    seed: u64,
) -> Result<Forest> {
    params.validate()?;
    let n = features.rows();
    if n != labels.len() {
        return Err(Error::DimMismatch {
            expected: n,
            got: labels.len(),
        });
    }
    if n < 2 {
        return Err(Error::InsufficientData(
            "forest training needs at least 2 rows".into(),
        ));
    }
    let key = RngKey::new(seed);
    let mut trees = Vec::with_capacity(params.n_trees);
    for t in 0..params.n_trees {
        let mut rng = key.child(t as u64).rng();
        let mut samples: Vec<usize> = if params.bootstrap {
            (0..n).map(|_| rng::uniform_index(&mut rng, n)).collect()
        } else {
            (0..n).collect()
        };
        let mut builder = TreeBuilder {
            features,
            labels,
            params,
            rng,
            nodes: Vec::new(),
            feature_pool: (0..features.cols()).collect(),
            scratch: Vec::with_capacity(n),
        };
        builder.build(&mut samples, 0);
        trees.push(Tree {
            nodes: builder.nodes,
        });
    }
    Ok(Forest {
        trees,
        dim: features.cols(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pure_node_becomes_leaf() {
        let features = Matrix::from_vec(4, 1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let forest = train_forest(
            &RfParams {
                n_trees: 3,
                ..RfParams::default()
            },
            &features,
            &[1, 1, 1, 1],
            0,
        );
        // single-class labels are legal here; the eval::train wrapper rejects
        // them earlier, but the tree itself just grows a single leaf
        let forest = forest.unwrap();
        assert_eq!(forest.vote_fraction(&[1.5]).unwrap(), 1.0);
    }

    #[test]
    fn splits_a_clean_threshold() {
        let features = Matrix::from_vec(20, 1, (0..20).map(|i| i as f64).collect()).unwrap();
        let labels: Vec<u8> = (0..20).map(|i| (i >= 10) as u8).collect();
        let params = RfParams {
            n_trees: 5,
            min_samples_split: 2,
            min_samples_leaf: 1,
            ..RfParams::default()
        };
        let forest = train_forest(&params, &features, &labels, 1).unwrap();
        assert_eq!(forest.vote_fraction(&[2.0]).unwrap(), 0.0);
        assert_eq!(forest.vote_fraction(&[17.0]).unwrap(), 1.0);
    }

    #[test]
    fn respects_min_samples_leaf() {
        // 6 points, min leaf 3: only the middle split is allowed
        let features = Matrix::from_vec(6, 1, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let labels = [0, 0, 0, 1, 1, 1];
        let params = RfParams {
            n_trees: 1,
            max_features: 1,
            min_samples_leaf: 3,
            min_samples_split: 2,
            ..RfParams::default()
        };
        let forest = train_forest(&params, &features, &labels, 0).unwrap();
        assert_eq!(forest.vote_fraction(&[2.4]).unwrap(), 0.0);
        assert_eq!(forest.vote_fraction(&[2.6]).unwrap(), 1.0);
    }

    #[test]
    fn bootstrap_resamples_rows() {
        let features = Matrix::from_vec(30, 1, (0..30).map(|i| i as f64).collect()).unwrap();
        let labels: Vec<u8> = (0..30).map(|i| (i >= 15) as u8).collect();
        let params = RfParams {
            n_trees: 20,
            bootstrap: true,
            min_samples_split: 2,
            min_samples_leaf: 1,
            ..RfParams::default()
        };
        let forest = train_forest(&params, &features, &labels, 5).unwrap();
        assert!(forest.vote_fraction(&[29.0]).unwrap() > 0.9);
        assert!(forest.vote_fraction(&[0.0]).unwrap() < 0.1);
    }
}
