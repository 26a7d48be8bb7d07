use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stream_seed, validate_feature_set};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

const TREE_STREAM: u64 = 0x5452_4545;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features examined per split; `None` means `floor(sqrt(p))`.
    pub max_features: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 500,
            max_features: None,
            min_samples_leaf: 1,
            max_depth: None,
            bootstrap: true,
            seed: 42,
        }
    }
}

/// Gini impurity `1 - sum(p_k^2)` of a class-count vector.
pub fn gini(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART tree over the forest's column subset; `feature` in splits is a
/// position within that subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    max_features: usize,
    min_leaf: usize,
    max_depth: Option<usize>,
    nodes: Vec<Node>,
}

struct Best {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Grower<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.y[i]] += 1;
        }
        c
    }

    fn majority(counts: &[usize]) -> usize {
        let mut best = 0;
        for (k, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = k;
            }
        }
        best
    }

    /// Best threshold for one feature: midpoints between consecutive
    /// distinct values, first maximum wins.
    fn best_for_feature(&self, idx: &[usize], f: usize, parent: &[usize]) -> Option<(f64, f64)> {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
        let n = order.len();
        let parent_gini = gini(parent);
        let mut left = vec![0usize; self.n_classes];
        let mut right = parent.to_vec();
        let mut best: Option<(f64, f64)> = None;
        for pos in 0..n - 1 {
            let c = self.y[order[pos]];
            left[c] += 1;
            right[c] -= 1;
            let (v, w) = (self.x[order[pos]][f], self.x[order[pos + 1]][f]);
            if v == w {
                continue;
            }
            let nl = pos + 1;
            let nr = n - nl;
            if nl < self.min_leaf || nr < self.min_leaf {
                continue;
            }
            let child = (nl as f64 * gini(&left) + nr as f64 * gini(&right)) / n as f64;
            let gain = parent_gini - child;
            if best.is_none_or(|(g, _)| gain > g) {
                let mut threshold = v + (w - v) / 2.0;
                // Midpoint can round up to `w` for adjacent floats.
                if threshold >= w {
                    threshold = v;
                }
                best = Some((gain, threshold));
            }
        }
        best
    }

    fn grow(&mut self, idx: &[usize], depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let counts = self.counts(idx);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            class: Self::majority(&counts),
        });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || idx.len() < 2 * self.min_leaf || self.max_depth.is_some_and(|d| depth >= d) {
            return at;
        }

        let p = self.x[0].len();
        let mut order: Vec<usize> = (0..p).collect();
        order.shuffle(rng);
        let mut best: Option<Best> = None;
        let mut examined = 0;
        // The first `max_features` drawn columns compete, ties to the lower
        // column index; further columns are only visited if none of those
        // admits a split.
        let mut pool: Vec<usize> = order[..self.max_features].to_vec();
        pool.sort_unstable();
        let mut rest = order[self.max_features..].iter();
        loop {
            for &f in &pool {
                if let Some((gain, threshold)) = self.best_for_feature(idx, f, &counts) {
                    if best.as_ref().is_none_or(|b| gain > b.gain) {
                        best = Some(Best {
                            gain,
                            feature: f,
                            threshold,
                        });
                    }
                }
            }
            examined += pool.len();
            if best.is_some() || examined >= p {
                break;
            }
            pool = rest.next().into_iter().copied().collect();
        }
        let Some(best) = best else {
            return at;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| self.x[i][best.feature] <= best.threshold);
        let left = self.grow(&l, depth + 1, rng);
        let right = self.grow(&r, depth + 1, rng);
        self.nodes[at] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        at
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    /// 1-based dataset columns the forest was trained on.
    pub features: Vec<usize>,
    pub labels: [String; 2],
    pub config: ForestConfig,
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    fn project(&self, row: &[f64]) -> Vec<f64> {
        self.features.iter().map(|&f| row[f - 1]).collect()
    }

    /// Votes per class for one full-width feature row.
    pub fn votes(&self, row: &[f64]) -> [usize; 2] {
        let x = self.project(row);
        let mut v = [0; 2];
        for t in &self.trees {
            v[t.predict(&x)] += 1;
        }
        v
    }

    /// Majority class index; ties go to class 0.
    pub fn predict_class(&self, row: &[f64]) -> usize {
        let v = self.votes(row);
        usize::from(v[1] > v[0])
    }

    pub fn predict(&self, dataset: &Dataset) -> Result<Vec<String>> {
        if dataset.n_features() < *self.features.iter().max().unwrap_or(&0) {
            return Err(Error::data(format!(
                "dataset has {} features, forest uses column {}",
                dataset.n_features(),
                self.features.iter().max().unwrap()
            )));
        }
        Ok(dataset
            .records()
            .iter()
            .map(|r| self.labels[self.predict_class(&r.features)].clone())
            .collect())
    }
}

/// Fits a forest on the 1-based `features` of `train`. Trees are grown in
/// parallel, each from its own seeded stream, so the result does not depend
/// on the thread count.
pub fn fit_forest(train: &Dataset, features: &[usize], config: &ForestConfig) -> Result<RandomForest> {
    let features = validate_feature_set(features, train.n_features())?;
    if config.n_trees == 0 {
        return Err(Error::arg("n_trees must be at least 1"));
    }
    if config.min_samples_leaf == 0 {
        return Err(Error::arg("min_samples_leaf must be at least 1"));
    }
    if train.len() < 2 {
        return Err(Error::data(format!("training set has {} rows", train.len())));
    }
    let p = features.len();
    let max_features = match config.max_features {
        None => ((p as f64).sqrt().floor() as usize).max(1),
        Some(0) => return Err(Error::arg("max_features must be at least 1")),
        Some(m) => m.min(p),
    };
    let x: Vec<Vec<f64>> = train
        .records()
        .iter()
        .map(|r| features.iter().map(|&f| r.features[f - 1]).collect())
        .collect();
    let y = train.classes();
    let n = x.len();

    let trees: Vec<DecisionTree> = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, TREE_STREAM, t as u64));
            let idx: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let mut g = Grower {
                x: &x,
                y: &y,
                n_classes: 2,
                max_features,
                min_leaf: config.min_samples_leaf,
                max_depth: config.max_depth,
                nodes: Vec::new(),
            };
            g.grow(&idx, 0, &mut rng);
            DecisionTree { nodes: g.nodes }
        })
        .collect();

    Ok(RandomForest {
        features,
        labels: train.labels().clone(),
        config: *config,
        trees,
    })
}
