//! Random-forest classification of speakers and paired comparison of two
//! feature subsets.

mod eval;
mod forest;
mod split;

pub use eval::{
    compare_models, mcnemar, repeated_compare, wilson_ci, ClassifierEval, Comparison, McNemarMethod, McNemarResult,
    RepeatedComparison,
};
pub use forest::{fit_forest, gini, DecisionTree, ForestConfig, RandomForest};
pub use split::{stratified_split, Split, SplitPlan};

/// Derives an independent 64-bit seed for stream `index` under `tag`.
///
/// SplitMix64 finalizer applied to a counter-style combination of the
/// inputs, so every tree (or split) gets its own reproducible generator
/// regardless of the order in which threads run.
pub(crate) fn stream_seed(seed: u64, tag: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(tag.wrapping_mul(0x1_0000_0001) ^ mix(index)))
}

/// Parses and validates 1-based feature indices.
pub fn validate_feature_set(features: &[usize], n_features: usize) -> crate::Result<Vec<usize>> {
    if features.is_empty() {
        return Err(crate::Error::arg("feature set is empty"));
    }
    let mut seen = Vec::with_capacity(features.len());
    for &f in features {
        if f == 0 || f > n_features {
            return Err(crate::Error::arg(format!("feature index {f} outside 1..={n_features}")));
        }
        if seen.contains(&f) {
            return Err(crate::Error::arg(format!("feature index {f} listed twice")));
        }
        seen.push(f);
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_seeds_differ() {
        let a = stream_seed(42, 1, 0);
        assert_ne!(a, stream_seed(42, 1, 1));
        assert_ne!(a, stream_seed(42, 2, 0));
        assert_ne!(a, stream_seed(43, 1, 0));
        assert_eq!(a, stream_seed(42, 1, 0));
    }

    #[test]
    fn feature_set_validation() {
        assert_eq!(validate_feature_set(&[1, 2, 5], 13).unwrap(), vec![1, 2, 5]);
        assert!(validate_feature_set(&[0], 13).is_err());
        assert!(validate_feature_set(&[14], 13).is_err());
        assert!(validate_feature_set(&[2, 2], 13).is_err());
        assert!(validate_feature_set(&[], 13).is_err());
    }
}
