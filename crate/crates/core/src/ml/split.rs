use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::stream_seed;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

const SPLIT_STREAM: u64 = 0x0053_504c_4954;

/// Stratified hold-out protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitPlan {
    fn default() -> Self {
        Self {
            test_fraction: 0.30,
            seed: 42,
        }
    }
}

impl SplitPlan {
    /// `round(n_i * fraction)` for each group.
    pub fn test_counts(&self, group_sizes: [usize; 2]) -> [usize; 2] {
        group_sizes.map(|n| (n as f64 * self.test_fraction).round() as usize)
    }
}

/// Record indices (into the source dataset) of each partition, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded per-group shuffle; the first `round(n_i * fraction)` shuffled
/// members of each group go to the test set.
pub fn stratified_split(dataset: &Dataset, plan: &SplitPlan) -> Result<Split> {
    if !(plan.test_fraction > 0.0 && plan.test_fraction < 1.0) {
        return Err(Error::arg(format!(
            "test fraction must lie in (0, 1), got {}",
            plan.test_fraction
        )));
    }
    let classes = dataset.classes();
    let sizes = dataset.group_sizes();
    let counts = plan.test_counts(sizes);
    let labels = dataset.labels();
    for g in 0..2 {
        if counts[g] < 2 || sizes[g] - counts[g] < 2 {
            return Err(Error::data(format!(
                "group {}: {} test / {} train members; need at least 2 on each side",
                labels[g],
                counts[g],
                sizes[g] - counts[g]
            )));
        }
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for g in 0..2 {
        let mut members: Vec<usize> = (0..classes.len()).filter(|&i| classes[i] == g).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(plan.seed, SPLIT_STREAM, g as u64));
        members.shuffle(&mut rng);
        test.extend_from_slice(&members[..counts[g]]);
        train.extend_from_slice(&members[counts[g]..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SpeakerRecord;

    fn dataset(na: usize, nb: usize) -> Dataset {
        let records = (0..na + nb)
            .map(|i| SpeakerRecord {
                speaker_id: format!("s{i:03}"),
                group: if i < na { "english" } else { "mandarin" }.into(),
                features: vec![i as f64],
            })
            .collect();
        Dataset::new(records).unwrap()
    }

    #[test]
    fn study_sized_counts() {
        let ds = dataset(58, 60);
        let plan = SplitPlan::default();
        assert_eq!(plan.test_counts(ds.group_sizes()), [17, 18]);
        let split = stratified_split(&ds, &plan).unwrap();
        assert_eq!(split.test.len(), 35);
        assert_eq!(split.train.len(), 83);
        let mut all: Vec<usize> = split.train.iter().chain(&split.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..118).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_per_seed() {
        let ds = dataset(20, 20);
        let a = stratified_split(&ds, &SplitPlan::default()).unwrap();
        let b = stratified_split(&ds, &SplitPlan::default()).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(
            &ds,
            &SplitPlan {
                seed: 7,
                ..SplitPlan::default()
            },
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_degenerate_fractions() {
        let ds = dataset(20, 20);
        for f in [0.0, 1.0, -0.1] {
            let plan = SplitPlan {
                test_fraction: f,
                seed: 1,
            };
            assert!(stratified_split(&ds, &plan).is_err());
        }
        let tiny = SplitPlan {
            test_fraction: 0.05,
            seed: 1,
        };
        assert!(stratified_split(&ds, &tiny).is_err());
    }
}
