use accentgram_core::ml::{compare_models, fit_forest, mcnemar, stratified_split, wilson_ci, ForestConfig, SplitPlan};
use accentgram_core::synthetic::{generate_dataset, SyntheticSpec};
use accentgram_core::{Dataset, SpeakerRecord};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .unwrap()
        .install(f)
}

fn study_sized(seed: u64) -> Dataset {
    generate_dataset(&SyntheticSpec::new([58, 60], vec![(1, 0.5), (2, 0.5), (5, 0.6)], seed)).unwrap()
}

#[test]
fn predictions_do_not_depend_on_thread_count() {
    let ds = study_sized(3);
    let split = stratified_split(&ds, &SplitPlan::default()).unwrap();
    let (train, test) = (ds.subset(&split.train), ds.subset(&split.test));
    let cfg = ForestConfig {
        n_trees: 100,
        ..ForestConfig::default()
    };
    let features: Vec<usize> = (1..=13).collect();
    let one = with_threads(1, || fit_forest(&train, &features, &cfg).unwrap());
    let eight = with_threads(8, || fit_forest(&train, &features, &cfg).unwrap());
    assert_eq!(one, eight);
    assert_eq!(one.predict(&test).unwrap(), eight.predict(&test).unwrap());
}

#[test]
fn separable_groups_are_classified_perfectly() {
    let mut spec = SyntheticSpec::new([40, 40], vec![(1, 12.0), (2, 12.0)], 5);
    spec.n_features = 2;
    let ds = generate_dataset(&spec).unwrap();
    let [a, b] = ds.feature_by_group(0);
    let gap = b.iter().copied().fold(f64::INFINITY, f64::min) - a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(gap >= 5.0, "fixture margin {gap}");
    let cmp = compare_models(&ds, &[1, 2], &[1], &ForestConfig::default(), &SplitPlan::default()).unwrap();
    assert_eq!(cmp.full.accuracy, 1.0);
    assert_eq!(cmp.reduced.accuracy, 1.0);
    let forest = fit_forest(&ds, &[1, 2], &ForestConfig::default()).unwrap();
    let truth: Vec<String> = ds.records().iter().map(|r| r.group.clone()).collect();
    assert_eq!(forest.predict(&ds).unwrap(), truth);
}

#[test]
fn single_class_training_predicts_that_class() {
    let ds = study_sized(8);
    let mandarin: Vec<usize> = (0..ds.len()).filter(|&i| ds.records()[i].group == "mandarin").collect();
    let train = ds.subset(&mandarin);
    let cfg = ForestConfig {
        n_trees: 50,
        ..ForestConfig::default()
    };
    let forest = fit_forest(&train, &[1, 2, 3], &cfg).unwrap();
    assert!(forest.trees().iter().all(|t| t.n_nodes() == 1));
    assert!(forest.predict(&ds).unwrap().iter().all(|p| p == "mandarin"));
}

#[test]
fn permuted_labels_give_chance_accuracy() {
    let mut inside = 0;
    for seed in 0..10u64 {
        let ds = study_sized(100 + seed);
        let mut groups: Vec<String> = ds.records().iter().map(|r| r.group.clone()).collect();
        groups.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted = Dataset::new(
            ds.records()
                .iter()
                .zip(groups)
                .map(|(r, group)| SpeakerRecord { group, ..r.clone() })
                .collect(),
        )
        .unwrap();
        let cfg = ForestConfig {
            seed,
            ..ForestConfig::default()
        };
        let plan = SplitPlan {
            seed,
            ..SplitPlan::default()
        };
        let cmp = compare_models(&permuted, &(1..=13).collect::<Vec<_>>(), &[1, 2, 5], &cfg, &plan).unwrap();
        assert_eq!(cmp.n_test, 35);
        if (0.30..=0.70).contains(&cmp.full.accuracy) {
            inside += 1;
        }
    }
    assert!(inside >= 9, "{inside}/10 inside [0.30, 0.70]");
}

#[test]
fn monotone_transform_leaves_training_predictions_unchanged() {
    let ds = study_sized(21);
    let transformed = Dataset::new(
        ds.records()
            .iter()
            .map(|r| {
                let mut features = r.features.clone();
                features[4] = features[4].exp();
                features[0] = 3.0 * features[0] - 1.0;
                SpeakerRecord { features, ..r.clone() }
            })
            .collect(),
    )
    .unwrap();
    let cfg = ForestConfig {
        n_trees: 60,
        bootstrap: false,
        max_features: Some(2),
        ..ForestConfig::default()
    };
    let f0 = fit_forest(&ds, &[1, 2, 5], &cfg).unwrap();
    let f1 = fit_forest(&transformed, &[1, 2, 5], &cfg).unwrap();
    assert_eq!(f0.predict(&ds).unwrap(), f1.predict(&transformed).unwrap());
}

#[test]
fn identical_models_have_no_discordant_pairs() {
    let ds = study_sized(4);
    let cmp = compare_models(
        &ds,
        &[1, 2, 5],
        &[1, 2, 5],
        &ForestConfig::default(),
        &SplitPlan::default(),
    )
    .unwrap();
    assert_eq!((cmp.mcnemar.b, cmp.mcnemar.c), (0, 0));
    assert_eq!(cmp.mcnemar.p, 1.0);
    assert_eq!(cmp.full.predictions, cmp.reduced.predictions);
}

#[test]
fn evaluations_are_aligned_to_the_same_test_items() {
    let ds = study_sized(6);
    let cmp = compare_models(
        &ds,
        &(1..=13).collect::<Vec<_>>(),
        &[1, 2, 5],
        &ForestConfig::default(),
        &SplitPlan::default(),
    )
    .unwrap();
    assert_eq!(cmp.full.speaker_ids, cmp.reduced.speaker_ids);
    assert_eq!(cmp.full.n_test, 35);
    for e in [&cmp.full, &cmp.reduced] {
        assert_eq!(e.accuracy, e.correct as f64 / e.n_test as f64);
        assert!(e.ci_low <= e.accuracy && e.accuracy <= e.ci_high);
    }
    let m = mcnemar(&cmp.full.predictions, &cmp.reduced.predictions, &cmp.full.truth).unwrap();
    assert_eq!(m, cmp.mcnemar);
}

proptest! {
    #[test]
    fn wilson_contains_estimate_and_narrows(k in 0usize..200, extra in 0usize..200, mult in 2usize..5) {
        let n = k + extra + 1;
        let (lo, hi) = wilson_ci(k, n, 0.95).unwrap();
        let p = k as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        let (lo2, hi2) = wilson_ci(k * mult, n * mult, 0.95).unwrap();
        prop_assert!(hi2 - lo2 < hi - lo);
    }

    #[test]
    fn mcnemar_is_symmetric(bits in proptest::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 1..80)) {
        let lab = |b: bool| if b { "a".to_string() } else { "b".to_string() };
        let truth: Vec<String> = bits.iter().map(|t| lab(t.0)).collect();
        let a: Vec<String> = bits.iter().map(|t| lab(t.1)).collect();
        let b: Vec<String> = bits.iter().map(|t| lab(t.2)).collect();
        let ab = mcnemar(&a, &b, &truth).unwrap();
        let ba = mcnemar(&b, &a, &truth).unwrap();
        prop_assert_eq!((ab.b, ab.c), (ba.c, ba.b));
        prop_assert_eq!(ab.p, ba.p);
        prop_assert!((0.0..=1.0).contains(&ab.p));
    }
}
