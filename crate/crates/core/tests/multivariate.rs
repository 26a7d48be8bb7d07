use accentgram_core::stats_mv::{box_m, cda, manova, pillai_f_approx, scatter_matrices};
use accentgram_core::stats_uni::{t_test, GroupSample, TTestVariant};
use accentgram_core::synthetic::{generate_dataset, SyntheticSpec};
use accentgram_core::{Dataset, SpeakerRecord};

fn synthetic(sizes: [usize; 2], p: usize, seed: u64) -> Dataset {
    let mut spec = SyntheticSpec::new(sizes, vec![(1, 0.8), (2, -0.5)], seed);
    spec.n_features = p;
    spec.shifts.retain(|&(f, _)| f <= p);
    generate_dataset(&spec).unwrap()
}

fn map_features(ds: &Dataset, f: impl Fn(usize, f64) -> f64) -> Dataset {
    Dataset::new(
        ds.records()
            .iter()
            .map(|r| SpeakerRecord {
                features: r.features.iter().enumerate().map(|(j, &v)| f(j, v)).collect(),
                ..r.clone()
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn total_scatter_is_between_plus_within() {
    for seed in 0..10 {
        let ds = synthetic([25, 31], 6, seed);
        let sc = scatter_matrices(&ds).unwrap();
        let t = sc.total().unwrap();
        let p = ds.n_features();
        let n = ds.len() as f64;
        let grand: Vec<f64> = (0..p)
            .map(|j| ds.records().iter().map(|r| r.features[j]).sum::<f64>() / n)
            .collect();
        for i in 0..p {
            for j in 0..p {
                let direct: f64 = ds
                    .records()
                    .iter()
                    .map(|r| (r.features[i] - grand[i]) * (r.features[j] - grand[j]))
                    .sum();
                let scale = direct.abs().max(1.0);
                assert!((t[(i, j)] - direct).abs() <= 1e-8 * scale, "seed {seed} ({i},{j})");
            }
        }
    }
}

#[test]
fn one_variable_manova_reduces_to_t_test() {
    for seed in 0..100 {
        let na = 5 + (seed as usize * 7) % 40;
        let nb = 5 + (seed as usize * 13) % 45;
        let ds = synthetic([na, nb], 1, 1_000 + seed);
        let m = manova(&ds).unwrap();
        let [a, b] = ds.feature_by_group(0);
        let t = t_test(
            &GroupSample::new("a", a).unwrap(),
            &GroupSample::new("b", b).unwrap(),
            TTestVariant::Student,
        )
        .unwrap()
        .t;
        let t2 = t * t;
        let n = (na + nb) as f64;
        let v = t2 / (t2 + n - 2.0);
        assert!((m.pillai_v - v).abs() < 1e-6, "seed {seed}: V {} vs {v}", m.pillai_v);
        assert!(
            (m.f_stat - t2).abs() < 1e-6 * t2.max(1.0),
            "seed {seed}: F {} vs {t2}",
            m.f_stat
        );
        assert_eq!((m.df1, m.df2), (1, (na + nb - 2) as u64));
    }
}

#[test]
fn pillai_and_standardized_cda_survive_affine_rescaling() {
    let scales = [3.0, -0.25, 10.0, 1e-3, -7.0];
    let offsets = [100.0, -4.0, 0.5, 2.0, -300.0];
    for seed in 0..5 {
        let ds = synthetic([30, 34], 5, 50 + seed);
        let moved = map_features(&ds, |j, v| scales[j] * v + offsets[j]);
        let (m0, m1) = (manova(&ds).unwrap(), manova(&moved).unwrap());
        assert!((m0.pillai_v - m1.pillai_v).abs() < 1e-8);
        assert!((m0.f_stat - m1.f_stat).abs() < 1e-8 * m0.f_stat.max(1.0));
        let (c0, c1) = (cda(&ds).unwrap(), cda(&moved).unwrap());
        assert!((c0.eigenvalue - c1.eigenvalue).abs() < 1e-8 * c0.eigenvalue.max(1.0));
        for j in 0..5 {
            assert!(
                (c0.std_coeffs[j].abs() - c1.std_coeffs[j].abs()).abs() < 1e-8,
                "seed {seed} coeff {j}: {} vs {}",
                c0.std_coeffs[j],
                c1.std_coeffs[j]
            );
        }
        // Scores agree up to a global sign.
        let sign = (c0.scores[0].score * c1.scores[0].score).signum();
        for (a, b) in c0.scores.iter().zip(&c1.scores) {
            assert!((a.score - sign * b.score).abs() < 1e-8);
        }
    }
}

#[test]
fn cda_scores_have_unit_pooled_variance() {
    let ds = synthetic([40, 45], 4, 9);
    let c = cda(&ds).unwrap();
    let labels = ds.labels();
    let mut ss = 0.0;
    for (g, label) in labels.iter().enumerate() {
        let s: Vec<f64> = c.scores.iter().filter(|s| &s.group == label).map(|s| s.score).collect();
        let m = s.iter().sum::<f64>() / s.len() as f64;
        assert!((m - c.centroids[g].1).abs() < 1e-12);
        ss += s.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    assert!((ss / (ds.len() - 2) as f64 - 1.0).abs() < 1e-9);
    let max = c
        .std_coeffs
        .iter()
        .copied()
        .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    assert!(max > 0.0);
}

#[test]
fn box_m_vanishes_for_shifted_copies() {
    let ds = synthetic([20, 20], 4, 77);
    let first: Vec<SpeakerRecord> = ds.records().iter().filter(|r| r.group == "english").cloned().collect();
    let mut records = first.clone();
    for (i, r) in first.iter().enumerate() {
        records.push(SpeakerRecord {
            speaker_id: format!("copy{i}"),
            group: "mandarin".into(),
            features: r.features.iter().map(|v| v + 2.5).collect(),
        });
    }
    let b = box_m(&Dataset::new(records).unwrap()).unwrap();
    assert!(b.m.abs() < 1e-8, "M = {}", b.m);
    assert!(b.p > 0.999_999);
}

#[test]
fn pillai_fixture_from_reported_manova() {
    let r = pillai_f_approx(0.192, 118, 2, 13).unwrap();
    assert_eq!((r.df1, r.df2), (13, 104));
    assert!((r.f_stat - 1.90).abs() < 0.01, "F = {}", r.f_stat);
}
