use serde::{Deserialize, Serialize};

use super::{fit_forest, stratified_split, stream_seed, ForestConfig, SplitPlan};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::special::{chisq_sf, normal_quantile};

const REPEAT_STREAM: u64 = 0x5245_5045_4154;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierEval {
    /// 1-based MFCC indices.
    pub feature_set: Vec<usize>,
    pub speaker_ids: Vec<String>,
    pub truth: Vec<String>,
    pub predictions: Vec<String>,
    pub correct: usize,
    pub n_test: usize,
    pub accuracy: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl ClassifierEval {
    fn from_predictions(
        feature_set: Vec<usize>,
        test: &Dataset,
        predictions: Vec<String>,
        confidence: f64,
    ) -> Result<Self> {
        let truth: Vec<String> = test.records().iter().map(|r| r.group.clone()).collect();
        let correct = truth.iter().zip(&predictions).filter(|(t, p)| t == p).count();
        let n_test = truth.len();
        let (ci_low, ci_high) = wilson_ci(correct, n_test, confidence)?;
        Ok(Self {
            feature_set,
            speaker_ids: test.records().iter().map(|r| r.speaker_id.clone()).collect(),
            truth,
            predictions,
            correct,
            n_test,
            accuracy: correct as f64 / n_test as f64,
            ci_low,
            ci_high,
        })
    }

    pub fn correct_mask(&self) -> Vec<bool> {
        self.truth.iter().zip(&self.predictions).map(|(t, p)| t == p).collect()
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_ci(k: usize, n: usize, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::arg("wilson interval needs n >= 1"));
    }
    if k > n {
        return Err(Error::arg(format!("successes {k} exceed trials {n}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::arg(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    let z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = p + z2 / (2.0 * nf);
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let mut low = ((centre - half) / denom).clamp(0.0, 1.0);
    let mut high = ((centre + half) / denom).clamp(0.0, 1.0);
    // Keep the point estimate inside despite rounding at the boundaries.
    low = low.min(p);
    high = high.max(p);
    Ok((low, high))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McNemarMethod {
    Chi2Corrected,
    ExactBinomial,
}

impl McNemarMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Chi2Corrected => "chi2_corrected",
            Self::ExactBinomial => "exact_binomial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McNemarResult {
    /// A right, B wrong.
    pub b: usize,
    /// A wrong, B right.
    pub c: usize,
    /// Continuity-corrected statistic, reported even when the exact test
    /// supplies `p`.
    pub chi2: f64,
    pub p: f64,
    pub method: McNemarMethod,
}

fn exact_binomial_p(b: usize, c: usize) -> f64 {
    let n = b + c;
    let k = b.min(c);
    // Running C(n, i) / 2^n, fine for the n < 25 this is used for and
    // still finite up to n ~ 1000.
    let mut term = 0.5f64.powi(n as i32);
    let mut tail = term;
    for i in 1..=k {
        term *= (n - i + 1) as f64 / i as f64;
        tail += term;
    }
    (2.0 * tail).min(1.0)
}

pub fn mcnemar(pred_a: &[String], pred_b: &[String], truth: &[String]) -> Result<McNemarResult> {
    if pred_a.len() != truth.len() || pred_b.len() != truth.len() {
        return Err(Error::arg(format!(
            "prediction lengths {} and {} do not match {} test items",
            pred_a.len(),
            pred_b.len(),
            truth.len()
        )));
    }
    let mut b = 0;
    let mut c = 0;
    for ((a, bb), t) in pred_a.iter().zip(pred_b).zip(truth) {
        match (a == t, bb == t) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok(mcnemar_counts(b, c))
}

pub(crate) fn mcnemar_counts(b: usize, c: usize) -> McNemarResult {
    let n = b + c;
    if n == 0 {
        return McNemarResult {
            b,
            c,
            chi2: 0.0,
            p: 1.0,
            method: McNemarMethod::ExactBinomial,
        };
    }
    let d = (b as f64 - c as f64).abs() - 1.0;
    let chi2 = d.max(0.0).powi(2) / n as f64;
    if n < 25 {
        McNemarResult {
            b,
            c,
            chi2,
            p: exact_binomial_p(b, c),
            method: McNemarMethod::ExactBinomial,
        }
    } else {
        McNemarResult {
            b,
            c,
            chi2,
            p: chisq_sf(chi2, 1.0).expect("df = 1 is valid"),
            method: McNemarMethod::Chi2Corrected,
        }
    }
}

/// Both models from one split. In the McNemar result model A is the full
/// model and B the reduced one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub full: ClassifierEval,
    pub reduced: ClassifierEval,
    pub mcnemar: McNemarResult,
    pub n_train: usize,
    pub n_test: usize,
}

pub fn compare_models(
    dataset: &Dataset,
    full_set: &[usize],
    reduced_set: &[usize],
    config: &ForestConfig,
    plan: &SplitPlan,
) -> Result<Comparison> {
    let split = stratified_split(dataset, plan)?;
    let train = dataset.subset(&split.train);
    let test = dataset.subset(&split.test);
    let full_forest = fit_forest(&train, full_set, config)?;
    let reduced_forest = fit_forest(&train, reduced_set, config)?;
    let full =
        ClassifierEval::from_predictions(full_forest.features.clone(), &test, full_forest.predict(&test)?, 0.95)?;
    let reduced = ClassifierEval::from_predictions(
        reduced_forest.features.clone(),
        &test,
        reduced_forest.predict(&test)?,
        0.95,
    )?;
    let mcnemar = mcnemar(&full.predictions, &reduced.predictions, &full.truth)?;
    Ok(Comparison {
        full,
        reduced,
        mcnemar,
        n_train: split.train.len(),
        n_test: split.test.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatedComparison {
    pub split_seeds: Vec<u64>,
    pub full_accuracy: Vec<f64>,
    pub reduced_accuracy: Vec<f64>,
    pub full_mean: f64,
    pub full_sd: f64,
    pub reduced_mean: f64,
    pub reduced_sd: f64,
}

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (m, 0.0);
    }
    let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

/// Repeats [`compare_models`] over `repeats` splits. Repeat 0 uses the plan
/// and forest seeds unchanged; later repeats derive both from them.
pub fn repeated_compare(
    dataset: &Dataset,
    full_set: &[usize],
    reduced_set: &[usize],
    config: &ForestConfig,
    plan: &SplitPlan,
    repeats: usize,
) -> Result<RepeatedComparison> {
    if repeats == 0 {
        return Err(Error::arg("repeats must be at least 1"));
    }
    let mut split_seeds = Vec::with_capacity(repeats);
    let mut full_accuracy = Vec::with_capacity(repeats);
    let mut reduced_accuracy = Vec::with_capacity(repeats);
    for r in 0..repeats {
        let (split_seed, forest_seed) = if r == 0 {
            (plan.seed, config.seed)
        } else {
            (
                stream_seed(plan.seed, REPEAT_STREAM, r as u64),
                stream_seed(config.seed, REPEAT_STREAM + 1, r as u64),
            )
        };
        let p = SplitPlan {
            seed: split_seed,
            ..*plan
        };
        let c = ForestConfig {
            seed: forest_seed,
            ..*config
        };
        let cmp = compare_models(dataset, full_set, reduced_set, &c, &p)?;
        split_seeds.push(split_seed);
        full_accuracy.push(cmp.full.accuracy);
        reduced_accuracy.push(cmp.reduced.accuracy);
    }
    let (full_mean, full_sd) = mean_sd(&full_accuracy);
    let (reduced_mean, reduced_sd) = mean_sd(&reduced_accuracy);
    Ok(RepeatedComparison {
        split_seeds,
        full_accuracy,
        reduced_accuracy,
        full_mean,
        full_sd,
        reduced_mean,
        reduced_sd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn wilson_closed_form() {
        let (lo, hi) = wilson_ci(27, 36, 0.95).unwrap();
        assert!((lo - 0.589_295_462_332_716_5).abs() < 1e-9);
        assert!((hi - 0.862_495_223_370_051_8).abs() < 1e-9);
        let (lo, hi) = wilson_ci(19, 36, 0.95).unwrap();
        assert!((lo - 0.370_059_380_229_875_94).abs() < 1e-9);
        assert!((hi - 0.680_139_584_848_209_5).abs() < 1e-9);
    }

    #[test]
    fn wilson_boundaries() {
        assert_eq!(wilson_ci(0, 10, 0.95).unwrap().0, 0.0);
        assert_eq!(wilson_ci(10, 10, 0.95).unwrap().1, 1.0);
        assert!(wilson_ci(0, 0, 0.95).is_err());
        assert!(wilson_ci(3, 2, 0.95).is_err());
    }

    #[test]
    fn mcnemar_examples() {
        let r = mcnemar_counts(0, 0);
        assert_eq!(r.p, 1.0);
        let r = mcnemar_counts(10, 2);
        assert_eq!(r.method, McNemarMethod::ExactBinomial);
        assert!((r.p - 2.0 * 79.0 / 4096.0).abs() < 1e-15);
        let r = mcnemar_counts(30, 12);
        assert_eq!(r.method, McNemarMethod::Chi2Corrected);
        assert!((r.chi2 - 289.0 / 42.0).abs() < 1e-12);
        assert!((r.p - 0.008_711).abs() < 5e-5);
    }

    #[test]
    fn mcnemar_counts_from_predictions() {
        let truth = labels("aabbab");
        let a = labels("aabbba");
        let b = labels("abbbab");
        let r = mcnemar(&a, &b, &truth).unwrap();
        assert_eq!((r.b, r.c), (1, 2));
        let swapped = mcnemar(&b, &a, &truth).unwrap();
        assert_eq!((swapped.b, swapped.c), (2, 1));
        assert_eq!(swapped.p, r.p);
        assert!(mcnemar(&a[..3], &b, &truth).is_err());
    }
}
