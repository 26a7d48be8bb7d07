use serde::{Deserialize, Serialize};

use super::{
    bonferroni_threshold, cohens_d_summary, ks_lilliefors, levene, shapiro_wilk, t_test_summary, GroupSample,
    NormalityReport, Sidedness, TTestRow, TTestVariant, VarianceTestResult,
};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Options {
    /// Family-wise significance level before Bonferroni division.
    pub alpha: f64,
    /// Levene p below this switches the feature to Welch's test.
    pub levene_alpha: f64,
    pub sidedness: Sidedness,
}

impl Default for Table1Options {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            levene_alpha: 0.05,
            sidedness: Sidedness::TwoSided,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub rows: Vec<TTestRow>,
    pub normality: Vec<NormalityReport>,
    pub variance: Vec<VarianceTestResult>,
    /// Per-feature threshold `alpha / n_features`.
    pub bonferroni_alpha: f64,
    pub options: Table1Options,
}

impl Table1Report {
    /// 1-based indices of the features flagged after correction.
    pub fn flagged(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.significant_bonferroni)
            .map(|r| r.feature)
            .collect()
    }
}

fn normality_report(feature: usize, group: &str, values: &[f64]) -> NormalityReport {
    let mut notes = Vec::new();
    let sw = shapiro_wilk(values)
        .map_err(|e| notes.push(format!("shapiro: {e}")))
        .ok();
    let ks = ks_lilliefors(values).map_err(|e| notes.push(format!("ks: {e}"))).ok();
    NormalityReport {
        feature,
        group: group.to_string(),
        n: values.len(),
        shapiro_w: sw.map(|s| s.0),
        shapiro_p: sw.map(|s| s.1),
        ks_d: ks.map(|k| k.0),
        ks_p: ks.map(|k| k.1),
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

/// Runs the per-feature battery: Levene, then Welch if variances differ
/// (else Student), Cohen's d, normality checks and the Bonferroni flag.
pub fn run_table1(dataset: &Dataset, options: Table1Options) -> Result<Table1Report> {
    let sizes = dataset.group_sizes();
    let labels = dataset.labels();
    if sizes.iter().any(|&n| n < 2) {
        return Err(Error::data(format!(
            "each group needs at least 2 speakers, got {}={} and {}={}",
            labels[0], sizes[0], labels[1], sizes[1]
        )));
    }
    let m = dataset.n_features();
    let threshold = bonferroni_threshold(options.alpha, m)?;

    let mut rows = Vec::with_capacity(m);
    let mut normality = Vec::with_capacity(2 * m);
    let mut variance = Vec::with_capacity(m);
    for j in 0..m {
        let feature = j + 1;
        let [va, vb] = dataset.feature_by_group(j);
        let a = GroupSample::new(labels[0].clone(), va)?;
        let b = GroupSample::new(labels[1].clone(), vb)?;

        let mut lev = levene(&a, &b).map_err(|e| annotate(e, feature))?;
        lev.feature = feature;
        let variant = if lev.levene_p < options.levene_alpha {
            TTestVariant::Welch
        } else {
            TTestVariant::Student
        };
        let (sa, sb) = (a.summary(), b.summary());
        let t = t_test_summary(&sa, &sb, variant).map_err(|e| annotate(e, feature))?;
        let d = cohens_d_summary(&sa, &sb).map_err(|e| annotate(e, feature))?;

        normality.push(normality_report(feature, &a.label, &a.values));
        normality.push(normality_report(feature, &b.label, &b.values));
        rows.push(TTestRow {
            feature,
            label: format!("MFCC{feature}"),
            group_a: a.label.clone(),
            group_b: b.label.clone(),
            n_a: sa.n,
            n_b: sb.n,
            mean_a: sa.mean,
            sd_a: sa.sd,
            mean_b: sb.mean,
            sd_b: sb.sd,
            test_used: variant,
            t: t.t,
            df: t.df,
            p_two_sided: t.p_two_sided,
            p_one_sided: t.p_one_sided,
            ci_low: t.ci_low,
            ci_high: t.ci_high,
            cohens_d: d,
            significant_bonferroni: t.p(options.sidedness) < threshold,
        });
        variance.push(lev);
    }
    Ok(Table1Report {
        rows,
        normality,
        variance,
        bonferroni_alpha: threshold,
        options,
    })
}

fn annotate(e: Error, feature: usize) -> Error {
    match e {
        Error::ZeroVariance(msg) => Error::ZeroVariance(format!("feature {feature}: {msg}")),
        Error::InvalidData(msg) => Error::InvalidData(format!("feature {feature}: {msg}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SpeakerRecord;

    fn dataset(groups: &[(&str, Vec<Vec<f64>>)]) -> Dataset {
        let mut records = Vec::new();
        for (label, rows) in groups {
            for (i, row) in rows.iter().enumerate() {
                records.push(SpeakerRecord {
                    speaker_id: format!("{label}{i}"),
                    group: label.to_string(),
                    features: row.clone(),
                });
            }
        }
        Dataset::new(records).unwrap()
    }

    #[test]
    fn identical_groups_flag_nothing() {
        let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64, (i * i % 7) as f64]).collect();
        let ds = dataset(&[("b", rows.clone()), ("a", rows)]);
        let report = run_table1(&ds, Table1Options::default()).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.flagged().is_empty());
        assert_eq!(report.rows[0].group_a, "a");
        assert_eq!(report.rows[0].p_two_sided, 1.0);
        assert_eq!(report.normality.len(), 4);
        assert!((report.bonferroni_alpha - 0.025).abs() < 1e-15);
    }

    #[test]
    fn small_groups_rejected() {
        let ds = dataset(&[("a", vec![vec![1.0]]), ("b", vec![vec![1.0], vec![2.0]])]);
        assert!(run_table1(&ds, Table1Options::default()).is_err());
    }

    #[test]
    fn tiny_groups_leave_normality_empty() {
        let ds = dataset(&[
            ("a", vec![vec![1.0], vec![2.0]]),
            ("b", vec![vec![1.5], vec![2.7], vec![0.3]]),
        ]);
        let report = run_table1(&ds, Table1Options::default()).unwrap();
        assert!(report.normality[0].shapiro_w.is_none());
        assert!(report.normality[0].note.is_some());
        assert!(report.normality[1].shapiro_w.is_some());
    }
}
