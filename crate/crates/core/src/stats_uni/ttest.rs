use serde::{Deserialize, Serialize};

use super::{pooled_sd, GroupSample, Summary};
use crate::error::{Error, Result};
use crate::special::{t_quantile, t_sf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TTestVariant {
    Student,
    Welch,
}

impl TTestVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            TTestVariant::Student => "student",
            TTestVariant::Welch => "welch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    #[default]
    TwoSided,
    /// Upper tail in the direction of the observed difference.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub variant: TTestVariant,
    pub mean_diff: f64,
    pub se: f64,
    pub t: f64,
    pub df: f64,
    pub p_two_sided: f64,
    /// `P(T > |t|)`, half of the two-sided value.
    pub p_one_sided: f64,
    /// 95% interval for `mean_a - mean_b`.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TTestResult {
    pub fn p(&self, sidedness: Sidedness) -> f64 {
        match sidedness {
            Sidedness::TwoSided => self.p_two_sided,
            Sidedness::OneSided => self.p_one_sided,
        }
    }
}

/// One row of the per-feature comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestRow {
    /// 1-based feature index.
    pub feature: usize,
    pub label: String,
    pub group_a: String,
    pub group_b: String,
    pub n_a: usize,
    pub n_b: usize,
    pub mean_a: f64,
    pub sd_a: f64,
    pub mean_b: f64,
    pub sd_b: f64,
    pub test_used: TTestVariant,
    pub t: f64,
    pub df: f64,
    pub p_two_sided: f64,
    pub p_one_sided: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub cohens_d: f64,
    pub significant_bonferroni: bool,
}

/// Independent-samples t-test of `a - b`.
pub fn t_test(a: &GroupSample, b: &GroupSample, variant: TTestVariant) -> Result<TTestResult> {
    t_test_summary(&a.summary(), &b.summary(), variant)
}

/// t-test from group summaries (means, SDs, sizes).
pub fn t_test_summary(a: &Summary, b: &Summary, variant: TTestVariant) -> Result<TTestResult> {
    if a.n < 2 || b.n < 2 {
        return Err(Error::data(format!(
            "t-test needs n >= 2 per group, got {} and {}",
            a.n, b.n
        )));
    }
    let (va, vb) = (a.variance() / a.n as f64, b.variance() / b.n as f64);
    let (se, df) = match variant {
        TTestVariant::Student => {
            let sp = pooled_sd(a, b);
            (
                sp * (1.0 / a.n as f64 + 1.0 / b.n as f64).sqrt(),
                (a.n + b.n - 2) as f64,
            )
        }
        TTestVariant::Welch => {
            let se2 = va + vb;
            let df = se2 * se2 / (va * va / (a.n - 1) as f64 + vb * vb / (b.n - 1) as f64);
            (se2.sqrt(), df)
        }
    };
    if !(se > 0.0) || !df.is_finite() {
        return Err(Error::ZeroVariance("t-test standard error is zero".into()));
    }
    let mean_diff = a.mean - b.mean;
    let t = mean_diff / se;
    let p_one_sided = t_sf(t.abs(), df)?;
    let p_two_sided = (2.0 * p_one_sided).min(1.0);
    let crit = t_quantile(0.975, df)?;
    Ok(TTestResult {
        variant,
        mean_diff,
        se,
        t,
        df,
        p_two_sided,
        p_one_sided,
        ci_low: mean_diff - crit * se,
        ci_high: mean_diff + crit * se,
    })
}

/// `(mean_a - mean_b) / pooled SD`.
pub fn cohens_d(a: &GroupSample, b: &GroupSample) -> Result<f64> {
    cohens_d_summary(&a.summary(), &b.summary())
}

pub fn cohens_d_summary(a: &Summary, b: &Summary) -> Result<f64> {
    let sp = pooled_sd(a, b);
    if a.mean == b.mean {
        return Ok(0.0);
    }
    if !(sp > 0.0) {
        return Err(Error::ZeroVariance("pooled standard deviation is zero".into()));
    }
    Ok((a.mean - b.mean) / sp)
}

/// Per-comparison significance level `alpha / m`.
pub fn bonferroni_threshold(alpha: f64, m: usize) -> Result<f64> {
    if m == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg(format!(
            "need 0 < alpha < 1 and m >= 1, got alpha {alpha}, m {m}"
        )));
    }
    Ok(alpha / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn g(label: &str, v: &[f64]) -> GroupSample {
        GroupSample::new(label, v.to_vec()).unwrap()
    }

    #[test]
    fn student_small_fixture() {
        // pooled variance 5/3, SE = sqrt(5/3 * 1/2), t = -1/SE
        let r = t_test(
            &g("a", &[1.0, 2.0, 3.0, 4.0]),
            &g("b", &[2.0, 3.0, 4.0, 5.0]),
            TTestVariant::Student,
        )
        .unwrap();
        assert_abs_diff_eq!(r.t, -1.0 / (5.0f64 / 6.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.t, -1.0954, epsilon = 1e-4);
        assert_eq!(r.df, 6.0);
        assert_abs_diff_eq!(r.p_two_sided, 0.3153, epsilon = 1e-3);
        assert!(r.ci_low < 0.0 && r.ci_high > 0.0);
    }

    #[test]
    fn identical_groups() {
        let v = [1.0, 4.0, 2.0, 8.0];
        for variant in [TTestVariant::Student, TTestVariant::Welch] {
            let r = t_test(&g("a", &v), &g("b", &v), variant).unwrap();
            assert_eq!(r.t, 0.0);
            assert_eq!(r.p_two_sided, 1.0);
        }
        assert_eq!(cohens_d(&g("a", &v), &g("b", &v)).unwrap(), 0.0);
    }

    #[test]
    fn welch_summary_fixture() {
        let mandarin = Summary {
            mean: -7.69,
            sd: 13.63,
            n: 60,
        };
        let english = Summary {
            mean: -0.99,
            sd: 10.92,
            n: 58,
        };
        let r = t_test_summary(&mandarin, &english, TTestVariant::Welch).unwrap();
        assert_abs_diff_eq!(r.t, -2.95, epsilon = 0.01);
        assert_abs_diff_eq!(r.df, 112.2, epsilon = 0.2);
        assert_abs_diff_eq!(r.ci_low, -11.19, epsilon = 0.05);
        assert_abs_diff_eq!(r.ci_high, -2.20, epsilon = 0.05);
        assert_abs_diff_eq!(cohens_d_summary(&english, &mandarin).unwrap(), 0.541, epsilon = 0.002);
    }

    #[test]
    fn zero_se_is_an_error() {
        let e = t_test(&g("a", &[1.0, 1.0]), &g("b", &[1.0, 1.0]), TTestVariant::Welch).unwrap_err();
        assert!(matches!(e, Error::ZeroVariance(_)));
    }

    #[test]
    fn bonferroni() {
        assert_abs_diff_eq!(
            bonferroni_threshold(0.05, 13).unwrap(),
            0.003_846_153_846,
            epsilon = 1e-12
        );
        assert_eq!(bonferroni_threshold(0.05, 1).unwrap(), 0.05);
        assert_eq!(bonferroni_threshold(0.01, 4).unwrap(), 0.0025);
        assert!(bonferroni_threshold(0.05, 0).is_err());
    }

    #[test]
    fn one_sided_is_half() {
        let r = t_test(
            &g("a", &[1.0, 2.0, 3.0, 4.5]),
            &g("b", &[2.0, 3.5, 4.0, 5.0]),
            TTestVariant::Welch,
        )
        .unwrap();
        assert_abs_diff_eq!(
            r.p(Sidedness::OneSided) * 2.0,
            r.p(Sidedness::TwoSided),
            epsilon = 1e-15
        );
    }
}
