use serde::{Deserialize, Serialize};

use super::GroupSample;
use crate::error::{Error, Result};
use crate::special::f_sf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceTestResult {
    /// 1-based feature index (0 when not attached to a feature).
    pub feature: usize,
    pub levene_w: f64,
    pub levene_p: f64,
}

/// Mean-centred Levene test for equal variances of two groups.
pub fn levene(a: &GroupSample, b: &GroupSample) -> Result<VarianceTestResult> {
    let deviations = |g: &GroupSample| -> Vec<f64> {
        let mean = g.values.iter().sum::<f64>() / g.values.len() as f64;
        g.values.iter().map(|v| (v - mean).abs()).collect()
    };
    let z = [deviations(a), deviations(b)];
    let n_total: usize = z.iter().map(Vec::len).sum();
    let group_means: Vec<f64> = z.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect();
    let grand = z.iter().flatten().sum::<f64>() / n_total as f64;

    let between: f64 = z
        .iter()
        .zip(&group_means)
        .map(|(g, m)| g.len() as f64 * (m - grand).powi(2))
        .sum();
    let within: f64 = z
        .iter()
        .zip(&group_means)
        .map(|(g, m)| g.iter().map(|v| (v - m).powi(2)).sum::<f64>())
        .sum();
    if !(within > 0.0) {
        return Err(Error::ZeroVariance(
            "Levene: absolute deviations are constant within both groups".into(),
        ));
    }
    let df2 = (n_total - 2) as f64;
    let w = df2 * between / within;
    Ok(VarianceTestResult {
        feature: 0,
        levene_w: w,
        levene_p: f_sf(w, 1.0, df2)?,
    })
}
