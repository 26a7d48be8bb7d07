//! Per-feature two-group comparisons: normality and variance checks,
//! Student/Welch t-tests, Cohen's d and Bonferroni correction.

mod levene;
mod lilliefors_table;
mod normality;
mod table1;
mod ttest;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use levene::{levene, VarianceTestResult};
pub use normality::{ks_lilliefors, lilliefors_p_value, shapiro_wilk, NormalityReport};
pub use table1::{run_table1, Table1Options, Table1Report};
pub use ttest::{
    bonferroni_threshold, cohens_d, cohens_d_summary, t_test, t_test_summary, Sidedness, TTestResult, TTestRow,
    TTestVariant,
};

/// One group's values for a single feature.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    pub label: String,
    pub values: Vec<f64>,
}

impl GroupSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.len() < 2 {
            return Err(Error::data(format!(
                "group {label}: need at least 2 values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::data(format!("group {label}: non-finite value")));
        }
        Ok(Self { label, values })
    }

    pub fn summary(&self) -> Summary {
        Summary::of(&self.values)
    }
}

/// Mean, sample standard deviation (n - 1 divisor) and size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        let sd = if n > 1 { (ss / (n - 1) as f64).sqrt() } else { 0.0 };
        Self { mean, sd, n }
    }

    pub fn variance(&self) -> f64 {
        self.sd * self.sd
    }
}

/// Pooled standard deviation of two groups.
pub fn pooled_sd(a: &Summary, b: &Summary) -> f64 {
    let num = (a.n - 1) as f64 * a.variance() + (b.n - 1) as f64 * b.variance();
    (num / (a.n + b.n - 2) as f64).sqrt()
}
