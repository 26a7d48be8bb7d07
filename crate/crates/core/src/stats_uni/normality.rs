//! Shapiro-Wilk (Royston's AS R94 approximation) and the Lilliefors
//! variant of the Kolmogorov-Smirnov normality test.

use serde::{Deserialize, Serialize};

use super::lilliefors_table::{CRITICAL, UPPER_TAIL};
use super::Summary;
use crate::error::{Error, Result};
use crate::special::{normal_cdf, normal_quantile, normal_sf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    /// 1-based feature index.
    pub feature: usize,
    pub group: String,
    pub n: usize,
    pub shapiro_w: Option<f64>,
    pub shapiro_p: Option<f64>,
    pub ks_d: Option<f64>,
    pub ks_p: Option<f64>,
    /// Why a statistic is missing, if one is.
    pub note: Option<String>,
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Antisymmetric Shapiro-Wilk weights for the lower half of the order
/// statistics (stored as positive numbers, largest first).
fn shapiro_coefficients(n: usize) -> Vec<f64> {
    const C1: [f64; 6] = [0.0, 0.221_157, -0.147_981, -2.071_190, 4.434_685, -2.706_056];
    const C2: [f64; 6] = [0.0, 0.042_981, -0.293_762, -1.752_461, 5.682_633, -3.582_633];
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an25 = n as f64 + 0.25;
    let m: Vec<f64> = (1..=half).map(|i| normal_quantile((i as f64 - 0.375) / an25)).collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (first, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first..half {
        a[i] = -m[i] / fac;
    }
    a
}

/// Shapiro-Wilk W and its p-value for `3 <= n <= 5000`.
pub fn shapiro_wilk(x: &[f64]) -> Result<(f64, f64)> {
    const SMALL: f64 = 1e-19;
    let n = x.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::arg(format!("Shapiro-Wilk needs 3 <= n <= 5000, got {n}")));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let range = sorted[n - 1] - sorted[0];
    if !(range > SMALL) {
        return Err(Error::ZeroVariance(
            "Shapiro-Wilk W is undefined for constant data".into(),
        ));
    }
    let a = shapiro_coefficients(n);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let ssq: f64 = sorted.iter().map(|v| (v - mean).powi(2)).sum();
    let num: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (sorted[n - 1 - i] - sorted[i]))
        .sum();
    let w = (num * num / ssq).min(1.0);

    if n == 3 {
        const PI6: f64 = 1.909_859;
        // truncated as in the reference algorithm
        #[allow(clippy::approx_constant)]
        const STQR: f64 = 1.047_198;
        let p = (PI6 * (w.sqrt().asin() - STQR)).max(0.0);
        return Ok((w, p.min(1.0)));
    }

    let nf = n as f64;
    let y = (1.0 - w).ln();
    let (z_num, mu, sigma) = if n <= 11 {
        let gamma = poly(&[-2.273, 0.459], nf);
        if y >= gamma {
            return Ok((w, 1e-99));
        }
        let y = -(gamma - y).ln();
        let mu = poly(&[0.5440, -0.39978, 0.025054, -6.714e-4], nf);
        let sigma = poly(&[1.3822, -0.77857, 0.062767, -0.0020322], nf).exp();
        (y, mu, sigma)
    } else {
        let ln_n = nf.ln();
        let mu = poly(&[-1.5861, -0.31082, -0.083751, 0.0038915], ln_n);
        let sigma = poly(&[-0.4803, -0.082676, 0.0030302], ln_n).exp();
        (y, mu, sigma)
    };
    Ok((w, normal_sf((z_num - mu) / sigma)))
}

/// Kolmogorov-Smirnov distance to a normal with the sample's mean and SD,
/// with a Lilliefors p-value. Requires `n >= 4`.
pub fn ks_lilliefors(x: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 4 {
        return Err(Error::arg(format!("Lilliefors test needs n >= 4, got {n}")));
    }
    let s = Summary::of(x);
    if !(s.sd > 0.0) {
        return Err(Error::ZeroVariance("Lilliefors test on constant data".into()));
    }
    let mut z: Vec<f64> = x.iter().map(|v| (v - s.mean) / s.sd).collect();
    z.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = z
        .iter()
        .enumerate()
        .map(|(i, &zi)| {
            let f = normal_cdf(zi);
            ((i + 1) as f64 / nf - f).max(f - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    Ok((d, lilliefors_p_value(d, n)))
}

/// Dallal-Wilkinson analytic approximation, valid for small p.
fn dallal_wilkinson(d: f64, n: usize) -> f64 {
    let nf = n as f64;
    let m = nf + 2.780_19;
    (-7.012_56 * d * d * m + 2.995_87 * d * m.sqrt() - 0.122_119 + 0.974_598 / nf.sqrt() + 1.679_97 / nf).exp()
}

fn critical_values(n: usize) -> [f64; UPPER_TAIL.len()] {
    if let Some((_, row)) = CRITICAL.iter().find(|(m, _)| *m == n) {
        return *row;
    }
    // interpolate sqrt(n)-scaled critical values linearly in 1/sqrt(n)
    let hi = CRITICAL.iter().position(|(m, _)| *m > n).expect("n within table range");
    let (n0, r0) = CRITICAL[hi - 1];
    let (n1, r1) = CRITICAL[hi];
    let inv = |m: usize| 1.0 / (m as f64).sqrt();
    let frac = (inv(n) - inv(n0)) / (inv(n1) - inv(n0));
    let mut out = [0.0; UPPER_TAIL.len()];
    for j in 0..out.len() {
        let s0 = r0[j] * (n0 as f64).sqrt();
        let s1 = r1[j] * (n1 as f64).sqrt();
        out[j] = (s0 + frac * (s1 - s0)) / (n as f64).sqrt();
    }
    out
}

/// Upper-tail probability of the Lilliefors statistic `d` for sample size
/// `n >= 4`.
///
/// For `n <= 100` the Monte Carlo critical-value table is interpolated
/// (log p linear in D), clipped to 0.99 at the top and continued with the
/// Dallal-Wilkinson formula beyond the 0.001 point. For `n > 100` the
/// Dallal-Wilkinson rescaling `D (n/100)^0.49` maps the statistic onto the
/// `n = 100` row.
pub fn lilliefors_p_value(d: f64, n: usize) -> f64 {
    let (d, n) = if n > 100 {
        (d * (n as f64 / 100.0).powf(0.49), 100)
    } else {
        (d, n)
    };
    let crit = critical_values(n);
    let last = crit.len() - 1;
    if d <= crit[0] {
        return UPPER_TAIL[0];
    }
    if d >= crit[last] {
        return dallal_wilkinson(d, n).min(UPPER_TAIL[last]);
    }
    let j = crit.iter().position(|&c| c >= d).unwrap();
    let (d0, d1) = (crit[j - 1], crit[j]);
    let (l0, l1) = (UPPER_TAIL[j - 1].ln(), UPPER_TAIL[j].ln());
    (l0 + (d - d0) / (d1 - d0) * (l1 - l0)).exp()
}
