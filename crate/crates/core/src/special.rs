//! Special functions and the distribution CDFs built on them.
//!
//! Every p-value in the crate goes through this module: the normal CDF via
//! the complementary error function, Student t and F via the regularized
//! incomplete beta function, and chi-square via the regularized lower
//! incomplete gamma function. Survival functions are computed directly from
//! the complementary integrals so that small upper-tail probabilities keep
//! their relative precision.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Complementary error function.
///
/// Uses the positive-term series `erf(x) = 2/sqrt(pi) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!`
/// for `|x| < 2.5` and a Lentz continued fraction for the tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.5 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

pub fn erf(x: f64) -> f64 {
    if x.abs() < 2.5 {
        if x < 0.0 {
            -erf_series(-x)
        } else {
            erf_series(x)
        }
    } else {
        1.0 - erfc(x)
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if term <= sum * EPS {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

fn erfc_continued_fraction(x: f64) -> f64 {
    // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..MAX_ITER {
        let an = n as f64 / 2.0;
        d = x + an * d;
        d = if d.abs() < TINY { TINY } else { d };
        c = x + an / c;
        c = if c.abs() < TINY { TINY } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x * x).exp() / (f * PI.sqrt())
}

/// Regularized lower incomplete gamma `P(a, x)` and its complement `Q(a, x)`.
pub fn gamma_pq(a: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    let log_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (sum.ln() + log_prefix).exp();
        (p, 1.0 - p)
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (h.ln() + log_prefix).exp();
        (1.0 - q, q)
    }
}

/// Regularized incomplete beta `I_x(a, b)` given both `x` and `y = 1 - x`.
///
/// Passing `y` separately avoids cancellation when `x` is close to one.
pub fn beta_reg(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let log_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        (log_front.exp() / a) * beta_continued_fraction(a, b, x)
    } else {
        1.0 - (log_front.exp() / b) * beta_continued_fraction(b, a, y)
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::arg(format!("{name}: non-finite input {values:?}")))
    }
}

fn check_df(name: &str, df: f64) -> Result<()> {
    if df > 0.0 {
        Ok(())
    } else {
        Err(Error::arg(format!(
            "{name}: degrees of freedom must be positive, got {df}"
        )))
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal upper tail `1 - Φ(z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

/// Inverse of the standard normal CDF.
///
/// Acklam's rational approximation refined by one Halley step against
/// [`normal_cdf`], accurate to a few ulps on `(0, 1)`.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // Halley refinement; use the smaller tail for the residual
    let e = if x < 0.0 {
        normal_cdf(x) - p
    } else {
        (1.0 - p) - normal_sf(x)
    };
    let u = e * (2.0 * PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Student t CDF.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    check_finite("t_cdf", &[t, df])?;
    check_df("t_cdf", df)?;
    let tail = t_tail(t.abs(), df);
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// Student t upper tail `P(T > t)`.
pub fn t_sf(t: f64, df: f64) -> Result<f64> {
    check_finite("t_sf", &[t, df])?;
    check_df("t_sf", df)?;
    let tail = t_tail(t.abs(), df);
    Ok(if t > 0.0 { tail } else { 1.0 - tail })
}

/// `P(T > |t|)` for `t >= 0`.
fn t_tail(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    0.5 * beta_reg(df / 2.0, 0.5, x, y)
}

/// Two-sided critical value: the `t` with `t_cdf(t, df) = prob`, found by
/// bisection.
pub fn t_quantile(prob: f64, df: f64) -> Result<f64> {
    check_finite("t_quantile", &[prob, df])?;
    check_df("t_quantile", df)?;
    if !(0.0 < prob && prob < 1.0) {
        return Err(Error::arg(format!("t_quantile: probability {prob} outside (0, 1)")));
    }
    if prob < 0.5 {
        return Ok(-t_quantile(1.0 - prob, df)?);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while t_cdf(hi, df)? < prob {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numerical(format!("t_quantile({prob}, {df}) did not bracket")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_cdf(mid, df)? < prob {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Chi-square CDF.
pub fn chisq_cdf(x: f64, df: f64) -> Result<f64> {
    check_finite("chisq_cdf", &[x, df])?;
    check_df("chisq_cdf", df)?;
    if x < 0.0 {
        return Err(Error::arg(format!("chisq_cdf: negative statistic {x}")));
    }
    Ok(gamma_pq(df / 2.0, x / 2.0).0)
}

/// Chi-square upper tail.
pub fn chisq_sf(x: f64, df: f64) -> Result<f64> {
    check_finite("chisq_sf", &[x, df])?;
    check_df("chisq_sf", df)?;
    if x < 0.0 {
        return Err(Error::arg(format!("chisq_sf: negative statistic {x}")));
    }
    Ok(gamma_pq(df / 2.0, x / 2.0).1)
}

/// F distribution CDF.
pub fn f_cdf(x: f64, df1: f64, df2: f64) -> Result<f64> {
    check_finite("f_cdf", &[x, df1, df2])?;
    check_df("f_cdf", df1)?;
    check_df("f_cdf", df2)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let denom = df1 * x + df2;
    Ok(beta_reg(df1 / 2.0, df2 / 2.0, df1 * x / denom, df2 / denom))
}

/// F distribution upper tail.
pub fn f_sf(x: f64, df1: f64, df2: f64) -> Result<f64> {
    check_finite("f_sf", &[x, df1, df2])?;
    check_df("f_sf", df1)?;
    check_df("f_sf", df2)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    let denom = df1 * x + df2;
    Ok(beta_reg(df2 / 2.0, df1 / 2.0, df2 / denom, df1 * x / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ln_gamma_known_values() {
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(0.5), PI.sqrt().ln(), epsilon = 1e-14);
        // 10! = 3628800
        assert_abs_diff_eq!(ln_gamma(11.0), 3_628_800f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(0.0), 0.0);
        assert_abs_diff_eq!(erf(1.0), 0.842_700_792_949_714_9, epsilon = 1e-15);
        assert_abs_diff_eq!(erfc(3.0), 2.209_049_699_858_544e-5, epsilon = 1e-18);
        assert_abs_diff_eq!(erf(-0.5), -0.520_499_877_813_046_5, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for df in [0.5, 1.0, 3.0, 116.0, 1e4] {
            assert_eq!(t_cdf(0.0, df).unwrap(), 0.5);
        }
    }

    #[test]
    fn chisq_95th_percentile() {
        assert_abs_diff_eq!(chisq_cdf(3.841_459, 1.0).unwrap(), 0.95, epsilon = 1e-6);
        assert_abs_diff_eq!(chisq_sf(3.841_459, 1.0).unwrap(), 0.05, epsilon = 1e-6);
    }

    #[test]
    fn normal_quantile_round_trip() {
        for p in [1e-12, 1e-5, 0.01, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999_999] {
            let z = normal_quantile(p);
            assert_abs_diff_eq!(normal_cdf(z), p, epsilon = 1e-15_f64.max(p * 1e-13));
        }
        assert_abs_diff_eq!(normal_quantile(0.975), 1.959_963_984_540_054, epsilon = 1e-14);
    }

    #[test]
    fn t_quantile_inverts_cdf() {
        let q = t_quantile(0.975, 6.0).unwrap();
        assert_abs_diff_eq!(q, 2.446_911_851_144_969, epsilon = 1e-12);
        assert_abs_diff_eq!(t_quantile(0.025, 6.0).unwrap(), -q, epsilon = 1e-12);
    }

    #[test]
    fn f_tails_are_complementary() {
        let (x, d1, d2) = (1.9, 13.0, 104.0);
        let sum = f_cdf(x, d1, d2).unwrap() + f_sf(x, d1, d2).unwrap();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(t_cdf(f64::NAN, 3.0).is_err());
        assert!(t_cdf(1.0, 0.0).is_err());
        assert!(chisq_cdf(-1.0, 2.0).is_err());
        assert!(f_cdf(1.0, 2.0, f64::INFINITY).is_err());
        assert!(t_quantile(1.0, 5.0).is_err());
    }

    #[test]
    fn monotone_in_statistic() {
        let mut prev = 0.0;
        for i in 0..400 {
            let x = i as f64 * 0.05;
            let p = chisq_cdf(x, 7.0).unwrap();
            assert!(p >= prev);
            prev = p;
        }
        let mut prev = 0.0;
        for i in -200..200 {
            let p = t_cdf(i as f64 * 0.05, 2.5).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }
}
