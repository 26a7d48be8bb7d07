//! Multivariate group comparison: scatter decomposition, Box's M,
//! Pillai-trace MANOVA and canonical discriminant analysis.
//!
//! Everything operates on all features of a [`Dataset`]; `N` is the number
//! of speakers, `g` the number of groups (always 2 here) and `p` the number
//! of features.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, det_log, lu_solve, solve_lower, solve_lower_transpose, sym_eigen, MatrixF};
use crate::special::{chisq_sf, f_sf};

/// Between-group, within-group and pooled covariance matrices.
#[derive(Debug, Clone)]
pub struct Scatter {
    pub between: MatrixF,
    pub within: MatrixF,
    /// `within / (N - g)`.
    pub pooled: MatrixF,
    pub n: usize,
    pub g: usize,
    pub p: usize,
}

impl Scatter {
    pub fn total(&self) -> Result<MatrixF> {
        self.between.add(&self.within)
    }
}

fn mean_vector(rows: &[Vec<f64>], p: usize) -> Vec<f64> {
    let mut m = vec![0.0; p];
    for r in rows {
        for (acc, v) in m.iter_mut().zip(r) {
            *acc += v;
        }
    }
    m.iter_mut().for_each(|v| *v /= rows.len() as f64);
    m
}

fn outer_accumulate(target: &mut MatrixF, d: &[f64], weight: f64) {
    for i in 0..d.len() {
        for j in 0..d.len() {
            target[(i, j)] += weight * d[i] * d[j];
        }
    }
}

/// Sample covariance (n - 1 divisor).
pub fn covariance(rows: &[Vec<f64>], p: usize) -> MatrixF {
    let mean = mean_vector(rows, p);
    let mut cov = MatrixF::zeros(p, p);
    for r in rows {
        let d: Vec<f64> = r.iter().zip(&mean).map(|(a, b)| a - b).collect();
        outer_accumulate(&mut cov, &d, 1.0);
    }
    cov.scale(1.0 / (rows.len() - 1) as f64)
}

/// Sum-of-squares-and-cross-products decomposition for grouped rows.
pub fn scatter_from_groups(groups: &[Vec<Vec<f64>>]) -> Result<Scatter> {
    let p = groups
        .iter()
        .flat_map(|g| g.first())
        .map(Vec::len)
        .next()
        .ok_or_else(|| Error::data("no observations"))?;
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::data("every group needs at least one observation"));
    }
    let all: Vec<Vec<f64>> = groups.iter().flatten().cloned().collect();
    let n = all.len();
    let g = groups.len();
    if n <= g {
        return Err(Error::data(format!("need more observations ({n}) than groups ({g})")));
    }
    let grand = mean_vector(&all, p);
    let mut between = MatrixF::zeros(p, p);
    let mut within = MatrixF::zeros(p, p);
    for rows in groups {
        let mean = mean_vector(rows, p);
        let d: Vec<f64> = mean.iter().zip(&grand).map(|(a, b)| a - b).collect();
        outer_accumulate(&mut between, &d, rows.len() as f64);
        for r in rows {
            let d: Vec<f64> = r.iter().zip(&mean).map(|(a, b)| a - b).collect();
            outer_accumulate(&mut within, &d, 1.0);
        }
    }
    let pooled = within.scale(1.0 / (n - g) as f64);
    Ok(Scatter {
        between,
        within,
        pooled,
        n,
        g,
        p,
    })
}

pub fn scatter_matrices(dataset: &Dataset) -> Result<Scatter> {
    let columns: Vec<usize> = (0..dataset.n_features()).collect();
    scatter_from_groups(&dataset.rows_by_group(&columns))
}

/// Pillai's trace with its F approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PillaiResult {
    pub pillai_v: f64,
    pub s: usize,
    pub f_stat: f64,
    pub df1: u64,
    pub df2: u64,
    pub p: f64,
    pub partial_eta_sq: f64,
}

/// F approximation of Pillai's trace `v` for `n` observations in `g` groups
/// on `p` variables.
///
/// `s = min(p, g-1)`, `m = (|p-g+1|-1)/2`, `n' = (N-g-p-1)/2`,
/// `F = (2n'+s+1)/(2m+s+1) * (V/s)/(1-V/s)` on `s(2m+s+1)` and `s(2n'+s+1)`
/// degrees of freedom.
pub fn pillai_f_approx(v: f64, n: usize, g: usize, p: usize) -> Result<PillaiResult> {
    if g < 2 || p == 0 {
        return Err(Error::arg(format!("need g >= 2 and p >= 1, got g={g}, p={p}")));
    }
    if n <= g + p {
        return Err(Error::data(format!(
            "MANOVA needs N > g + p for positive error df, got N={n}, g={g}, p={p}"
        )));
    }
    let s = p.min(g - 1);
    // 2m + s + 1 and 2n' + s + 1 are integers
    let m_term = (p as i64 - g as i64 + 1).unsigned_abs() + s as u64;
    let n_term = (n - g - p + s) as u64;
    let df1 = s as u64 * m_term;
    let df2 = s as u64 * n_term;
    let ratio = v / s as f64;
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::Numerical(format!("Pillai trace {v} outside [0, s) for s = {s}")));
    }
    let f_stat = (n_term as f64 / m_term as f64) * ratio / (1.0 - ratio);
    Ok(PillaiResult {
        pillai_v: v,
        s,
        f_stat,
        df1,
        df2,
        p: f_sf(f_stat, df1 as f64, df2 as f64)?,
        partial_eta_sq: ratio,
    })
}

/// `V = trace(B (B + W)^-1)` and its F test.
pub fn pillai_manova(between: &MatrixF, within: &MatrixF, n: usize, g: usize) -> Result<PillaiResult> {
    let total = between.add(within)?;
    let v = lu_solve(&total, between)
        .map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!("B + W: {msg}")),
            other => other,
        })?
        .trace();
    pillai_f_approx(v.max(0.0), n, g, between.rows())
}

/// Eigenvalues and `W`-orthonormal eigenvectors of `B a = lambda W a`,
/// descending, via the Cholesky reduction `L^-1 B L^-T`.
pub fn generalized_eigen(between: &MatrixF, within: &MatrixF) -> Result<(Vec<f64>, MatrixF)> {
    let l = cholesky(within).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!("within-group scatter W: {msg}")),
        other => other,
    })?;
    let left = solve_lower(&l, between);
    let reduced = solve_lower(&l, &left.transpose()).transpose();
    // symmetrize rounding noise
    let sym = reduced.add(&reduced.transpose())?.scale(0.5);
    let (values, vectors) = sym_eigen(&sym)?;
    Ok((values, solve_lower_transpose(&l, &vectors)))
}

/// Pillai's trace as `sum lambda_i / (1 + lambda_i)` over the eigenvalues of
/// `W^-1 B`; an independent route to the value from [`pillai_manova`].
pub fn pillai_trace_from_eigen(between: &MatrixF, within: &MatrixF) -> Result<f64> {
    let (values, _) = generalized_eigen(between, within)?;
    Ok(values.iter().map(|&l| l.max(0.0)).map(|l| l / (1.0 + l)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxM {
    pub m: f64,
    pub chi2: f64,
    pub df: u64,
    pub p: f64,
}

/// Box's M test for equal group covariance matrices (chi-square
/// approximation).
pub fn box_m(dataset: &Dataset) -> Result<BoxM> {
    let columns: Vec<usize> = (0..dataset.n_features()).collect();
    let groups = dataset.rows_by_group(&columns);
    box_m_from_groups(&groups, dataset.labels())
}

pub fn box_m_from_groups(groups: &[Vec<Vec<f64>>], labels: &[String]) -> Result<BoxM> {
    let scatter = scatter_from_groups(groups)?;
    let (n, g, p) = (scatter.n, scatter.g, scatter.p);
    let (sign, ln_pooled) = det_log(&scatter.pooled).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!("pooled covariance: {msg}")),
        other => other,
    })?;
    if sign <= 0.0 {
        return Err(Error::Singular("pooled covariance is not positive definite".into()));
    }
    let mut m = (n - g) as f64 * ln_pooled;
    let mut inv_sum = 0.0;
    for (rows, label) in groups.iter().zip(labels) {
        let ni = rows.len();
        if ni <= p {
            return Err(Error::Singular(format!(
                "group {label}: covariance is singular with n={ni} <= p={p}"
            )));
        }
        let cov = covariance(rows, p);
        let (sign, ln_det) = det_log(&cov).map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!("group {label} covariance: {msg}")),
            other => other,
        })?;
        if sign <= 0.0 {
            return Err(Error::Singular(format!(
                "group {label}: covariance is not positive definite"
            )));
        }
        m -= (ni - 1) as f64 * ln_det;
        inv_sum += 1.0 / (ni - 1) as f64;
    }
    let pf = p as f64;
    let c1 = (inv_sum - 1.0 / (n - g) as f64) * (2.0 * pf * pf + 3.0 * pf - 1.0) / (6.0 * (pf + 1.0) * (g - 1) as f64);
    let chi2 = (m * (1.0 - c1)).max(0.0);
    let df = (p * (p + 1) * (g - 1) / 2) as u64;
    Ok(BoxM {
        m,
        chi2,
        df,
        p: chisq_sf(chi2, df as f64)?,
    })
}

/// Full MANOVA output: Pillai's trace plus Box's M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManovaResult {
    pub pillai_v: f64,
    pub f_stat: f64,
    pub df1: u64,
    pub df2: u64,
    pub p: f64,
    pub partial_eta_sq: f64,
    pub box_m: f64,
    pub box_chi2: f64,
    pub box_df: u64,
    pub box_p: f64,
}

/// The within-group scatter has rank at most `N - g`.
fn check_rank(sc: &Scatter) -> Result<()> {
    if sc.n < sc.g + sc.p {
        return Err(Error::Singular(format!(
            "within-group scatter is rank-deficient: {} speakers in {} groups leave {} degrees of freedom for {} features",
            sc.n,
            sc.g,
            sc.n - sc.g,
            sc.p
        )));
    }
    Ok(())
}

pub fn manova(dataset: &Dataset) -> Result<ManovaResult> {
    let sc = scatter_matrices(dataset)?;
    check_rank(&sc)?;
    let pillai = pillai_manova(&sc.between, &sc.within, sc.n, sc.g)?;
    let bm = box_m(dataset)?;
    Ok(ManovaResult {
        pillai_v: pillai.pillai_v,
        f_stat: pillai.f_stat,
        df1: pillai.df1,
        df2: pillai.df2,
        p: pillai.p,
        partial_eta_sq: pillai.partial_eta_sq,
        box_m: bm.m,
        box_chi2: bm.chi2,
        box_df: bm.df,
        box_p: bm.p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdaScore {
    pub speaker_id: String,
    pub group: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdaResult {
    pub eigenvalue: f64,
    pub canonical_correlation: f64,
    /// Scaled so the pooled within-group variance of the scores is 1.
    pub raw_coeffs: Vec<f64>,
    pub std_coeffs: Vec<f64>,
    pub scores: Vec<CdaScore>,
    /// `(group label, mean score)` in label order.
    pub centroids: Vec<(String, f64)>,
}

/// Two-group canonical discriminant analysis.
///
/// The coefficient vector solves `B a = lambda W a`, is scaled so that
/// `a^T S_pooled a = 1`, and is sign-normalized so its largest standardized
/// entry is positive. Scores are centred on the grand mean.
pub fn cda(dataset: &Dataset) -> Result<CdaResult> {
    let sc = scatter_matrices(dataset)?;
    check_rank(&sc)?;
    let (values, vectors) = generalized_eigen(&sc.between, &sc.within)?;
    let eigenvalue = values[0].max(0.0);
    let mut a = vectors.column(0);
    let var = sc.pooled.quad_form(&a);
    if !(var > 0.0) {
        return Err(Error::Numerical("canonical variate has zero pooled variance".into()));
    }
    let scale = var.sqrt();
    a.iter_mut().for_each(|v| *v /= scale);

    let mut std_coeffs: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(j, v)| v * sc.pooled[(j, j)].sqrt())
        .collect();
    let lead = std_coeffs
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()).then(y.0.cmp(&x.0)))
        .map(|(j, _)| j)
        .unwrap();
    if std_coeffs[lead] < 0.0 {
        a.iter_mut().for_each(|v| *v = -*v);
        std_coeffs.iter_mut().for_each(|v| *v = -*v);
    }

    let all: Vec<Vec<f64>> = dataset.records().iter().map(|r| r.features.clone()).collect();
    let grand = mean_vector(&all, sc.p);
    let scores: Vec<CdaScore> = dataset
        .records()
        .iter()
        .map(|r| CdaScore {
            speaker_id: r.speaker_id.clone(),
            group: r.group.clone(),
            score: r
                .features
                .iter()
                .zip(&grand)
                .zip(&a)
                .map(|((x, m), c)| (x - m) * c)
                .sum(),
        })
        .collect();
    let centroids = dataset
        .labels()
        .iter()
        .map(|label| {
            let s: Vec<f64> = scores.iter().filter(|s| &s.group == label).map(|s| s.score).collect();
            (label.clone(), s.iter().sum::<f64>() / s.len() as f64)
        })
        .collect();
    Ok(CdaResult {
        eigenvalue,
        canonical_correlation: (eigenvalue / (1.0 + eigenvalue)).sqrt(),
        raw_coeffs: a,
        std_coeffs,
        scores,
        centroids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SpeakerRecord;
    use approx::assert_abs_diff_eq;

    fn ds(a: &[Vec<f64>], b: &[Vec<f64>]) -> Dataset {
        let mut records = Vec::new();
        for (label, rows) in [("a", a), ("b", b)] {
            for (i, r) in rows.iter().enumerate() {
                records.push(SpeakerRecord {
                    speaker_id: format!("{label}{i:02}"),
                    group: label.into(),
                    features: r.clone(),
                });
            }
        }
        Dataset::new(records).unwrap()
    }

    #[test]
    fn study_scale_f_mapping() {
        let r = pillai_f_approx(0.192, 118, 2, 13).unwrap();
        assert_eq!((r.df1, r.df2), (13, 104));
        assert_abs_diff_eq!(r.f_stat, 1.90, epsilon = 0.01);
        assert_eq!(r.partial_eta_sq, 0.192);
    }

    #[test]
    fn too_few_speakers_for_features() {
        let a: Vec<Vec<f64>> = (0..3)
            .map(|i| vec![i as f64, (i * i) as f64, 1.0 - i as f64 * 0.3, 0.1 * i as f64])
            .collect();
        let b: Vec<Vec<f64>> = (0..2).map(|i| vec![i as f64 + 0.5, 2.0, i as f64, 0.7]).collect();
        let d = ds(&a, &b);
        for e in [manova(&d).unwrap_err(), cda(&d).unwrap_err()] {
            assert!(matches!(e, Error::Singular(_)));
            assert!(e.to_string().contains("rank-deficient"), "{e}");
        }
    }

    #[test]
    fn zero_between_gives_null() {
        let r = pillai_manova(&MatrixF::zeros(2, 2), &MatrixF::identity(2), 20, 2).unwrap();
        assert_eq!(r.pillai_v, 0.0);
        assert_eq!(r.f_stat, 0.0);
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn df2_must_be_positive() {
        assert!(pillai_f_approx(0.1, 15, 2, 13).is_err());
    }

    #[test]
    fn equal_means_have_zero_between() {
        let a = vec![vec![0.0, 1.0], vec![2.0, 3.0], vec![1.0, 0.0]];
        let b = vec![vec![1.0, 2.0], vec![1.0, 1.0], vec![1.0, 1.0]];
        let sc = scatter_matrices(&ds(&a, &b)).unwrap();
        assert!(sc.between.max_abs() < 1e-15);
    }

    #[test]
    fn one_feature_cda_is_unit() {
        let a: Vec<Vec<f64>> = [1.0, 2.0, 4.0, 3.5].iter().map(|v| vec![*v]).collect();
        let b: Vec<Vec<f64>> = [5.0, 2.5, 6.0, 7.0, 4.0].iter().map(|v| vec![*v]).collect();
        let r = cda(&ds(&a, &b)).unwrap();
        assert_abs_diff_eq!(r.std_coeffs[0], 1.0, epsilon = 1e-12);
        // group a has the smaller mean, so its centroid is negative
        assert!(r.centroids[0].1 < 0.0 && r.centroids[1].1 > 0.0);
    }

    #[test]
    fn box_m_needs_enough_rows() {
        let a = vec![vec![0.0, 1.0], vec![2.0, 3.0]];
        let b = vec![vec![1.0, 2.0], vec![1.0, 1.5], vec![0.0, 1.0], vec![3.0, 1.0]];
        let e = box_m(&ds(&a, &b)).unwrap_err();
        assert!(e.to_string().contains("group a"), "{e}");
    }
}
