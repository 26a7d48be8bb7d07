//! Small dense linear algebra: LU with partial pivoting, log-determinants,
//! Cholesky, and a cyclic Jacobi eigensolver for symmetric matrices.
//!
//! Sized for the 13x13 problems of the multivariate tests; nothing here is
//! blocked or vectorized.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct MatrixF {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixF {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl MatrixF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::arg("matrix dimensions must be positive"));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::arg("ragged matrix rows"));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("matrix entries must be finite"));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &MatrixF) -> Result<MatrixF> {
        if self.cols != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T A v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        self.mat_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &MatrixF) -> Result<MatrixF> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::arg("matrix shapes differ"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> MatrixF {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol * self.max_abs().max(1.0)))
    }
}

impl Index<(usize, usize)> for MatrixF {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for MatrixF {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Packed LU factors with the row permutation.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: MatrixF,
    perm: Vec<usize>,
    sign: f64,
}

pub fn lu_decompose(a: &MatrixF) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::arg(format!(
            "LU needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let tol = 1e-12 * a.max_abs();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs()))
            .unwrap();
        if !(lu[(p, k)].abs() > tol) {
            return Err(Error::Singular(format!("pivot {k} is {:.3e}", lu[(p, k)])));
        }
        if p != k {
            for c in 0..n {
                let tmp = lu[(k, c)];
                lu[(k, c)] = lu[(p, c)];
                lu[(p, c)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for c in k + 1..n {
                lu[(i, c)] -= f * lu[(k, c)];
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

impl Lu {
    pub fn solve(&self, b: &MatrixF) -> Result<MatrixF> {
        let n = self.lu.rows;
        if b.rows != n {
            return Err(Error::arg(format!("right-hand side has {} rows, expected {n}", b.rows)));
        }
        let mut x = MatrixF::zeros(n, b.cols);
        for c in 0..b.cols {
            let mut y: Vec<f64> = self.perm.iter().map(|&p| b[(p, c)]).collect();
            for i in 0..n {
                for k in 0..i {
                    y[i] -= self.lu[(i, k)] * y[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    y[i] -= self.lu[(i, k)] * y[k];
                }
                y[i] /= self.lu[(i, i)];
            }
            for (i, v) in y.into_iter().enumerate() {
                x[(i, c)] = v;
            }
        }
        Ok(x)
    }

    pub fn det_log(&self) -> (f64, f64) {
        let mut sign = self.sign;
        let mut log_abs = 0.0;
        for i in 0..self.lu.rows {
            let d = self.lu[(i, i)];
            if d < 0.0 {
                sign = -sign;
            }
            log_abs += d.abs().ln();
        }
        (sign, log_abs)
    }
}

/// Solves `A X = B`.
pub fn lu_solve(a: &MatrixF, b: &MatrixF) -> Result<MatrixF> {
    lu_decompose(a)?.solve(b)
}

/// `(sign, ln|det A|)`.
pub fn det_log(a: &MatrixF) -> Result<(f64, f64)> {
    Ok(lu_decompose(a)?.det_log())
}

/// Lower-triangular `L` with `A = L L^T` for symmetric positive definite `A`.
pub fn cholesky(a: &MatrixF) -> Result<MatrixF> {
    if !a.is_square() {
        return Err(Error::arg("Cholesky needs a square matrix"));
    }
    let n = a.rows;
    let tol = 1e-12 * a.max_abs();
    let mut l = MatrixF::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > tol) {
            return Err(Error::Singular(format!("matrix not positive definite at index {j}")));
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `L X = B` for lower-triangular `L`.
pub fn solve_lower(l: &MatrixF, b: &MatrixF) -> MatrixF {
    let n = l.rows;
    let mut x = b.clone();
    for c in 0..b.cols {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Solves `L^T X = B` for lower-triangular `L`.
pub fn solve_lower_transpose(l: &MatrixF, b: &MatrixF) -> MatrixF {
    let n = l.rows;
    let mut x = b.clone();
    for c in 0..b.cols {
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= l[(k, i)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Iterates until the off-diagonal Frobenius norm falls below `1e-12`
/// times the matrix norm. Eigenvalues are returned in descending order with
/// the matching unit eigenvectors as the columns of the second value.
pub fn sym_eigen(a: &MatrixF) -> Result<(Vec<f64>, MatrixF)> {
    if !a.is_symmetric(1e-9) {
        return Err(Error::arg("sym_eigen requires a symmetric matrix"));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut v = MatrixF::identity(n);
    let target = 1e-12 * a.frobenius();
    let off_norm = |m: &MatrixF| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) > target {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Numerical("Jacobi eigensolver did not converge".into()));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = MatrixF::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok((values, vectors))
}
