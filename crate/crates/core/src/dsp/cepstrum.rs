//! dB compression and the orthonormal DCT-II.

use std::f64::consts::PI;

/// `10 log10(max(P, floor))`, then clamp every cell to at least
/// `max - dynamic_range_db` where `max` is taken over the whole matrix.
pub fn log_compress(mel_power: &[Vec<f64>], log_floor: f64, dynamic_range_db: f64) -> Vec<Vec<f64>> {
    let mut db: Vec<Vec<f64>> = mel_power
        .iter()
        .map(|row| row.iter().map(|&p| 10.0 * p.max(log_floor).log10()).collect())
        .collect();
    let peak = db.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let lowest = peak - dynamic_range_db;
    for v in db.iter_mut().flatten() {
        *v = v.max(lowest);
    }
    db
}

/// First `n_out` rows of the `m`-point orthonormal DCT-II matrix.
pub fn dct_matrix(m: usize, n_out: usize) -> Vec<Vec<f64>> {
    let w0 = (1.0 / m as f64).sqrt();
    let wk = (2.0 / m as f64).sqrt();
    (0..n_out)
        .map(|k| {
            let w = if k == 0 { w0 } else { wk };
            (0..m)
                .map(|i| w * (PI * k as f64 * (2 * i + 1) as f64 / (2 * m) as f64).cos())
                .collect()
        })
        .collect()
}

/// The first `n_out` orthonormal DCT-II coefficients of `x`.
pub fn dct2_orthonormal(x: &[f64], n_out: usize) -> Vec<f64> {
    dct_matrix(x.len(), n_out)
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}
