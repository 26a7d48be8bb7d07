//! Slaney-style mel scale and area-normalized triangular filterbank.

use crate::error::{Error, Result};

const F_SP: f64 = 200.0 / 3.0;
const MIN_LOG_HZ: f64 = 1000.0;
const MIN_LOG_MEL: f64 = MIN_LOG_HZ / F_SP;

fn log_step() -> f64 {
    6.4f64.ln() / 27.0
}

/// Hz to mel: linear below 1 kHz, logarithmic above.
pub fn hz_to_mel(hz: f64) -> Result<f64> {
    if !(hz >= 0.0) || !hz.is_finite() {
        return Err(Error::arg(format!(
            "frequency must be finite and non-negative, got {hz}"
        )));
    }
    Ok(if hz < MIN_LOG_HZ {
        hz / F_SP
    } else {
        MIN_LOG_MEL + (hz / MIN_LOG_HZ).ln() / log_step()
    })
}

pub fn mel_to_hz(mel: f64) -> f64 {
    if mel < MIN_LOG_MEL {
        mel * F_SP
    } else {
        MIN_LOG_HZ * (log_step() * (mel - MIN_LOG_MEL)).exp()
    }
}

/// Triangular mel filters over the bins of a real FFT.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// `n_mels` rows of `fft_size / 2 + 1` weights.
    pub weights: Vec<Vec<f64>>,
    /// The `n_mels + 2` filter edge frequencies in Hz.
    pub edges_hz: Vec<f64>,
    /// Per-filter half-open range of bins with non-zero weight.
    support: Vec<(usize, usize)>,
}

impl MelFilterbank {
    pub fn n_mels(&self) -> usize {
        self.weights.len()
    }

    pub fn n_bins(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// Projects one power spectrum row onto the filters.
    pub fn apply(&self, power: &[f64], out: &mut [f64]) {
        for ((row, &(lo, hi)), dst) in self.weights.iter().zip(&self.support).zip(out.iter_mut()) {
            *dst = row[lo..hi].iter().zip(&power[lo..hi]).map(|(w, p)| w * p).sum();
        }
    }
}

/// Builds `n_mels` triangles with edges equally spaced on the mel axis
/// between `fmin_hz` and `fmax_hz`; triangle `i` spans `[edge_i, edge_{i+2}]`
/// and is scaled by `2 / (edge_{i+2} - edge_i)`.
pub fn mel_filterbank(
    sample_rate_hz: u32,
    fft_size: usize,
    n_mels: usize,
    fmin_hz: f64,
    fmax_hz: f64,
) -> Result<MelFilterbank> {
    let nyquist = sample_rate_hz as f64 / 2.0;
    if n_mels == 0 {
        return Err(Error::arg("n_mels must be positive"));
    }
    if fmax_hz > nyquist {
        return Err(Error::arg(format!(
            "fmax {fmax_hz} Hz exceeds the Nyquist frequency {nyquist} Hz"
        )));
    }
    if !(fmin_hz >= 0.0 && fmin_hz < fmax_hz) {
        return Err(Error::arg(format!(
            "need 0 <= fmin < fmax, got fmin={fmin_hz} fmax={fmax_hz}"
        )));
    }
    let n_bins = fft_size / 2 + 1;
    let bin_hz: Vec<f64> = (0..n_bins)
        .map(|k| k as f64 * sample_rate_hz as f64 / fft_size as f64)
        .collect();

    let mel_lo = hz_to_mel(fmin_hz)?;
    let mel_hi = hz_to_mel(fmax_hz)?;
    let edges_hz: Vec<f64> = (0..n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_mels + 1) as f64))
        .collect();

    let mut weights = Vec::with_capacity(n_mels);
    let mut support = Vec::with_capacity(n_mels);
    for i in 0..n_mels {
        let (left, centre, right) = (edges_hz[i], edges_hz[i + 1], edges_hz[i + 2]);
        let norm = 2.0 / (right - left);
        let row: Vec<f64> = bin_hz
            .iter()
            .map(|&f| {
                let rising = (f - left) / (centre - left);
                let falling = (right - f) / (right - centre);
                rising.min(falling).max(0.0) * norm
            })
            .collect();
        let lo = row.iter().position(|&w| w > 0.0);
        let hi = row.iter().rposition(|&w| w > 0.0);
        match (lo, hi) {
            (Some(lo), Some(hi)) => support.push((lo, hi + 1)),
            _ => {
                return Err(Error::arg(format!(
                    "mel filter {i} ({left:.1}-{right:.1} Hz) covers no FFT bin; \
                     reduce n_mels or increase the FFT size"
                )))
            }
        }
        weights.push(row);
    }
    Ok(MelFilterbank {
        weights,
        edges_hz,
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mel_anchor_points() {
        assert_eq!(hz_to_mel(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(hz_to_mel(1000.0).unwrap(), 15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mel_to_hz(hz_to_mel(4000.0).unwrap()), 4000.0, epsilon = 1e-9);
        assert!(hz_to_mel(-1.0).is_err());
    }

    #[test]
    fn filterbank_shapes() {
        let fb = mel_filterbank(44_100, 2048, 128, 0.0, 22_050.0).unwrap();
        assert_eq!(fb.n_mels(), 128);
        assert_eq!(fb.n_bins(), 1025);
        assert!(fb.weights.iter().flatten().all(|&w| w >= 0.0));
    }

    #[test]
    fn filter_near_1khz_vanishes_at_ends() {
        let fb = mel_filterbank(44_100, 2048, 128, 0.0, 22_050.0).unwrap();
        let i = (0..128)
            .min_by(|&a, &b| {
                let da = (fb.edges_hz[a + 1] - 1000.0).abs();
                let db = (fb.edges_hz[b + 1] - 1000.0).abs();
                da.total_cmp(&db)
            })
            .unwrap();
        assert_eq!(fb.weights[i][0], 0.0);
        assert_eq!(fb.weights[i][1024], 0.0);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(mel_filterbank(16_000, 512, 40, 0.0, 8001.0).is_err());
        assert!(mel_filterbank(16_000, 512, 40, 500.0, 400.0).is_err());
        let e = mel_filterbank(8000, 64, 128, 0.0, 4000.0).unwrap_err();
        assert!(e.to_string().contains("mel filter 0"), "{e}");
    }
}
