//! MFCC extraction: framing, power spectrum, mel projection, dB
//! compression and DCT, followed by mean pooling over frames.

mod cepstrum;
mod mel;
mod stft;

use serde::{Deserialize, Serialize};

use crate::audio_io::AudioClip;
use crate::error::{Error, Result};

pub use cepstrum::{dct2_orthonormal, dct_matrix, log_compress};
pub use mel::{hz_to_mel, mel_filterbank, mel_to_hz, MelFilterbank};
pub use stft::{frame_and_window, power_spectrogram, FrameLayout, Frames};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfccConfig {
    pub window_ms: f64,
    pub hop_ms: f64,
    pub n_mels: usize,
    pub n_mfcc: usize,
    pub fmin_hz: f64,
    /// `None` means the Nyquist frequency of each clip.
    pub fmax_hz: Option<f64>,
    /// Power floor applied before taking logs.
    pub log_floor: f64,
    pub dynamic_range_db: f64,
}

impl Default for MfccConfig {
    fn default() -> Self {
        Self {
            window_ms: 25.0,
            hop_ms: 10.0,
            n_mels: 128,
            n_mfcc: 13,
            fmin_hz: 0.0,
            fmax_hz: None,
            log_floor: 1e-10,
            dynamic_range_db: 80.0,
        }
    }
}

impl MfccConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_ms > 0.0 && self.hop_ms > 0.0 && self.hop_ms <= self.window_ms) {
            return Err(Error::arg(format!(
                "need 0 < hop_ms <= window_ms, got window {} ms, hop {} ms",
                self.window_ms, self.hop_ms
            )));
        }
        if self.n_mfcc == 0 || self.n_mfcc > self.n_mels {
            return Err(Error::arg(format!(
                "need 1 <= n_mfcc <= n_mels, got n_mfcc {} and n_mels {}",
                self.n_mfcc, self.n_mels
            )));
        }
        if !(self.log_floor > 0.0) || !(self.dynamic_range_db > 0.0) {
            return Err(Error::arg("log_floor and dynamic_range_db must be positive"));
        }
        Ok(())
    }
}

/// Per-frame cepstral coefficients of one recording.
#[derive(Debug, Clone, PartialEq)]
pub struct MfccMatrix {
    /// `n_frames` rows of `n_mfcc` coefficients.
    pub values: Vec<Vec<f64>>,
    /// Frame-centre times in seconds.
    pub frame_times: Vec<f64>,
}

impl MfccMatrix {
    pub fn n_frames(&self) -> usize {
        self.values.len()
    }
}

/// Mean-pooled coefficients for one speaker; `coeffs[0]` is `mfcc_01`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfccVector {
    pub coeffs: Vec<f64>,
}

/// Log-mel spectrogram (dB, after clamping) of a clip.
pub fn log_mel_spectrogram(clip: &AudioClip, cfg: &MfccConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    if clip.samples.is_empty() {
        return Err(Error::arg(format!("{}: empty clip", clip.source_id)));
    }
    let layout = FrameLayout::new(clip.sample_rate_hz, cfg.window_ms, cfg.hop_ms)?;
    let fmax = cfg.fmax_hz.unwrap_or(clip.sample_rate_hz as f64 / 2.0);
    let fb = mel_filterbank(clip.sample_rate_hz, layout.fft_size, cfg.n_mels, cfg.fmin_hz, fmax)?;

    // frame -> power -> mel one frame at a time so long clips never hold
    // the full frame matrix
    let window = layout.padded_window();
    let mut frame = vec![0.0; layout.fft_size];
    let mut power = vec![0.0; layout.n_bins()];
    let mut kernel = stft::PowerSpectrum::new(layout.fft_size);
    let mel_power: Vec<Vec<f64>> = (0..layout.n_frames(clip.samples.len()))
        .map(|t| {
            stft::fill_frame(&clip.samples, &layout, &window, t, &mut frame);
            kernel.compute(&frame, &mut power);
            let mut mel = vec![0.0; cfg.n_mels];
            fb.apply(&power, &mut mel);
            mel
        })
        .collect();
    Ok(log_compress(&mel_power, cfg.log_floor, cfg.dynamic_range_db))
}

/// Computes the MFCC matrix of a clip. Deterministic and single-threaded.
pub fn extract_mfcc(clip: &AudioClip, cfg: &MfccConfig) -> Result<MfccMatrix> {
    let log_mel = log_mel_spectrogram(clip, cfg)?;
    let dct = dct_matrix(cfg.n_mels, cfg.n_mfcc);
    let values: Vec<Vec<f64>> = log_mel
        .iter()
        .map(|col| {
            dct.iter()
                .map(|row| row.iter().zip(col).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    if values.iter().flatten().any(|v: &f64| !v.is_finite()) {
        return Err(Error::Numerical(format!("{}: non-finite MFCC value", clip.source_id)));
    }
    let hop = FrameLayout::new(clip.sample_rate_hz, cfg.window_ms, cfg.hop_ms)?.hop;
    let frame_times = (0..values.len())
        .map(|t| (t * hop) as f64 / clip.sample_rate_hz as f64)
        .collect();
    Ok(MfccMatrix { values, frame_times })
}

/// Column-wise mean over frames.
pub fn pool_mean(m: &MfccMatrix) -> Result<MfccVector> {
    let Some(first) = m.values.first() else {
        return Err(Error::arg("cannot pool an MFCC matrix with no frames"));
    };
    let mut sums = vec![0.0; first.len()];
    for row in &m.values {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let n = m.values.len() as f64;
    Ok(MfccVector {
        coeffs: sums.into_iter().map(|s| s / n).collect(),
    })
}
