//! Centered framing, Hann windowing and the power spectrogram.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Sample counts derived from millisecond window/hop settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameLayout {
    pub win: usize,
    pub hop: usize,
    pub fft_size: usize,
}

impl FrameLayout {
    /// `win` and `hop` are rounded to the nearest sample (ties to even,
    /// so 25 ms at 44.1 kHz gives 1102).
    pub fn new(sample_rate_hz: u32, window_ms: f64, hop_ms: f64) -> Result<Self> {
        if !(window_ms > 0.0 && hop_ms > 0.0 && hop_ms <= window_ms) {
            return Err(Error::arg(format!(
                "need 0 < hop_ms <= window_ms, got window {window_ms} ms, hop {hop_ms} ms"
            )));
        }
        let sr = sample_rate_hz as f64;
        let win = (window_ms * sr / 1000.0).round_ties_even() as usize;
        let hop = (hop_ms * sr / 1000.0).round_ties_even() as usize;
        if win == 0 || hop == 0 {
            return Err(Error::arg(format!(
                "window {window_ms} ms / hop {hop_ms} ms is shorter than one sample at {sample_rate_hz} Hz"
            )));
        }
        Ok(Self {
            win,
            hop,
            fft_size: win.next_power_of_two(),
        })
    }

    pub fn n_frames(&self, n_samples: usize) -> usize {
        1 + n_samples / self.hop
    }

    pub fn n_bins(&self) -> usize {
        self.fft_size / 2 + 1
    }

    /// Periodic Hann window of length `win`, zero-padded symmetrically to
    /// `fft_size`.
    pub fn padded_window(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.fft_size];
        let offset = (self.fft_size - self.win) / 2;
        for n in 0..self.win {
            out[offset + n] = 0.5 * (1.0 - (2.0 * PI * n as f64 / self.win as f64).cos());
        }
        out
    }
}

/// Index into a signal reflect-padded on both sides (no edge repeat).
fn reflect_index(i: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let mut j = i.rem_euclid(period);
    if j >= len as isize {
        j = period - j;
    }
    j as usize
}

/// Fills `frame` with padded frame `t` multiplied by `window`.
pub(crate) fn fill_frame(samples: &[f64], layout: &FrameLayout, window: &[f64], t: usize, frame: &mut [f64]) {
    let start = (t * layout.hop) as isize - (layout.fft_size / 2) as isize;
    for (n, (dst, w)) in frame.iter_mut().zip(window).enumerate() {
        *dst = if *w == 0.0 {
            0.0
        } else {
            samples[reflect_index(start + n as isize, samples.len())] * w
        };
    }
}

/// Windowed frames, one row of `fft_size` samples per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frames {
    pub layout: FrameLayout,
    pub rows: Vec<Vec<f64>>,
}

/// Splits a signal into centered, reflect-padded, Hann-windowed frames.
pub fn frame_and_window(samples: &[f64], layout: FrameLayout) -> Result<Frames> {
    if samples.is_empty() {
        return Err(Error::arg("cannot frame an empty signal"));
    }
    let window = layout.padded_window();
    let rows = (0..layout.n_frames(samples.len()))
        .map(|t| {
            let mut frame = vec![0.0; layout.fft_size];
            fill_frame(samples, &layout, &window, t, &mut frame);
            frame
        })
        .collect();
    Ok(Frames { layout, rows })
}

/// Reusable real-input power spectrum kernel.
pub(crate) struct PowerSpectrum {
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl PowerSpectrum {
    pub(crate) fn new(fft_size: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(fft_size);
        let scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
        Self {
            fft,
            buf: vec![Complex::default(); fft_size],
            scratch,
        }
    }

    pub(crate) fn compute(&mut self, frame: &[f64], out: &mut [f64]) {
        for (dst, &x) in self.buf.iter_mut().zip(frame) {
            *dst = Complex::new(x, 0.0);
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (dst, c) in out.iter_mut().zip(&self.buf) {
            *dst = c.norm_sqr();
        }
    }
}

/// `|DFT|^2` of each frame, bins `0..=fft_size/2`.
pub fn power_spectrogram(frames: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let Some(first) = frames.first() else {
        return Vec::new();
    };
    let fft_size = first.len();
    let mut kernel = PowerSpectrum::new(fft_size);
    frames
        .iter()
        .map(|frame| {
            let mut row = vec![0.0; fft_size / 2 + 1];
            kernel.compute(frame, &mut row);
            row
        })
        .collect()
}
