//! Acoustic feature extraction and statistical analysis for comparing the
//! speech of two first-language groups.
//!
//! The crate covers the whole numerical pipeline:
//!
//! * [`audio_io`] decodes RIFF/WAVE files into mono `f64` waveforms.
//! * [`dsp`] computes 13 mel-frequency cepstral coefficients per frame and
//!   mean-pools them into one vector per speaker.
//! * [`stats_uni`] runs per-feature t-tests with assumption checks.
//! * [`stats_mv`] runs Box's M, a Pillai-trace MANOVA and a canonical
//!   discriminant analysis.
//! * [`ml`] trains random forests on feature subsets and compares them.

// `!(x > y)` is used on purpose so that NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audio_io;
pub mod dataset;
pub mod dsp;
pub mod error;
pub mod linalg;
pub mod ml;
pub mod special;
pub mod stats_mv;
pub mod stats_uni;
pub mod synthetic;

pub use dataset::{Dataset, SpeakerRecord, N_FEATURES};
pub use error::{Error, ErrorKind, Result};
