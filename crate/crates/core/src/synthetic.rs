//! Seeded two-group feature tables and test tones, used by tests and the
//! CLI fixtures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::audio_io::AudioClip;
use crate::dataset::{Dataset, SpeakerRecord};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub labels: [String; 2],
    pub sizes: [usize; 2],
    pub n_features: usize,
    /// `(1-based feature, shift in SD units)` added to the second group.
    pub shifts: Vec<(usize, f64)>,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(sizes: [usize; 2], shifts: Vec<(usize, f64)>, seed: u64) -> Self {
        Self {
            labels: ["english".into(), "mandarin".into()],
            sizes,
            n_features: crate::dataset::N_FEATURES,
            shifts,
            seed,
        }
    }
}

/// Independent standard-normal features with per-feature mean shifts for
/// the second group. Speaker ids are `<label>_<nnn>`.
pub fn generate_dataset(spec: &SyntheticSpec) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut shift = vec![0.0; spec.n_features];
    for &(f, s) in &spec.shifts {
        shift[f - 1] += s;
    }
    let mut records = Vec::with_capacity(spec.sizes[0] + spec.sizes[1]);
    for g in 0..2 {
        for i in 0..spec.sizes[g] {
            let features = (0..spec.n_features)
                .map(|j| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z + if g == 1 { shift[j] } else { 0.0 }
                })
                .collect();
            records.push(SpeakerRecord {
                speaker_id: format!("{}_{:03}", spec.labels[g], i + 1),
                group: spec.labels[g].clone(),
                features,
            });
        }
    }
    Dataset::new(records)
}

/// Sum of sinusoids `(freq_hz, amplitude)` plus optional seeded white noise.
pub fn tone(
    sample_rate_hz: u32,
    seconds: f64,
    partials: &[(f64, f64)],
    noise_sd: f64,
    seed: u64,
    source_id: &str,
) -> Result<AudioClip> {
    let n = (seconds * sample_rate_hz as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sr = sample_rate_hz as f64;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let s: f64 = partials
                .iter()
                .map(|&(f, a)| a * (2.0 * std::f64::consts::PI * f * t).sin())
                .sum();
            let z: f64 = StandardNormal.sample(&mut rng);
            s + noise_sd * z
        })
        .collect();
    AudioClip::new(samples, sample_rate_hz, source_id)
}
