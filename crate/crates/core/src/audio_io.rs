//! RIFF/WAVE decoding into normalized mono waveforms.
//!
//! Only uncompressed PCM (8/16/24/32-bit integer) and IEEE float (32/64-bit)
//! payloads are accepted. Multi-channel audio is averaged per frame. Chunks
//! other than `fmt ` and `data` are skipped.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Decoded mono recording.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    /// Amplitudes in `[-1.0, 1.0]`.
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
    pub source_id: String,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32, source_id: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::arg("audio clip has no samples"));
        }
        if sample_rate_hz == 0 {
            return Err(Error::arg("sample rate must be positive"));
        }
        if let Some(bad) = samples.iter().find(|s| !(-1.0..=1.0).contains(*s)) {
            return Err(Error::arg(format!("sample {bad} outside [-1, 1]")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source_id: source_id.into(),
        })
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SampleFormat {
    Int,
    Float,
}

#[derive(Debug, Clone, Copy)]
struct FmtChunk {
    format: SampleFormat,
    channels: u16,
    sample_rate: u32,
    block_align: u16,
    bits_per_sample: u16,
}

/// Reads and decodes a WAV file.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_wav(&bytes, path)
}

/// Decodes an in-memory WAV image. `path` is only used for error reporting
/// and as the clip's `source_id`.
pub fn decode_wav(bytes: &[u8], path: &Path) -> Result<AudioClip> {
    let err = |offset: usize, message: &str| Error::Wav {
        path: PathBuf::from(path),
        offset: offset as u64,
        message: message.to_string(),
    };

    if bytes.len() < 12 {
        return Err(err(0, "file too short for a RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(err(0, "missing RIFF magic"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(err(8, "RIFF form type is not WAVE"));
    }

    let mut pos = 12usize;
    let mut fmt: Option<FmtChunk> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body = pos + 8;
        match id {
            b"fmt " => {
                if size < 16 || body + size > bytes.len() {
                    return Err(err(pos, "fmt chunk truncated"));
                }
                fmt = Some(parse_fmt(&bytes[body..body + size], body, &err)?);
            }
            b"data" => {
                let fmt = fmt.ok_or_else(|| err(pos, "data chunk before fmt chunk"))?;
                if size == 0 {
                    return Err(err(pos, "zero-length data chunk"));
                }
                if body + size > bytes.len() {
                    return Err(err(
                        bytes.len(),
                        &format!(
                            "data chunk truncated: declared {size} bytes, {} present",
                            bytes.len() - body
                        ),
                    ));
                }
                if !size.is_multiple_of(fmt.block_align as usize) {
                    return Err(err(body + size, "data chunk ends inside a sample frame"));
                }
                let samples = decode_samples(&bytes[body..body + size], fmt);
                if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
                    return Err(err(body + i * fmt.block_align as usize, "non-finite float sample"));
                }
                return Ok(AudioClip {
                    samples,
                    sample_rate_hz: fmt.sample_rate,
                    source_id: path.display().to_string(),
                });
            }
            _ => {}
        }
        // chunks are word aligned
        pos = body + size + (size & 1);
    }
    Err(err(bytes.len(), "no data chunk found"))
}

fn parse_fmt(body: &[u8], offset: usize, err: &dyn Fn(usize, &str) -> Error) -> Result<FmtChunk> {
    let u16_at = |i: usize| u16::from_le_bytes([body[i], body[i + 1]]);
    let mut tag = u16_at(0);
    let channels = u16_at(2);
    let sample_rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
    let block_align = u16_at(12);
    let bits_per_sample = u16_at(14);

    if tag == FORMAT_EXTENSIBLE {
        // cbSize(2) validBits(2) channelMask(4) then the sub-format GUID
        if body.len() < 26 {
            return Err(err(offset, "extensible fmt chunk truncated"));
        }
        tag = u16_at(24);
    }
    let format = match tag {
        FORMAT_PCM => SampleFormat::Int,
        FORMAT_IEEE_FLOAT => SampleFormat::Float,
        other => {
            return Err(err(offset, &format!("unsupported codec tag 0x{other:04x}")));
        }
    };
    if channels == 0 {
        return Err(err(offset + 2, "zero channels"));
    }
    if sample_rate == 0 {
        return Err(err(offset + 4, "zero sample rate"));
    }
    let supported = match format {
        SampleFormat::Int => matches!(bits_per_sample, 8 | 16 | 24 | 32),
        SampleFormat::Float => matches!(bits_per_sample, 32 | 64),
    };
    if !supported {
        return Err(err(offset + 14, &format!("unsupported bit depth {bits_per_sample}")));
    }
    let expected_align = channels as usize * (bits_per_sample as usize / 8);
    if block_align as usize != expected_align {
        return Err(err(
            offset + 12,
            &format!("block align {block_align}, expected {expected_align}"),
        ));
    }
    Ok(FmtChunk {
        format,
        channels,
        sample_rate,
        block_align,
        bits_per_sample,
    })
}

fn decode_samples(data: &[u8], fmt: FmtChunk) -> Vec<f64> {
    let width = fmt.bits_per_sample as usize / 8;
    let channels = fmt.channels as usize;
    let decode_one: fn(&[u8]) -> f64 = match (fmt.format, fmt.bits_per_sample) {
        (SampleFormat::Int, 8) => |b| (b[0] as f64 - 128.0) / 128.0,
        (SampleFormat::Int, 16) => |b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0,
        (SampleFormat::Int, 24) => |b| {
            // sign-extend by placing the 3 bytes in the high end of an i32
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            v as f64 / 8_388_608.0
        },
        (SampleFormat::Int, 32) => |b| i32::from_le_bytes(b.try_into().unwrap()) as f64 / 2_147_483_648.0,
        (SampleFormat::Float, 32) => |b| clamp_unit(f32::from_le_bytes(b.try_into().unwrap()) as f64),
        (SampleFormat::Float, 64) => |b| clamp_unit(f64::from_le_bytes(b.try_into().unwrap())),
        _ => unreachable!("bit depth validated in parse_fmt"),
    };

    data.chunks_exact(fmt.block_align as usize)
        .map(|frame| {
            let sum: f64 = frame.chunks_exact(width).map(decode_one).sum();
            sum / channels as f64
        })
        .collect()
}

fn clamp_unit(x: f64) -> f64 {
    if x.is_finite() {
        x.clamp(-1.0, 1.0)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wav_bytes(tag: u16, channels: u16, rate: u32, bits: u16, payload: &[u8], extra: &[u8]) -> Vec<u8> {
        let align = channels * bits / 8;
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&0u32.to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(extra);
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&tag.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&rate.to_le_bytes());
        out.extend_from_slice(&(rate * align as u32).to_le_bytes());
        out.extend_from_slice(&align.to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
        out.extend_from_slice(payload);
        let riff = (out.len() - 8) as u32;
        out[4..8].copy_from_slice(&riff.to_le_bytes());
        out
    }

    fn decode(bytes: &[u8]) -> Result<AudioClip> {
        decode_wav(bytes, Path::new("mem.wav"))
    }

    #[test]
    fn silence_decodes_to_zeros() {
        let clip = decode(&wav_bytes(1, 1, 8000, 16, &[0u8; 20], &[])).unwrap();
        assert_eq!(clip.samples, vec![0.0; 10]);
        assert_eq!(clip.sample_rate_hz, 8000);
    }

    #[test]
    fn int16_full_scale() {
        let payload = [32767i16, -32768]
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect::<Vec<_>>();
        let clip = decode(&wav_bytes(1, 1, 44100, 16, &payload, &[])).unwrap();
        assert_eq!(clip.samples, vec![32767.0 / 32768.0, -1.0]);
    }

    #[test]
    fn stereo_opposites_downmix_to_zero() {
        let payload = [16384i16, -16384]
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect::<Vec<_>>();
        let clip = decode(&wav_bytes(1, 2, 44100, 16, &payload, &[])).unwrap();
        assert_eq!(clip.samples, vec![0.0]);
    }

    #[test]
    fn eight_bit_is_offset_binary() {
        let clip = decode(&wav_bytes(1, 1, 8000, 8, &[0, 128, 255], &[])).unwrap();
        assert_eq!(clip.samples, vec![-1.0, 0.0, 127.0 / 128.0]);
    }

    #[test]
    fn twenty_four_bit_sign_extension() {
        // -1 and +2^22
        let payload = [0xFF, 0xFF, 0xFF, 0x00, 0x00, 0x40];
        let clip = decode(&wav_bytes(1, 1, 8000, 24, &payload, &[])).unwrap();
        assert_eq!(clip.samples, vec![-1.0 / 8_388_608.0, 0.5]);
    }

    #[test]
    fn float_formats() {
        let p32 = [0.25f32, -0.5].iter().flat_map(|v| v.to_le_bytes()).collect::<Vec<_>>();
        let clip = decode(&wav_bytes(3, 1, 8000, 32, &p32, &[])).unwrap();
        assert_eq!(clip.samples, vec![0.25, -0.5]);
        let p64 = [0.125f64, 2.0].iter().flat_map(|v| v.to_le_bytes()).collect::<Vec<_>>();
        let clip = decode(&wav_bytes(3, 1, 8000, 64, &p64, &[])).unwrap();
        assert_eq!(clip.samples, vec![0.125, 1.0]);
    }

    #[test]
    fn int32_scaling() {
        let payload = i32::MIN.to_le_bytes();
        let clip = decode(&wav_bytes(1, 1, 8000, 32, &payload, &[])).unwrap();
        assert_eq!(clip.samples, vec![-1.0]);
    }

    #[test]
    fn skips_extra_chunks() {
        let mut list = Vec::new();
        list.extend_from_slice(b"LIST");
        list.extend_from_slice(&3u32.to_le_bytes());
        list.extend_from_slice(b"abc\0"); // odd size plus pad byte
        let clip = decode(&wav_bytes(1, 1, 8000, 16, &[1, 0], &list)).unwrap();
        assert_eq!(clip.samples.len(), 1);
    }

    #[test]
    fn rejects_compressed_codec() {
        let e = decode(&wav_bytes(2, 1, 8000, 16, &[0, 0], &[])).unwrap_err();
        assert!(matches!(e, Error::Wav { offset: 20, .. }), "{e}");
        assert!(e.to_string().contains("unsupported codec"));
    }

    #[test]
    fn rejects_bad_header() {
        let mut bytes = wav_bytes(1, 1, 8000, 16, &[0, 0], &[]);
        bytes[0] = b'X';
        assert!(decode(&bytes).unwrap_err().to_string().contains("RIFF"));
        assert!(decode(b"RIFF").is_err());
    }

    #[test]
    fn rejects_empty_and_truncated_data() {
        let e = decode(&wav_bytes(1, 1, 8000, 16, &[], &[])).unwrap_err();
        assert!(e.to_string().contains("zero-length"), "{e}");

        let mut bytes = wav_bytes(1, 1, 8000, 16, &[0, 0, 0, 0], &[]);
        bytes.truncate(bytes.len() - 2);
        let e = decode(&bytes).unwrap_err();
        assert!(e.to_string().contains("truncated"), "{e}");
        assert!(e.to_string().starts_with("mem.wav"));
    }

    #[test]
    fn rejects_partial_frame() {
        let e = decode(&wav_bytes(1, 1, 8000, 16, &[0, 0, 0], &[])).unwrap_err();
        assert!(e.to_string().contains("inside a sample frame"), "{e}");
    }

    #[test]
    fn data_before_fmt_is_malformed() {
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF\0\0\0\0WAVEdata");
        out.extend_from_slice(&2u32.to_le_bytes());
        out.extend_from_slice(&[0, 0]);
        assert!(decode(&out).unwrap_err().to_string().contains("before fmt"));
    }

    #[test]
    fn clip_constructor_validates() {
        assert!(AudioClip::new(vec![], 8000, "x").is_err());
        assert!(AudioClip::new(vec![0.0], 0, "x").is_err());
        assert!(AudioClip::new(vec![1.5], 8000, "x").is_err());
        assert!(AudioClip::new(vec![0.5], 8000, "x").is_ok());
    }
}
