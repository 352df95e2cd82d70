//! WAV round trip: 8-bit unsigned mono PCM at 8 kHz, each sample sent MSB first.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wimax_phy_core::bits::{bits_to_bytes, bytes_to_bits};
use wimax_phy_core::channel::{snr_to_noise_variance, Awgn};
use wimax_phy_core::engine::pass_through;
use wimax_phy_core::link::count_bit_errors;
use wimax_phy_core::{Link, SimConfig};

use crate::error::{Result, SimError};

pub const SAMPLE_RATE: u32 = 8000;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AudioSegment {
    /// Unsigned 8-bit PCM, 128 is silence.
    pub samples: Vec<u8>,
}

impl AudioSegment {
    pub fn to_bits(&self) -> Vec<u8> {
        bytes_to_bits(&self.samples)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        AudioSegment {
            samples: bits_to_bytes(bits),
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / SAMPLE_RATE as f64
    }
}

fn wav_format() -> hound::WavSpec {
    hound::WavSpec {
        channels: 1,
        sample_rate: SAMPLE_RATE,
        bits_per_sample: 8,
        sample_format: hound::SampleFormat::Int,
    }
}

fn hound_err(path: &Path, e: hound::Error) -> SimError {
    match e {
        hound::Error::IoError(io) => SimError::io(path, io),
        other => SimError::Format {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

pub fn read_wav(path: &Path) -> Result<AudioSegment> {
    let reader = hound::WavReader::open(path).map_err(|e| hound_err(path, e))?;
    let s = reader.spec();
    if s != wav_format() {
        return Err(SimError::Format {
            path: path.to_path_buf(),
            message: format!(
                "unsupported audio format ({} channel(s), {} Hz, {}-bit {:?}); \
                 expected mono 8-bit unsigned PCM at 8000 Hz",
                s.channels, s.sample_rate, s.bits_per_sample, s.sample_format
            ),
        });
    }
    let samples = reader
        .into_samples::<i8>()
        .map(|x| x.map(|v| (v as i16 + 128) as u8))
        .collect::<std::result::Result<Vec<u8>, _>>()
        .map_err(|e| hound_err(path, e))?;
    Ok(AudioSegment { samples })
}

pub fn write_wav(path: &Path, seg: &AudioSegment) -> Result<()> {
    let mut w = hound::WavWriter::create(path, wav_format()).map_err(|e| hound_err(path, e))?;
    for &s in &seg.samples {
        w.write_sample((s as i16 - 128) as i8)
            .map_err(|e| hound_err(path, e))?;
    }
    w.finalize().map_err(|e| hound_err(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AudioReport {
    pub samples: usize,
    pub payload_bits: usize,
    pub bit_errors: usize,
    pub ber: f64,
    pub sample_errors: usize,
    pub rs_failures: usize,
}

/// Sends the whole segment as one transmission at `eb_n0_db`.
pub fn transmit_audio(
    seg: &AudioSegment,
    cfg: &SimConfig,
    eb_n0_db: f64,
    seed: u64,
) -> Result<(AudioSegment, AudioReport)> {
    if eb_n0_db.is_nan() {
        return Err(SimError::Config("Eb/N0 must be a number".into()));
    }
    let link = Link::new(cfg.clone())?;
    let noise = Awgn::new(snr_to_noise_variance(eb_n0_db, cfg.scheme, cfg.code_rate())?)?;
    let payload = seg.to_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rx = pass_through(&link, &payload, &noise, &mut rng)?;

    let out = AudioSegment::from_bits(&rx.bits);
    let bit_errors = count_bit_errors(&payload, &rx.bits);
    let report = AudioReport {
        samples: seg.samples.len(),
        payload_bits: payload.len(),
        bit_errors,
        ber: if payload.is_empty() {
            0.0
        } else {
            bit_errors as f64 / payload.len() as f64
        },
        sample_errors: seg
            .samples
            .iter()
            .zip(&out.samples)
            .filter(|(a, b)| a != b)
            .count(),
        rs_failures: rx.rs_failures,
    };
    Ok((out, report))
}
