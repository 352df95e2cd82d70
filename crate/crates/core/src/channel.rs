//! AWGN and SUI-1 fading channels.
//!
//! SUI-1 is a three-tap delay line. Each tap is Ricean: a fixed line-of-sight
//! part plus a scattered complex Gaussian part that evolves from one OFDM symbol
//! to the next as a first-order autoregressive process with coefficient
//! `exp(-2π f_d T_sym)`. Gains are frozen within a symbol.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::mapping::ModulationScheme;
use crate::ofdm::OfdmParams;

/// Noise variance per complex subcarrier sample for a target Eb/N0.
///
/// Subcarrier symbols carry unit energy, so N0 = 1 / (Eb/N0 · bits_per_subcarrier · rate).
pub fn snr_to_noise_variance(eb_n0_db: f64, scheme: ModulationScheme, code_rate: f64) -> Result<f64> {
    if code_rate.is_nan() || code_rate <= 0.0 {
        return Err(Error::InvalidParameter("code rate must be positive"));
    }
    let eb_n0 = libm::pow(10.0, eb_n0_db / 10.0);
    Ok(1.0 / (eb_n0 * scheme.bits_per_subcarrier() as f64 * code_rate))
}

/// Circularly-symmetric complex Gaussian noise source.
#[derive(Debug, Clone)]
pub struct Awgn {
    variance: f64,
    component: Option<Normal<f64>>,
}

impl Awgn {
    pub fn new(variance: f64) -> Result<Self> {
        if !variance.is_finite() || variance < 0.0 {
            return Err(Error::InvalidParameter(
                "noise variance must be finite and non-negative",
            ));
        }
        let component = if variance > 0.0 {
            Some(Normal::new(0.0, libm::sqrt(variance / 2.0)).unwrap())
        } else {
            None
        };
        Ok(Awgn { variance, component })
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn add_noise<R: Rng + ?Sized>(&self, rng: &mut R, samples: &mut [Complex64]) {
        if let Some(dist) = &self.component {
            for s in samples.iter_mut() {
                *s += Complex64::new(dist.sample(rng), dist.sample(rng));
            }
        }
    }
}

/// Adds noise of total complex variance `variance` drawn from a generator seeded with `seed`.
pub fn awgn_apply(samples: &[Complex64], variance: f64, seed: u64) -> Result<Vec<Complex64>> {
    let awgn = Awgn::new(variance)?;
    let mut out = samples.to_vec();
    awgn.add_noise(&mut ChaCha8Rng::seed_from_u64(seed), &mut out);
    Ok(out)
}

/// SUI-1 tap profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sui1Params {
    pub tap_power_db: [f64; 3],
    /// Linear Ricean K per tap; `f64::INFINITY` gives a pure line-of-sight tap.
    pub k_factor: [f64; 3],
    pub tap_delay_us: [f64; 3],
    pub doppler_hz: [f64; 3],
    /// Accepted for completeness; the link is single-antenna so it has no effect.
    pub ant_corr: f64,
    pub fnorm_db: f64,
}

impl Default for Sui1Params {
    fn default() -> Self {
        Sui1Params {
            tap_power_db: [0.0, -15.0, -20.0],
            k_factor: [4.0, 0.0, 0.0],
            tap_delay_us: [0.0, 0.4, 0.9],
            doppler_hz: [0.4, 0.3, 0.5],
            ant_corr: 0.7,
            fnorm_db: -0.1771,
        }
    }
}

impl Sui1Params {
    /// Normalization that brings the summed tap power to 0 dB.
    pub fn computed_fnorm_db(&self) -> f64 {
        let total: f64 = self.tap_power_db.iter().map(|p| libm::pow(10.0, p / 10.0)).sum();
        -10.0 * libm::log10(total)
    }

    /// Tap delays rounded to whole samples at the OFDM sample rate.
    pub fn sample_offsets(&self, ofdm: &OfdmParams) -> [usize; 3] {
        let fs = ofdm.sample_rate_hz();
        self.tap_delay_us.map(|d| libm::round(d * 1e-6 * fs) as usize)
    }
}

/// Per-symbol tap gains plus the noise level; doubles as the receiver's genie CSI.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `num_symbols * taps` gains, symbol-major.
    gains: Vec<Complex64>,
    offsets: Vec<usize>,
    n_fft: usize,
    pub noise_variance: f64,
}

impl ChannelRealization {
    pub fn new(gains: Vec<Complex64>, offsets: Vec<usize>, n_fft: usize) -> Result<Self> {
        if offsets.is_empty() || !gains.len().is_multiple_of(offsets.len()) {
            return Err(Error::InvalidParameter(
                "gains must hold a whole number of tap sets",
            ));
        }
        Ok(ChannelRealization {
            gains,
            offsets,
            n_fft,
            noise_variance: 0.0,
        })
    }

    /// A single unity tap for every symbol.
    pub fn flat(num_symbols: usize, n_fft: usize) -> Self {
        ChannelRealization {
            gains: vec![Complex64::new(1.0, 0.0); num_symbols],
            offsets: vec![0],
            n_fft,
            noise_variance: 0.0,
        }
    }

    pub fn with_noise_variance(mut self, variance: f64) -> Self {
        self.noise_variance = variance;
        self
    }

    pub fn num_taps(&self) -> usize {
        self.offsets.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.gains.len() / self.offsets.len()
    }

    pub fn sample_offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max_delay(&self) -> usize {
        self.offsets.iter().copied().max().unwrap_or(0)
    }

    pub fn symbol_gains(&self, symbol: usize) -> &[Complex64] {
        let t = self.num_taps();
        &self.gains[symbol * t..(symbol + 1) * t]
    }

    /// H at signed subcarrier `f` for one symbol.
    pub fn response_at(&self, symbol: usize, f: isize) -> Complex64 {
        let n = self.n_fft as f64;
        self.symbol_gains(symbol)
            .iter()
            .zip(&self.offsets)
            .map(|(&g, &d)| g * Complex64::from_polar(1.0, -TAU * f as f64 * d as f64 / n))
            .sum()
    }

    /// Full `n_fft`-bin frequency response of one symbol's impulse response.
    pub fn frequency_response(&self, symbol: usize) -> Vec<Complex64> {
        (0..self.n_fft)
            .map(|bin| self.response_at(symbol, bin as isize))
            .collect()
    }
}

/// Draws a SUI-1 realization spanning `num_symbols` OFDM symbols.
pub fn sui1_realize(num_symbols: usize, p: &Sui1Params, ofdm: &OfdmParams, seed: u64) -> ChannelRealization {
    sui1_realize_with(&mut ChaCha8Rng::seed_from_u64(seed), num_symbols, p, ofdm)
}

pub fn sui1_realize_with<R: Rng + ?Sized>(
    rng: &mut R,
    num_symbols: usize,
    p: &Sui1Params,
    ofdm: &OfdmParams,
) -> ChannelRealization {
    let half = Normal::new(0.0, libm::sqrt(0.5)).unwrap();
    let fnorm = libm::pow(10.0, p.fnorm_db / 20.0);
    let t_sym = ofdm.symbol_duration_s();

    struct Tap {
        amplitude: f64,
        los: f64,
        scatter: f64,
        rho: f64,
        innovation: f64,
        state: Complex64,
    }

    let mut taps: Vec<Tap> = (0..3)
        .map(|k| {
            let kf = p.k_factor[k];
            let (los, scatter) = if kf.is_infinite() {
                (1.0, 0.0)
            } else {
                (libm::sqrt(kf / (kf + 1.0)), libm::sqrt(1.0 / (kf + 1.0)))
            };
            let rho = libm::exp(-TAU * p.doppler_hz[k] * t_sym);
            Tap {
                amplitude: libm::pow(10.0, p.tap_power_db[k] / 20.0) * fnorm,
                los,
                scatter,
                rho,
                innovation: libm::sqrt(1.0 - rho * rho),
                state: Complex64::new(half.sample(rng), half.sample(rng)),
            }
        })
        .collect();

    let mut gains = Vec::with_capacity(num_symbols * 3);
    for s in 0..num_symbols {
        for tap in taps.iter_mut() {
            if s > 0 {
                let w = Complex64::new(half.sample(rng), half.sample(rng));
                tap.state = tap.state * tap.rho + w * tap.innovation;
            }
            gains.push((Complex64::new(tap.los, 0.0) + tap.state * tap.scatter) * tap.amplitude);
        }
    }

    ChannelRealization {
        gains,
        offsets: p.sample_offsets(ofdm).to_vec(),
        n_fft: ofdm.n_fft,
        noise_variance: 0.0,
    }
}

/// Passes a time-domain frame through the tapped delay line.
///
/// Each input sample is scaled by the gains of the symbol it belongs to; energy
/// that spills past a symbol boundary lands in the next symbol, and anything past
/// the end of the frame is dropped.
pub fn sui1_apply(frame: &[Complex64], r: &ChannelRealization, ofdm: &OfdmParams) -> Result<Vec<Complex64>> {
    let sym_len = ofdm.symbol_len();
    let expected = r.num_symbols() * sym_len;
    if frame.len() != expected {
        return Err(Error::Length {
            what: "frame for channel realization",
            expected,
            actual: frame.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); frame.len()];
    for (s, symbol) in frame.chunks_exact(sym_len).enumerate() {
        let base = s * sym_len;
        for (&g, &d) in r.symbol_gains(s).iter().zip(r.sample_offsets()) {
            for (i, &x) in symbol.iter().enumerate() {
                if let Some(y) = out.get_mut(base + i + d) {
                    *y += g * x;
                }
            }
        }
    }
    Ok(out)
}
