//! Monte Carlo BER estimation for a single operating point.
//!
//! Each trial draws a fresh payload, a fresh channel realization and fresh noise
//! from a generator seeded by [`trial_seed`]. Trials are folded in index order by
//! [`PointAccumulator`], so any executor that evaluates the same trial indices and
//! folds them in order reproduces the same [`BerRecord`] bit for bit.

use alloc::vec::Vec;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{snr_to_noise_variance, sui1_apply, sui1_realize_with, Awgn};
use crate::error::{Error, Result};
use crate::link::{count_bit_errors, ChannelKind, Link, Reception, SimConfig};
use crate::mapping::ModulationScheme;
use crate::ofdm::GuardRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_payload_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 100,
            max_payload_bits: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: ModulationScheme,
    pub guard: GuardRatio,
    pub channel: ChannelKind,
    pub eb_n0_db: f64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub trials: u64,
    pub seed: u64,
    /// Σ (errors in trial)², for the trial-level standard error.
    pub trial_error_sq_sum: f64,
    /// Stopped on the bit budget before collecting `min_errors` errors.
    pub floor_limited: bool,
}

impl BerRecord {
    /// Standard error of `ber`, estimated from the spread of per-trial error counts.
    ///
    /// This accounts for error clustering (RS block failures, fades), which a
    /// binomial estimate would understate.
    pub fn std_error(&self) -> f64 {
        if self.trials < 2 || self.bits_sent == 0 {
            return f64::INFINITY;
        }
        let t = self.trials as f64;
        let bits_per_trial = self.bits_sent as f64 / t;
        let mean = self.bit_errors as f64 / t;
        let var = ((self.trial_error_sq_sum / t - mean * mean) * t / (t - 1.0)).max(0.0);
        libm::sqrt(var / t) / bits_per_trial
    }

    /// BER used for log-domain interpolation; zero-error points count as half an error.
    pub fn ber_for_log(&self) -> f64 {
        if self.bit_errors == 0 {
            0.5 / self.bits_sent.max(1) as f64
        } else {
            self.ber
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub bits: u64,
    pub errors: u64,
}

/// In-order fold of trial outcomes under a stop rule.
#[derive(Debug, Clone)]
pub struct PointAccumulator {
    stop: StopRule,
    bits_sent: u64,
    bit_errors: u64,
    trials: u64,
    sq_sum: f64,
}

impl PointAccumulator {
    pub fn new(stop: StopRule) -> Self {
        PointAccumulator {
            stop,
            bits_sent: 0,
            bit_errors: 0,
            trials: 0,
            sq_sum: 0.0,
        }
    }

    pub fn is_done(&self) -> bool {
        self.bit_errors >= self.stop.min_errors || self.bits_sent >= self.stop.max_payload_bits
    }

    /// Adds one trial; returns true once the stop rule is met.
    pub fn push(&mut self, outcome: TrialOutcome) -> bool {
        self.bits_sent += outcome.bits;
        self.bit_errors += outcome.errors;
        self.trials += 1;
        self.sq_sum += (outcome.errors as f64) * (outcome.errors as f64);
        self.is_done()
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn finish(self, cfg: &SimConfig, eb_n0_db: f64, seed: u64) -> BerRecord {
        BerRecord {
            scheme: cfg.scheme,
            guard: cfg.guard(),
            channel: cfg.channel,
            eb_n0_db,
            bits_sent: self.bits_sent,
            bit_errors: self.bit_errors,
            ber: if self.bits_sent == 0 {
                0.0
            } else {
                self.bit_errors as f64 / self.bits_sent as f64
            },
            trials: self.trials,
            seed,
            trial_error_sq_sum: self.sq_sum,
            floor_limited: self.bit_errors < self.stop.min_errors,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix: `h = splitmix64(h ^ part)` from a fixed start value.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x243F_6A88_85A3_08D3u64, |h, &p| splitmix64(h ^ p))
}

/// Seed of trial `index` at one grid point.
pub fn trial_seed(cfg: &SimConfig, eb_n0_db: f64, master_seed: u64, index: u64) -> u64 {
    let centi_db = libm::round(eb_n0_db * 100.0) as i64;
    mix_seed(&[
        master_seed,
        cfg.scheme.id(),
        cfg.guard().denominator() as u64,
        cfg.channel.id(),
        centi_db as u64,
        index,
    ])
}

fn random_payload<R: RngCore>(rng: &mut R, n: usize) -> Vec<u8> {
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word = rng.next_u64();
        let take = (n - bits.len()).min(64);
        bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    bits
}

/// Sends `payload` through the configured channel and receiver, drawing the
/// fading realization and then the noise from `rng`.
pub fn pass_through<R: Rng + ?Sized>(
    link: &Link,
    payload: &[u8],
    noise: &Awgn,
    rng: &mut R,
) -> Result<Reception> {
    let cfg = link.config();
    let (freq, layout) = link.transmit_subcarriers(payload)?;
    let frame = link.ofdm().modulate(&freq)?;

    let (rx_frame, csi) = match cfg.channel {
        ChannelKind::Awgn => (frame, None),
        ChannelKind::Sui1 => {
            let csi = sui1_realize_with(rng, layout.ofdm_symbols, &cfg.sui1, &cfg.ofdm)
                .with_noise_variance(noise.variance());
            (sui1_apply(&frame, &csi, &cfg.ofdm)?, Some(csi))
        }
    };
    let mut rx: Vec<Complex64> = link.ofdm().demodulate(&rx_frame)?;
    noise.add_noise(rng, &mut rx);
    link.receive_subcarriers(rx, csi.as_ref(), &layout)
}

/// One transmit → channel → receive pass over a fresh random payload.
pub fn run_trial(link: &Link, noise: &Awgn, seed: u64) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payload = random_payload(&mut rng, link.config().trial_payload_bits);
    let reception = pass_through(link, &payload, noise, &mut rng)?;
    Ok(TrialOutcome {
        bits: payload.len() as u64,
        errors: count_bit_errors(&payload, &reception.bits) as u64,
    })
}

/// Runs trials until the stop rule fires, with the noise level given directly.
pub fn run_point_at_variance(
    cfg: &SimConfig,
    eb_n0_db: f64,
    variance: f64,
    stop: StopRule,
    master_seed: u64,
) -> Result<BerRecord> {
    let link = Link::new(cfg.clone())?;
    let noise = Awgn::new(variance)?;
    let mut acc = PointAccumulator::new(stop);
    let mut index = 0;
    loop {
        let outcome = run_trial(&link, &noise, trial_seed(cfg, eb_n0_db, master_seed, index))?;
        index += 1;
        if acc.push(outcome) {
            break;
        }
    }
    Ok(acc.finish(cfg, eb_n0_db, master_seed))
}

pub fn run_point(cfg: &SimConfig, eb_n0_db: f64, stop: StopRule, master_seed: u64) -> Result<BerRecord> {
    if !eb_n0_db.is_finite() {
        return Err(Error::InvalidParameter("Eb/N0 must be finite"));
    }
    let variance = snr_to_noise_variance(eb_n0_db, cfg.scheme, cfg.code_rate())?;
    run_point_at_variance(cfg, eb_n0_db, variance, stop, master_seed)
}

/// Q(√(2·Eb/N0)): uncoded Gray QPSK bit error probability on AWGN.
pub fn qpsk_awgn_reference(eb_n0_db: f64) -> f64 {
    let eb_n0 = libm::pow(10.0, eb_n0_db / 10.0);
    0.5 * libm::erfc(libm::sqrt(eb_n0))
}

/// Eb/N0 at which the BER curve first crosses `target`, interpolating log10(BER)
/// linearly in dB between the bracketing records.
///
/// `records` must be sorted by Eb/N0. Zero-error records are treated as half an
/// error over their bit count.
pub fn interpolate_required_ebn0(records: &[BerRecord], target: f64) -> Result<f64> {
    let points: Vec<(f64, f64)> = records.iter().map(|r| (r.eb_n0_db, r.ber_for_log())).collect();
    interpolate_crossing(&points, target)
}

/// Same rule on raw `(dB, ber)` pairs.
pub fn interpolate_crossing(points: &[(f64, f64)], target: f64) -> Result<f64> {
    if let Some(&(db, _)) = points.iter().find(|(_, ber)| *ber == target) {
        return Ok(db);
    }
    for pair in points.windows(2) {
        let (x0, y0) = pair[0];
        let (x1, y1) = pair[1];
        if y0 > target && y1 < target {
            let (l0, l1, lt) = (libm::log10(y0), libm::log10(y1), libm::log10(target));
            return Ok(x0 + (l0 - lt) / (l0 - l1) * (x1 - x0));
        }
    }
    Err(Error::NotBracketed)
}
