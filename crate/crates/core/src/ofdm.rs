//! OFDM symbol assembly: 200 data subcarriers in a 256-point DFT with a cyclic prefix.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft;

/// Cyclic-prefix length as a fraction of the useful symbol time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GuardRatio {
    Quarter,
    Eighth,
    Sixteenth,
    ThirtySecond,
}

impl GuardRatio {
    pub const ALL: [GuardRatio; 4] = [Self::Quarter, Self::Eighth, Self::Sixteenth, Self::ThirtySecond];

    pub fn denominator(self) -> usize {
        match self {
            Self::Quarter => 4,
            Self::Eighth => 8,
            Self::Sixteenth => 16,
            Self::ThirtySecond => 32,
        }
    }

    pub fn as_f64(self) -> f64 {
        1.0 / self.denominator() as f64
    }

    /// Exact match against 0.25, 0.125, 0.0625 or 0.03125.
    pub fn from_f64(g: f64) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_f64() == g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmParams {
    pub n_fft: usize,
    pub n_used: usize,
    pub guard: GuardRatio,
    pub channel_bw_hz: f64,
    /// Sampling factor as numerator/denominator.
    pub sampling_factor: (u32, u32),
}

impl OfdmParams {
    pub fn new(guard: GuardRatio) -> Self {
        OfdmParams {
            n_fft: 256,
            n_used: 200,
            guard,
            channel_bw_hz: 2.5e6,
            sampling_factor: (28, 25),
        }
    }

    pub fn cp_len(&self) -> usize {
        self.n_fft / self.guard.denominator()
    }

    pub fn symbol_len(&self) -> usize {
        self.n_fft + self.cp_len()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        let (num, den) = self.sampling_factor;
        self.channel_bw_hz * num as f64 / den as f64
    }

    /// Duration of one OFDM symbol including its prefix.
    pub fn symbol_duration_s(&self) -> f64 {
        self.symbol_len() as f64 / self.sample_rate_hz()
    }

    /// Signed subcarrier index carrying data slot `k`: −100…−1 then +1…+100.
    pub fn subcarrier(&self, k: usize) -> isize {
        let half = (self.n_used / 2) as isize;
        let k = k as isize;
        if k < half {
            k - half
        } else {
            k - half + 1
        }
    }

    /// DFT bin for data slot `k`.
    pub fn bin(&self, k: usize) -> usize {
        self.subcarrier(k).rem_euclid(self.n_fft as isize) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_fft.is_power_of_two() {
            return Err(Error::InvalidParameter("n_fft must be a power of two"));
        }
        if !self.n_used.is_multiple_of(2) || self.n_used + 1 > self.n_fft {
            return Err(Error::InvalidParameter(
                "n_used must be even and leave room for DC",
            ));
        }
        if !self.n_fft.is_multiple_of(self.guard.denominator()) {
            return Err(Error::InvalidParameter(
                "cyclic prefix must be a whole number of samples",
            ));
        }
        Ok(())
    }
}

impl Default for OfdmParams {
    fn default() -> Self {
        OfdmParams::new(GuardRatio::Quarter)
    }
}

/// Modulator/demodulator with a cached FFT plan.
#[derive(Debug, Clone)]
pub struct Ofdm {
    params: OfdmParams,
    fft: Fft,
    bins: Vec<usize>,
}

impl Ofdm {
    pub fn new(params: OfdmParams) -> Result<Self> {
        params.validate()?;
        Ok(Ofdm {
            fft: Fft::new(params.n_fft),
            bins: (0..params.n_used).map(|k| params.bin(k)).collect(),
            params,
        })
    }

    pub fn params(&self) -> &OfdmParams {
        &self.params
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    /// DFT bin of each data slot, in slot order.
    pub fn bins(&self) -> &[usize] {
        &self.bins
    }

    pub fn modulate(&self, freq: &[Complex64]) -> Result<Vec<Complex64>> {
        let used = self.params.n_used;
        if !freq.len().is_multiple_of(used) {
            return Err(Error::NotMultiple {
                what: "subcarrier symbols",
                multiple: used,
                actual: freq.len(),
            });
        }
        let n = self.params.n_fft;
        let cp = self.params.cp_len();
        let mut out = Vec::with_capacity(freq.len() / used * (n + cp));
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for chunk in freq.chunks_exact(used) {
            buf.fill(Complex64::new(0.0, 0.0));
            for (&bin, &x) in self.bins.iter().zip(chunk) {
                buf[bin] = x;
            }
            self.fft.inverse(&mut buf);
            out.extend_from_slice(&buf[n - cp..]);
            out.extend_from_slice(&buf);
        }
        Ok(out)
    }

    pub fn demodulate(&self, frame: &[Complex64]) -> Result<Vec<Complex64>> {
        let sym_len = self.params.symbol_len();
        if !frame.len().is_multiple_of(sym_len) {
            return Err(Error::NotMultiple {
                what: "OFDM frame",
                multiple: sym_len,
                actual: frame.len(),
            });
        }
        let cp = self.params.cp_len();
        let mut out = Vec::with_capacity(frame.len() / sym_len * self.params.n_used);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.params.n_fft];
        for symbol in frame.chunks_exact(sym_len) {
            buf.copy_from_slice(&symbol[cp..]);
            self.fft.forward(&mut buf);
            out.extend(self.bins.iter().map(|&b| buf[b]));
        }
        Ok(out)
    }
}

pub fn ofdm_modulate(freq: &[Complex64], p: &OfdmParams) -> Result<Vec<Complex64>> {
    Ofdm::new(*p)?.modulate(freq)
}

pub fn ofdm_demodulate(frame: &[Complex64], p: &OfdmParams) -> Result<Vec<Complex64>> {
    Ofdm::new(*p)?.demodulate(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symbols(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn prefix_lengths() {
        let lens: Vec<usize> = GuardRatio::ALL
            .iter()
            .map(|&g| OfdmParams::new(g).cp_len())
            .collect();
        assert_eq!(lens, vec![64, 32, 16, 8]);
        assert_eq!(OfdmParams::new(GuardRatio::Quarter).symbol_len(), 320);
        let p = OfdmParams::default();
        assert!((p.sample_rate_hz() - 2.8e6).abs() < 1e-6);
    }

    #[test]
    fn used_subcarrier_layout() {
        let p = OfdmParams::default();
        let subs: Vec<isize> = (0..200).map(|k| p.subcarrier(k)).collect();
        assert_eq!(subs[0], -100);
        assert_eq!(subs[99], -1);
        assert_eq!(subs[100], 1);
        assert_eq!(subs[199], 100);
        assert!(!subs.contains(&0));
        assert_eq!(p.bin(0), 156);
        assert_eq!(p.bin(100), 1);
    }

    #[test]
    fn zero_in_zero_out() {
        let out = ofdm_modulate(&vec![Complex64::new(0.0, 0.0); 400], &OfdmParams::default()).unwrap();
        assert_eq!(out.len(), 640);
        assert!(out.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn prefix_copies_the_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for g in GuardRatio::ALL {
            let p = OfdmParams::new(g);
            let out = ofdm_modulate(&random_symbols(&mut rng, 600), &p).unwrap();
            let cp = p.cp_len();
            for sym in out.chunks_exact(p.symbol_len()) {
                assert_eq!(&sym[..cp], &sym[256..256 + cp]);
            }
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for g in GuardRatio::ALL {
            let ofdm = Ofdm::new(OfdmParams::new(g)).unwrap();
            for _ in 0..100 {
                let x = random_symbols(&mut rng, 200);
                let frame = ofdm.modulate(&x).unwrap();
                let back = ofdm.demodulate(&frame).unwrap();
                let err = x
                    .iter()
                    .zip(&back)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-9);
                let e_time: f64 = frame[ofdm.params().cp_len()..].iter().map(|s| s.norm_sqr()).sum();
                let e_freq: f64 = x.iter().map(|s| s.norm_sqr()).sum();
                assert!((e_time - e_freq).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn circular_shift_rotates_bins() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let ofdm = Ofdm::new(OfdmParams::default()).unwrap();
        let x = random_symbols(&mut rng, 200);
        let frame = ofdm.modulate(&x).unwrap();
        let cp = ofdm.params().cp_len();
        let useful = &frame[cp..];
        let k = 3;
        let mut shifted = vec![Complex64::new(0.0, 0.0); cp];
        shifted.extend((0..256).map(|i| useful[(i + 256 - k) % 256]));
        let y = ofdm.demodulate(&shifted).unwrap();
        for slot in [0usize, 99, 100, 199] {
            let f = ofdm.params().subcarrier(slot) as f64;
            let rot = Complex64::from_polar(1.0, -core::f64::consts::TAU * f * k as f64 / 256.0);
            assert!((y[slot] - x[slot] * rot).norm() < 1e-9, "slot {slot}");
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        let p = OfdmParams::default();
        assert!(ofdm_modulate(&vec![Complex64::new(0.0, 0.0); 199], &p).is_err());
        assert!(ofdm_demodulate(&vec![Complex64::new(0.0, 0.0); 321], &p).is_err());
    }
}
