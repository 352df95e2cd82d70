//! Gray-labelled square QAM with unit average energy.
//!
//! Each symbol's bits split into an I half and a Q half (I first). Within a half
//! the first bit is the sign (0 = positive) and the remaining bits are the
//! binary-reflected Gray code of the magnitude index, so neighbouring levels
//! differ in one bit, including across the origin.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModulationScheme {
    Qpsk,
    Qam16,
    Qam64,
}

impl ModulationScheme {
    pub const ALL: [ModulationScheme; 3] = [Self::Qpsk, Self::Qam16, Self::Qam64];

    pub fn bits_per_subcarrier(self) -> usize {
        match self {
            Self::Qpsk => 2,
            Self::Qam16 => 4,
            Self::Qam64 => 6,
        }
    }

    pub fn bits_per_axis(self) -> usize {
        self.bits_per_subcarrier() / 2
    }

    /// Amplitude scale giving unit mean energy: 1/√2, 1/√10, 1/√42.
    pub fn norm(self) -> f64 {
        match self {
            Self::Qpsk => 1.0 / libm::sqrt(2.0),
            Self::Qam16 => 1.0 / libm::sqrt(10.0),
            Self::Qam64 => 1.0 / libm::sqrt(42.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Qpsk => "qpsk",
            Self::Qam16 => "qam16",
            Self::Qam64 => "qam64",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Small stable id used in seed mixing.
    pub fn id(self) -> u64 {
        self.bits_per_subcarrier() as u64
    }

    /// Normalized per-axis amplitude for each axis label.
    pub fn axis_levels(self) -> Vec<f64> {
        let m = self.bits_per_axis();
        let norm = self.norm();
        (0..1usize << m)
            .map(|label| axis_level(label, m) * norm)
            .collect()
    }

    /// All constellation points, indexed by their full bit label.
    pub fn constellation(self) -> Vec<Complex64> {
        let levels = self.axis_levels();
        let m = self.bits_per_axis();
        (0..1usize << (2 * m))
            .map(|label| Complex64::new(levels[label >> m], levels[label & ((1 << m) - 1)]))
            .collect()
    }
}

/// Unnormalized odd-integer level for an axis label of `m` bits.
fn axis_level(label: usize, m: usize) -> f64 {
    let sign = if label >> (m - 1) & 1 == 0 { 1.0 } else { -1.0 };
    let gray = label & ((1 << (m - 1)) - 1);
    let mut index = gray;
    let mut shift = gray >> 1;
    while shift != 0 {
        index ^= shift;
        shift >>= 1;
    }
    sign * (2 * index + 1) as f64
}

/// Precomputed mapper/demapper for one scheme.
#[derive(Debug, Clone)]
pub struct Mapper {
    scheme: ModulationScheme,
    levels: Vec<f64>,
}

impl Mapper {
    pub fn new(scheme: ModulationScheme) -> Self {
        Mapper {
            scheme,
            levels: scheme.axis_levels(),
        }
    }

    pub fn scheme(&self) -> ModulationScheme {
        self.scheme
    }

    pub fn map(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        let bps = self.scheme.bits_per_subcarrier();
        if !bits.len().is_multiple_of(bps) {
            return Err(Error::NotMultiple {
                what: "bits to map",
                multiple: bps,
                actual: bits.len(),
            });
        }
        let m = self.scheme.bits_per_axis();
        Ok(bits
            .chunks_exact(bps)
            .map(|group| {
                let i = group[..m]
                    .iter()
                    .fold(0usize, |acc, &b| acc << 1 | (b & 1) as usize);
                let q = group[m..]
                    .iter()
                    .fold(0usize, |acc, &b| acc << 1 | (b & 1) as usize);
                Complex64::new(self.levels[i], self.levels[q])
            })
            .collect())
    }

    /// Nearest-label decision on one axis; equal distances go to the smaller label.
    fn decide_axis(&self, y: f64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (label, &level) in self.levels.iter().enumerate() {
            let d = (y - level).abs();
            if d < best_dist {
                best = label;
                best_dist = d;
            }
        }
        best
    }

    pub fn demap_into(&self, symbols: &[Complex64], out: &mut Vec<u8>) {
        let m = self.scheme.bits_per_axis();
        for s in symbols {
            for label in [self.decide_axis(s.re), self.decide_axis(s.im)] {
                for bit in (0..m).rev() {
                    out.push((label >> bit & 1) as u8);
                }
            }
        }
    }

    pub fn demap(&self, symbols: &[Complex64]) -> Vec<u8> {
        let mut out = Vec::with_capacity(symbols.len() * self.scheme.bits_per_subcarrier());
        self.demap_into(symbols, &mut out);
        out
    }
}

pub fn map_bits(bits: &[u8], scheme: ModulationScheme) -> Result<Vec<Complex64>> {
    Mapper::new(scheme).map(bits)
}

pub fn demap_hard(symbols: &[Complex64], scheme: ModulationScheme) -> Vec<u8> {
    Mapper::new(scheme).demap(symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn qpsk_zero_bits_map_to_first_quadrant() {
        let s = map_bits(&[0, 0], ModulationScheme::Qpsk).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s[0] - Complex64::new(r, r)).norm() < 1e-15);
    }

    #[test]
    fn level_sets() {
        assert_eq!(ModulationScheme::Qpsk.axis_levels().len(), 2);
        let scale = 10f64.sqrt();
        let mut l16: Vec<f64> = ModulationScheme::Qam16
            .axis_levels()
            .iter()
            .map(|v| (v * scale).round())
            .collect();
        l16.sort_by(f64::total_cmp);
        assert_eq!(l16, vec![-3.0, -1.0, 1.0, 3.0]);
        let scale = 42f64.sqrt();
        let mut l64: Vec<f64> = ModulationScheme::Qam64
            .axis_levels()
            .iter()
            .map(|v| (v * scale).round())
            .collect();
        l64.sort_by(f64::total_cmp);
        assert_eq!(l64, vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn unit_mean_energy() {
        for scheme in ModulationScheme::ALL {
            let c = scheme.constellation();
            assert_eq!(c.len(), 1 << scheme.bits_per_subcarrier());
            let e = c.iter().map(|p| p.norm_sqr()).sum::<f64>() / c.len() as f64;
            assert!((e - 1.0).abs() < 1e-12, "{scheme:?}: {e}");
        }
    }

    #[test]
    fn empirical_energy_of_random_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for scheme in ModulationScheme::ALL {
            let n = 100_000 * scheme.bits_per_subcarrier();
            let bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
            let s = map_bits(&bits, scheme).unwrap();
            let e = s.iter().map(|p| p.norm_sqr()).sum::<f64>() / s.len() as f64;
            assert!((e - 1.0).abs() < 0.01, "{scheme:?}: {e}");
        }
    }

    #[test]
    fn gray_property_on_minimum_distance_pairs() {
        for scheme in ModulationScheme::ALL {
            let c = scheme.constellation();
            let d_min = 2.0 * scheme.norm();
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    if ((c[a] - c[b]).norm() - d_min).abs() < 1e-9 {
                        assert_eq!((a ^ b).count_ones(), 1, "{scheme:?} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn points_demap_to_their_labels() {
        for scheme in ModulationScheme::ALL {
            let bps = scheme.bits_per_subcarrier();
            for (label, p) in scheme.constellation().into_iter().enumerate() {
                let bits = demap_hard(&[p], scheme);
                let got = bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                assert_eq!(got, label);
                assert_eq!(bits.len(), bps);
            }
        }
    }

    #[test]
    fn small_perturbations_keep_the_label() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for scheme in ModulationScheme::ALL {
            let d_min = 2.0 * scheme.norm();
            for (label, p) in scheme.constellation().into_iter().enumerate() {
                for _ in 0..20 {
                    let phase = rng.random_range(0.0..core::f64::consts::TAU);
                    let noisy = p + Complex64::from_polar(0.4 * d_min, phase);
                    let bits = demap_hard(&[noisy], scheme);
                    let got = bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                    assert_eq!(got, label);
                }
            }
        }
    }

    #[test]
    fn origin_ties_break_to_smaller_label() {
        assert_eq!(
            demap_hard(&[Complex64::new(0.0, 0.0)], ModulationScheme::Qpsk),
            vec![0, 0]
        );
    }

    #[test]
    fn round_trip_all_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for scheme in ModulationScheme::ALL {
            let bits: Vec<u8> = (0..1200).map(|_| rng.random_range(0..2u8)).collect();
            assert_eq!(demap_hard(&map_bits(&bits, scheme).unwrap(), scheme), bits);
        }
    }

    #[test]
    fn rejects_partial_symbols() {
        assert!(map_bits(&[0, 1, 0], ModulationScheme::Qam16).is_err());
    }

    #[test]
    fn names_round_trip() {
        for scheme in ModulationScheme::ALL {
            assert_eq!(ModulationScheme::from_name(scheme.name()), Some(scheme));
        }
        assert_eq!(ModulationScheme::from_name("bpsk"), None);
    }
}
