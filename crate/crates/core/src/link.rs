//! The end-to-end transmit chain and its inverse.
//!
//! Transmit: pack bits into bytes, zero-pad to whole RS messages, RS-encode each
//! block, Forney-interleave the byte stream, unpack, convolutionally encode, pad
//! with zero bits to whole OFDM symbols, bit-interleave each symbol, map to QAM and
//! OFDM-modulate. With FEC disabled only padding, mapping and OFDM remain.
//!
//! Receive undoes each step in reverse, equalizing with the true channel response
//! when one is supplied. An RS block that fails to decode passes its systematic
//! bytes through unchanged.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bits::{bits_to_bytes, bytes_to_bits};
use crate::channel::{ChannelRealization, Sui1Params};
use crate::conv::{cc_encode, viterbi_decode, ConvCodeParams};
use crate::error::{Error, Result};
use crate::interleave::{
    forney_deinterleave, forney_interleave, BlockInterleaver, BlockInterleaverParams, ForneyParams,
};
use crate::mapping::{Mapper, ModulationScheme};
use crate::ofdm::{GuardRatio, Ofdm, OfdmParams};
use crate::rs::{ReedSolomon, RsCodeParams};

/// Smallest |H| used when equalizing.
pub const EQUALIZER_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    Awgn,
    Sui1,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [Self::Awgn, Self::Sui1];

    pub fn name(self) -> &'static str {
        match self {
            Self::Awgn => "awgn",
            Self::Sui1 => "sui1",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn id(self) -> u64 {
        match self {
            Self::Awgn => 1,
            Self::Sui1 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: ModulationScheme,
    pub channel: ChannelKind,
    pub fec_enabled: bool,
    pub ofdm: OfdmParams,
    pub rs: RsCodeParams,
    pub cc: ConvCodeParams,
    pub forney: ForneyParams,
    pub sui1: Sui1Params,
    /// Payload bits drawn per Monte Carlo trial.
    pub trial_payload_bits: usize,
    pub seed: u64,
}

impl SimConfig {
    pub const DEFAULT_TRIAL_PAYLOAD_BITS: usize = 4 * 239 * 8;

    pub fn new(scheme: ModulationScheme, guard: GuardRatio, channel: ChannelKind) -> Self {
        SimConfig {
            scheme,
            channel,
            fec_enabled: true,
            ofdm: OfdmParams::new(guard),
            rs: RsCodeParams::default(),
            cc: ConvCodeParams::default(),
            forney: ForneyParams::default(),
            sui1: Sui1Params::default(),
            trial_payload_bits: Self::DEFAULT_TRIAL_PAYLOAD_BITS,
            seed: 0,
        }
    }

    pub fn guard(&self) -> GuardRatio {
        self.ofdm.guard
    }

    /// Coded bits per OFDM symbol.
    pub fn n_cbps(&self) -> usize {
        self.ofdm.n_used * self.scheme.bits_per_subcarrier()
    }

    pub fn block_interleaver(&self) -> Result<BlockInterleaverParams> {
        BlockInterleaverParams::new(self.n_cbps(), self.scheme.bits_per_subcarrier())
    }

    /// Information bits per coded channel bit: (k/n)·(1/2) with FEC, 1 without.
    pub fn code_rate(&self) -> f64 {
        if self.fec_enabled {
            self.rs.k as f64 / self.rs.n as f64 * 0.5
        } else {
            1.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ofdm.validate()?;
        self.rs.validate()?;
        self.block_interleaver()?;
        if self.cc != ConvCodeParams::G171_133 {
            return Err(Error::InvalidParameter(
                "only the (171, 133) K=7 code is supported",
            ));
        }
        if self.forney.branches == 0 || !self.rs.n.is_multiple_of(self.forney.branches) {
            return Err(Error::InvalidParameter(
                "Forney branch count must divide the RS block length",
            ));
        }
        if self.trial_payload_bits == 0 {
            return Err(Error::InvalidParameter("trial payload must be non-empty"));
        }
        Ok(())
    }
}

/// Sizes of every stage for a payload of a given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameLayout {
    pub payload_bits: usize,
    /// Zero bits appended to fill whole RS messages.
    pub pad_bits: usize,
    pub rs_blocks: usize,
    /// Bits leaving the convolutional encoder (or the payload, without FEC).
    pub coded_bits: usize,
    /// Zero bits appended to fill whole OFDM symbols.
    pub symbol_pad_bits: usize,
    pub ofdm_symbols: usize,
}

impl FrameLayout {
    pub fn new(payload_bits: usize, cfg: &SimConfig) -> Self {
        let n_cbps = cfg.n_cbps();
        let (pad_bits, rs_blocks, coded_bits) = if cfg.fec_enabled && payload_bits > 0 {
            let msg_bits = cfg.rs.k * 8;
            let blocks = payload_bits.div_ceil(msg_bits);
            let coded = cfg.cc.encoded_len(blocks * cfg.rs.n * 8);
            (blocks * msg_bits - payload_bits, blocks, coded)
        } else {
            (0, 0, payload_bits)
        };
        let ofdm_symbols = coded_bits.div_ceil(n_cbps);
        FrameLayout {
            payload_bits,
            pad_bits,
            rs_blocks,
            coded_bits,
            symbol_pad_bits: ofdm_symbols * n_cbps - coded_bits,
            ofdm_symbols,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Transmission {
    pub frame: Vec<Complex64>,
    pub layout: FrameLayout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reception {
    pub bits: Vec<u8>,
    pub rs_failures: usize,
    pub rs_corrected: usize,
}

/// A configured transmitter/receiver pair with all tables built once.
#[derive(Debug, Clone)]
pub struct Link {
    cfg: SimConfig,
    rs: ReedSolomon,
    interleaver: BlockInterleaver,
    mapper: Mapper,
    ofdm: Ofdm,
}

impl Link {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Link {
            rs: ReedSolomon::new(cfg.rs)?,
            interleaver: BlockInterleaver::new(cfg.block_interleaver()?),
            mapper: Mapper::new(cfg.scheme),
            ofdm: Ofdm::new(cfg.ofdm)?,
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn ofdm(&self) -> &Ofdm {
        &self.ofdm
    }

    pub fn layout(&self, payload_bits: usize) -> FrameLayout {
        FrameLayout::new(payload_bits, &self.cfg)
    }

    /// Everything up to and including QAM mapping.
    pub fn transmit_subcarriers(&self, bits: &[u8]) -> Result<(Vec<Complex64>, FrameLayout)> {
        let layout = self.layout(bits.len());
        let mut channel_bits = if self.cfg.fec_enabled && layout.rs_blocks > 0 {
            let k = self.cfg.rs.k;
            let mut bytes = bits_to_bytes(bits);
            bytes.resize(layout.rs_blocks * k, 0);
            let mut coded = Vec::with_capacity(layout.rs_blocks * self.cfg.rs.n);
            for msg in bytes.chunks_exact(k) {
                coded.extend(self.rs.encode(msg)?);
            }
            let interleaved = forney_interleave(&coded, &self.cfg.forney)?;
            cc_encode(&bytes_to_bits(&interleaved))
        } else {
            bits.to_vec()
        };
        debug_assert_eq!(channel_bits.len(), layout.coded_bits);
        channel_bits.resize(layout.ofdm_symbols * self.cfg.n_cbps(), 0);

        if self.cfg.fec_enabled {
            let mut interleaved = Vec::with_capacity(channel_bits.len());
            for chunk in channel_bits.chunks_exact(self.cfg.n_cbps()) {
                interleaved.extend(self.interleaver.interleave(chunk)?);
            }
            channel_bits = interleaved;
        }
        Ok((self.mapper.map(&channel_bits)?, layout))
    }

    pub fn transmit(&self, bits: &[u8]) -> Result<Transmission> {
        let (freq, layout) = self.transmit_subcarriers(bits)?;
        Ok(Transmission {
            frame: self.ofdm.modulate(&freq)?,
            layout,
        })
    }

    /// Divides each subcarrier by the channel response of its symbol.
    pub fn equalize(&self, freq: &mut [Complex64], csi: &ChannelRealization) -> Result<()> {
        let used = self.cfg.ofdm.n_used;
        let symbols = freq.len() / used;
        if csi.num_symbols() != symbols {
            return Err(Error::Length {
                what: "channel state symbols",
                expected: symbols,
                actual: csi.num_symbols(),
            });
        }
        let n = self.cfg.ofdm.n_fft as f64;
        let taps = csi.num_taps();
        let phasors: Vec<Complex64> = (0..used)
            .flat_map(|slot| {
                let f = self.cfg.ofdm.subcarrier(slot) as f64;
                csi.sample_offsets()
                    .iter()
                    .map(move |&d| Complex64::from_polar(1.0, -core::f64::consts::TAU * f * d as f64 / n))
            })
            .collect();
        for (s, chunk) in freq.chunks_exact_mut(used).enumerate() {
            let gains = csi.symbol_gains(s);
            for (slot, y) in chunk.iter_mut().enumerate() {
                let rot = &phasors[slot * taps..(slot + 1) * taps];
                let mut h: Complex64 = gains.iter().zip(rot).map(|(g, p)| g * p).sum();
                let mag = h.norm();
                if mag < EQUALIZER_FLOOR {
                    h = if mag == 0.0 {
                        Complex64::new(EQUALIZER_FLOOR, 0.0)
                    } else {
                        h * (EQUALIZER_FLOOR / mag)
                    };
                }
                *y /= h;
            }
        }
        Ok(())
    }

    /// Everything after OFDM demodulation.
    pub fn receive_subcarriers(
        &self,
        mut freq: Vec<Complex64>,
        csi: Option<&ChannelRealization>,
        layout: &FrameLayout,
    ) -> Result<Reception> {
        let expected = layout.ofdm_symbols * self.cfg.ofdm.n_used;
        if freq.len() != expected {
            return Err(Error::Length {
                what: "received subcarriers",
                expected,
                actual: freq.len(),
            });
        }
        match (self.cfg.channel, csi) {
            (_, Some(csi)) => self.equalize(&mut freq, csi)?,
            (ChannelKind::Sui1, None) => return Err(Error::MissingCsi),
            (ChannelKind::Awgn, None) => {}
        }

        let hard = self.mapper.demap(&freq);
        if !self.cfg.fec_enabled || layout.rs_blocks == 0 {
            let mut bits = hard;
            bits.truncate(layout.payload_bits);
            return Ok(Reception {
                bits,
                rs_failures: 0,
                rs_corrected: 0,
            });
        }

        let mut coded = Vec::with_capacity(hard.len());
        for chunk in hard.chunks_exact(self.cfg.n_cbps()) {
            coded.extend(self.interleaver.deinterleave(chunk)?);
        }
        coded.truncate(layout.coded_bits);
        let decoded_bits = viterbi_decode(&coded)?;
        let interleaved = bits_to_bytes(&decoded_bits);
        let rs_stream = forney_deinterleave(&interleaved, &self.cfg.forney)?;

        let (n, k) = (self.cfg.rs.n, self.cfg.rs.k);
        let mut bytes = Vec::with_capacity(layout.rs_blocks * k);
        let mut rs_failures = 0;
        let mut rs_corrected = 0;
        for block in rs_stream.chunks_exact(n) {
            match self.rs.decode(block) {
                Ok(d) => {
                    rs_corrected += d.corrected;
                    bytes.extend(d.message);
                }
                Err(Error::Uncorrectable) => {
                    rs_failures += 1;
                    bytes.extend_from_slice(&block[..k]);
                }
                Err(e) => return Err(e),
            }
        }
        let mut bits = bytes_to_bits(&bytes);
        bits.truncate(layout.payload_bits);
        Ok(Reception {
            bits,
            rs_failures,
            rs_corrected,
        })
    }

    pub fn receive(
        &self,
        frame: &[Complex64],
        csi: Option<&ChannelRealization>,
        layout: &FrameLayout,
    ) -> Result<Reception> {
        let expected = layout.ofdm_symbols * self.cfg.ofdm.symbol_len();
        if frame.len() != expected {
            return Err(Error::Length {
                what: "received frame",
                expected,
                actual: frame.len(),
            });
        }
        self.receive_subcarriers(self.ofdm.demodulate(frame)?, csi, layout)
    }
}

pub fn transmit(bits: &[u8], cfg: &SimConfig) -> Result<Transmission> {
    Link::new(cfg.clone())?.transmit(bits)
}

pub fn receive(
    frame: &[Complex64],
    csi: Option<&ChannelRealization>,
    cfg: &SimConfig,
    layout: &FrameLayout,
) -> Result<Vec<u8>> {
    Ok(Link::new(cfg.clone())?.receive(frame, csi, layout)?.bits)
}

/// Count of positions where two bit slices differ, plus any length difference.
pub fn count_bit_errors(a: &[u8], b: &[u8]) -> usize {
    let diff = a.iter().zip(b).filter(|(x, y)| x != y).count();
    diff + a.len().abs_diff(b.len())
}
