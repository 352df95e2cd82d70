//! Baseband building blocks for an IEEE 802.16 WirelessMAN-OFDM link simulator.
//!
//! The chain is RS(255,239) → Forney interleaver → rate-1/2 K=7 convolutional
//! code → per-symbol bit interleaver → Gray QPSK/16-QAM/64-QAM → 256-point OFDM
//! with a cyclic prefix, over AWGN or an SUI-1 fading channel, and back.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and parallel sweeps live in the `wimax-sim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod channel;
pub mod conv;
pub mod engine;
pub mod error;
pub mod fft;
pub mod gf;
pub mod interleave;
pub mod link;
pub mod mapping;
pub mod ofdm;
pub mod rs;

pub use channel::{ChannelRealization, Sui1Params};
pub use engine::{BerRecord, StopRule};
pub use error::{Error, Result};
pub use link::{ChannelKind, FrameLayout, Link, SimConfig};
pub use mapping::ModulationScheme;
pub use ofdm::{GuardRatio, OfdmParams};
