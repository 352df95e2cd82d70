//! Host-side tooling for `wimax-phy-core`: parallel BER sweeps, CSV and summary
//! output, TOML run configuration and a WAV round-trip demo.

pub mod audio;
pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

pub use config::{parse_config, RunManifest};
pub use error::{Result, SimError};
pub use sweep::run_sweep;
