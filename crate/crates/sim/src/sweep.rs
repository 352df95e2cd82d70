//! Grid sweeps. Every (configuration, Eb/N0) point is an independent task with
//! its own seed stream, so the worker count never changes the results.

use rayon::prelude::*;
use wimax_phy_core::engine::{interpolate_required_ebn0, run_point};
use wimax_phy_core::{BerRecord, ChannelKind, GuardRatio, ModulationScheme, SimConfig, StopRule};

use crate::config::RunManifest;
use crate::error::{Result, SimError};

/// One record per (configuration, Eb/N0), ordered by configuration then Eb/N0.
///
/// `workers == 0` uses rayon's default pool size.
pub fn run_sweep(
    grid: &[SimConfig],
    snr_db: &[f64],
    stop: StopRule,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<BerRecord>> {
    let tasks: Vec<(&SimConfig, f64)> = grid
        .iter()
        .flat_map(|cfg| snr_db.iter().map(move |&db| (cfg, db)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Config(format!("cannot start {workers} workers: {e}")))?;
    let records = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(cfg, db)| run_point(cfg, db, stop, master_seed))
            .collect::<wimax_phy_core::Result<Vec<_>>>()
    })?;
    Ok(records)
}

pub fn run_manifest(m: &RunManifest) -> Result<Vec<BerRecord>> {
    run_sweep(&m.grid, &m.snr_db, m.stop, m.master_seed, m.workers)
}

/// Interpolated Eb/N0 at a target BER for one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub scheme: ModulationScheme,
    pub guard: GuardRatio,
    pub channel: ChannelKind,
    /// `None` when the curve never brackets the target.
    pub eb_n0_db: Option<f64>,
}

/// Splits sweep output into curves and interpolates each at `target`.
pub fn crossings(records: &[BerRecord], target: f64) -> Vec<Crossing> {
    let mut out = Vec::new();
    for curve in records.chunk_by(|a, b| a.scheme == b.scheme && a.guard == b.guard && a.channel == b.channel)
    {
        let first = &curve[0];
        out.push(Crossing {
            scheme: first.scheme,
            guard: first.guard,
            channel: first.channel,
            eb_n0_db: interpolate_required_ebn0(curve, target).ok(),
        });
    }
    out
}
