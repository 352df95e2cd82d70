use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wimax_phy_core::SimConfig;

use crate::audio::{read_wav, transmit_audio, write_wav};
use crate::config::{
    parse_config_str, parse_snr_range, Channel, ConfigFile, Guard, Modulation, OutputPaths, RunManifest,
};
use crate::error::{Result, SimError};
use crate::output::{render_table, summary_table, write_manifest, write_results, SUMMARY_TARGET_BER};
use crate::sweep::{crossings, run_manifest};

#[derive(Debug, Parser)]
#[command(name = "wimax-sim", version, about = "802.16 OFDM PHY BER simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo BER sweep written to CSV.
    Sweep(SweepArgs),
    /// Send an 8 kHz 8-bit mono WAV file through the link.
    Audio(AudioArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModArg {
    Qpsk,
    Qam16,
    Qam64,
}

impl From<ModArg> for Modulation {
    fn from(m: ModArg) -> Self {
        match m {
            ModArg::Qpsk => Modulation::Qpsk,
            ModArg::Qam16 => Modulation::Qam16,
            ModArg::Qam64 => Modulation::Qam64,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChannelArg {
    Awgn,
    Sui1,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Awgn => Channel::Awgn,
            ChannelArg::Sui1 => Channel::Sui1,
        }
    }
}

/// An Eb/N0 grid given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

fn parse_snr(s: &str) -> std::result::Result<SnrGrid, String> {
    parse_snr_range(s).map(SnrGrid)
}

fn parse_guard(s: &str) -> std::result::Result<Guard, String> {
    let g: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Guard::try_from(g)
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub modulation: Vec<ModArg>,
    /// Guard ratio: 0.25, 0.125, 0.0625 or 0.03125.
    #[arg(long, value_parser = parse_guard, value_delimiter = ',')]
    pub guard: Vec<Guard>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub channel: Vec<ChannelArg>,
    /// Eb/N0 grid in dB as start:step:stop.
    #[arg(long, value_parser = parse_snr, allow_negative_numbers = true)]
    pub snr: Option<SnrGrid>,
    #[arg(long)]
    pub min_errors: Option<u64>,
    #[arg(long)]
    pub max_bits: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for ber.csv, summary.csv and manifest.toml.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Bypass RS, convolutional coding and interleaving.
    #[arg(long)]
    pub no_fec: bool,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AudioArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Eb/N0 in dB.
    #[arg(long, alias = "snr", default_value_t = 30.0, allow_negative_numbers = true)]
    pub ebn0: f64,
    #[arg(long, value_enum, default_value = "qpsk")]
    pub modulation: ModArg,
    #[arg(long, value_parser = parse_guard, default_value = "0.25")]
    pub guard: Guard,
    #[arg(long, value_enum, default_value = "awgn")]
    pub channel: ChannelArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub no_fec: bool,
}

impl SweepArgs {
    fn apply(&self, cfg: &mut ConfigFile) {
        if !self.modulation.is_empty() {
            cfg.sweep.modulation = self.modulation.iter().map(|&m| m.into()).collect();
        }
        if !self.guard.is_empty() {
            cfg.ofdm.guard_ratio = self.guard.clone();
        }
        if !self.channel.is_empty() {
            cfg.channel.models = self.channel.iter().map(|&c| c.into()).collect();
        }
        if let Some(snr) = &self.snr {
            cfg.sweep.snr_db = snr.0.clone();
        }
        if let Some(v) = self.min_errors {
            cfg.sweep.min_errors = v;
        }
        if let Some(v) = self.max_bits {
            cfg.sweep.max_bits = v;
        }
        if let Some(v) = self.seed {
            cfg.sweep.seed = v;
        }
        if let Some(v) = self.workers {
            cfg.sweep.workers = v;
        }
        if self.no_fec {
            cfg.fec.enabled = false;
        }
    }

    pub fn manifest(&self) -> Result<RunManifest> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
                parse_config_str(&text).map_err(|e| match e {
                    SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
                    other => other,
                })?
            }
            None => ConfigFile::default(),
        };
        self.apply(&mut cfg);
        RunManifest::resolve(cfg, self.config.clone(), OutputPaths::in_dir(&self.out))
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let m = args.manifest()?;
    write_manifest(&m)?;
    eprintln!(
        "sweeping {} configuration(s) x {} Eb/N0 point(s)",
        m.grid.len(),
        m.snr_db.len()
    );
    let records = run_manifest(&m)?;
    let curves = crossings(&records, SUMMARY_TARGET_BER);
    write_results(&m, &records, &curves)?;
    println!("Eb/N0 (dB) at BER {SUMMARY_TARGET_BER:e}:");
    print!("{}", render_table(&summary_table(&curves)));
    println!("results: {}", m.outputs.results.display());
    Ok(())
}

pub fn cmd_audio(args: &AudioArgs) -> Result<()> {
    let seg = read_wav(&args.input)?;
    let mut cfg = SimConfig::new(
        Modulation::from(args.modulation).into(),
        args.guard.0,
        Channel::from(args.channel).into(),
    );
    cfg.fec_enabled = !args.no_fec;
    cfg.seed = args.seed;
    let (out, report) = transmit_audio(&seg, &cfg, args.ebn0, args.seed)?;
    write_wav(&args.output, &out)?;
    println!("samples: {}", report.samples);
    println!("payload bits: {}", report.payload_bits);
    println!("bit errors: {}", report.bit_errors);
    println!("BER: {}", report.ber);
    println!("sample errors: {}", report.sample_errors);
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Audio(a) => cmd_audio(a),
    }
}
