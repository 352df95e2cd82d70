//! Run configuration: a TOML file with `[ofdm]`, `[fec]`, `[channel]` and
//! `[sweep]` sections. Every key is optional and defaults to the reference
//! system (2.5 MHz, 256-point FFT, 200 used subcarriers, RS(255,239,8),
//! rate-1/2 K=7 code, all four guard ratios, AWGN and SUI-1).
//!
//! ```toml
//! [ofdm]
//! guard_ratio = [0.25, 0.03125]
//!
//! [channel]
//! models = ["awgn"]
//!
//! [sweep]
//! modulation = "qpsk"
//! snr_db = "0:1:8"
//! seed = 42
//! ```

use std::fmt;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer, IntoDeserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};
use wimax_phy_core::conv::ConvCodeParams;
use wimax_phy_core::interleave::ForneyParams;
use wimax_phy_core::rs::RsCodeParams;
use wimax_phy_core::{ChannelKind, GuardRatio, ModulationScheme, SimConfig, StopRule, Sui1Params};

use crate::error::{Result, SimError};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam64,
}

impl From<Modulation> for ModulationScheme {
    fn from(m: Modulation) -> Self {
        match m {
            Modulation::Qpsk => ModulationScheme::Qpsk,
            Modulation::Qam16 => ModulationScheme::Qam16,
            Modulation::Qam64 => ModulationScheme::Qam64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Awgn,
    Sui1,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Awgn => ChannelKind::Awgn,
            Channel::Sui1 => ChannelKind::Sui1,
        }
    }
}

/// A guard ratio restricted to the four supported values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Guard(pub GuardRatio);

pub const ALLOWED_GUARDS: &str = "0.25, 0.125, 0.0625, 0.03125";

impl TryFrom<f64> for Guard {
    type Error = String;

    fn try_from(g: f64) -> std::result::Result<Self, String> {
        GuardRatio::from_f64(g)
            .map(Guard)
            .ok_or_else(|| format!("guard_ratio {g} is not supported; allowed values: {ALLOWED_GUARDS}"))
    }
}

impl From<Guard> for f64 {
    fn from(g: Guard) -> f64 {
        g.0.as_f64()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmSection {
    pub bandwidth_hz: f64,
    pub n_fft: usize,
    pub n_used: usize,
    pub sampling_factor: [u32; 2],
    #[serde(deserialize_with = "one_or_many")]
    pub guard_ratio: Vec<Guard>,
}

impl Default for OfdmSection {
    fn default() -> Self {
        OfdmSection {
            bandwidth_hz: 2.5e6,
            n_fft: 256,
            n_used: 200,
            sampling_factor: [28, 25],
            guard_ratio: GuardRatio::ALL.iter().map(|&g| Guard(g)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FecSection {
    pub enabled: bool,
    pub rs_n: usize,
    pub rs_k: usize,
    pub rs_t: usize,
    pub constraint_length: usize,
    /// Octal generator polynomials.
    pub cc_generators: [String; 2],
    pub forney_branches: usize,
    pub forney_delay: usize,
}

impl Default for FecSection {
    fn default() -> Self {
        let f = ForneyParams::default();
        FecSection {
            enabled: true,
            rs_n: 255,
            rs_k: 239,
            rs_t: 8,
            constraint_length: 7,
            cc_generators: ["171".into(), "133".into()],
            forney_branches: f.branches,
            forney_delay: f.delay_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sui1Section {
    pub tap_power_db: [f64; 3],
    pub k_factor: [f64; 3],
    pub tap_delay_us: [f64; 3],
    pub doppler_hz: [f64; 3],
    pub ant_corr: f64,
    pub fnorm_db: f64,
}

impl Default for Sui1Section {
    fn default() -> Self {
        let p = Sui1Params::default();
        Sui1Section {
            tap_power_db: p.tap_power_db,
            k_factor: p.k_factor,
            tap_delay_us: p.tap_delay_us,
            doppler_hz: p.doppler_hz,
            ant_corr: p.ant_corr,
            fnorm_db: p.fnorm_db,
        }
    }
}

impl From<&Sui1Section> for Sui1Params {
    fn from(s: &Sui1Section) -> Self {
        Sui1Params {
            tap_power_db: s.tap_power_db,
            k_factor: s.k_factor,
            tap_delay_us: s.tap_delay_us,
            doppler_hz: s.doppler_hz,
            ant_corr: s.ant_corr,
            fnorm_db: s.fnorm_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(deserialize_with = "one_or_many")]
    pub models: Vec<Channel>,
    pub sui1: Sui1Section,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            models: vec![Channel::Awgn, Channel::Sui1],
            sui1: Sui1Section::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    #[serde(deserialize_with = "one_or_many")]
    pub modulation: Vec<Modulation>,
    /// Eb/N0 grid in dB, either a list or a `"start:step:stop"` range.
    #[serde(deserialize_with = "snr_grid")]
    pub snr_db: Vec<f64>,
    pub min_errors: u64,
    pub max_bits: u64,
    pub seed: u64,
    pub trial_payload_bits: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        let stop = StopRule::default();
        SweepSection {
            modulation: vec![Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64],
            snr_db: parse_snr_range("0:2:16").unwrap(),
            min_errors: stop.min_errors,
            max_bits: stop.max_payload_bits,
            seed: 1,
            trial_payload_bits: SimConfig::DEFAULT_TRIAL_PAYLOAD_BITS,
            workers: 0,
        }
    }
}

/// Provenance block written into result manifests.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub ofdm: OfdmSection,
    pub fec: FecSection,
    pub channel: ChannelSection,
    pub sweep: SweepSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

impl OutputPaths {
    pub fn in_dir(dir: &Path) -> Self {
        OutputPaths {
            results: dir.join("ber.csv"),
            summary: dir.join("summary.csv"),
            manifest: dir.join("manifest.toml"),
        }
    }
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self::in_dir(Path::new("results"))
    }
}

/// A fully resolved run: every grid point is built and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config_path: Option<PathBuf>,
    pub config: ConfigFile,
    /// Ordered by (modulation, guard ratio, channel).
    pub grid: Vec<SimConfig>,
    /// Ascending, without duplicates.
    pub snr_db: Vec<f64>,
    pub stop: StopRule,
    pub master_seed: u64,
    pub workers: usize,
    pub outputs: OutputPaths,
    pub version: &'static str,
}

impl RunManifest {
    pub fn resolve(
        mut config: ConfigFile,
        config_path: Option<PathBuf>,
        outputs: OutputPaths,
    ) -> Result<Self> {
        normalize(&mut config);
        let grid = build_grid(&config)?;
        let s = &config.sweep;
        if s.snr_db.is_empty() {
            return Err(SimError::Config("sweep.snr_db must not be empty".into()));
        }
        if s.snr_db.iter().any(|x| !x.is_finite()) {
            return Err(SimError::Config("sweep.snr_db values must be finite".into()));
        }
        if s.min_errors == 0 && s.max_bits == 0 {
            return Err(SimError::Config(
                "sweep needs min_errors or max_bits to be positive".into(),
            ));
        }
        Ok(RunManifest {
            config_path,
            snr_db: s.snr_db.clone(),
            stop: StopRule {
                min_errors: s.min_errors,
                max_payload_bits: s.max_bits,
            },
            master_seed: s.seed,
            workers: s.workers,
            grid,
            outputs,
            version: TOOL_VERSION,
            config,
        })
    }

    /// The resolved configuration plus a `[run]` block, in a form `parse_config` accepts.
    pub fn to_toml(&self) -> String {
        let mut cfg = self.config.clone();
        cfg.run = Some(RunSection {
            version: self.version.to_string(),
            config_path: self.config_path.clone(),
            results: Some(self.outputs.results.clone()),
            summary: Some(self.outputs.summary.clone()),
        });
        toml::to_string(&cfg).expect("configuration is always representable as TOML")
    }
}

/// Parses configuration text. Messages carry the line and column of the offending key.
pub fn parse_config_str(text: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))
}

pub fn parse_config(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    let config = parse_config_str(&text).map_err(|e| match e {
        SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    RunManifest::resolve(config, Some(path.to_path_buf()), OutputPaths::default())
}

/// Expands `"start:step:stop"` (inclusive) into a list of dB values.
pub fn parse_snr_range(range: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| format!("invalid SNR range `{range}`; expected start:step:stop"))?;
    let (start, step, stop) = match nums[..] {
        [single] => (single, 1.0, single),
        [start, step, stop] => (start, step, stop),
        _ => return Err(format!("invalid SNR range `{range}`; expected start:step:stop")),
    };
    if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
        return Err(format!("SNR range `{range}` must be finite"));
    }
    if stop < start || (step <= 0.0 && stop > start) {
        return Err(format!(
            "SNR range `{range}` needs start <= stop and a positive step"
        ));
    }
    let count = if stop == start {
        1
    } else {
        ((stop - start) / step + 1e-9).floor() as usize + 1
    };
    if count > 100_000 {
        return Err(format!("SNR range `{range}` has too many points"));
    }
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            (v * 1e9).round() / 1e9
        })
        .collect())
}

fn normalize(cfg: &mut ConfigFile) {
    cfg.ofdm.guard_ratio.sort();
    cfg.ofdm.guard_ratio.dedup();
    cfg.channel.models.sort();
    cfg.channel.models.dedup();
    cfg.sweep.modulation.sort();
    cfg.sweep.modulation.dedup();
    cfg.sweep.snr_db.sort_by(f64::total_cmp);
    cfg.sweep.snr_db.dedup();
}

fn parse_generator(text: &str) -> Result<u8> {
    u8::from_str_radix(text, 8)
        .ok()
        .filter(|&g| g < 128)
        .ok_or_else(|| {
            SimError::Config(format!(
                "fec.cc_generators: `{text}` is not a 7-bit octal polynomial"
            ))
        })
}

fn build_grid(cfg: &ConfigFile) -> Result<Vec<SimConfig>> {
    let o = &cfg.ofdm;
    let f = &cfg.fec;
    if o.guard_ratio.is_empty() {
        return Err(SimError::Config(
            "ofdm.guard_ratio must list at least one value".into(),
        ));
    }
    if cfg.channel.models.is_empty() {
        return Err(SimError::Config(
            "channel.models must list at least one of: awgn, sui1".into(),
        ));
    }
    if cfg.sweep.modulation.is_empty() {
        return Err(SimError::Config(
            "sweep.modulation must list at least one of: qpsk, qam16, qam64".into(),
        ));
    }
    if o.bandwidth_hz.is_nan() || o.bandwidth_hz <= 0.0 || o.sampling_factor.contains(&0) {
        return Err(SimError::Config(
            "ofdm: bandwidth and sampling factor must be positive".into(),
        ));
    }
    let cc = ConvCodeParams {
        generators: [
            parse_generator(&f.cc_generators[0])?,
            parse_generator(&f.cc_generators[1])?,
        ],
        constraint_length: f.constraint_length,
    };
    let rs = RsCodeParams {
        n: f.rs_n,
        k: f.rs_k,
        t: f.rs_t,
        ..RsCodeParams::RS_255_239
    };
    let forney = ForneyParams::new(f.forney_branches, f.forney_delay)
        .map_err(|e| SimError::Config(format!("fec.forney: {e}")))?;
    let sui1 = Sui1Params::from(&cfg.channel.sui1);

    let mut grid = Vec::new();
    for &m in &cfg.sweep.modulation {
        for &g in &o.guard_ratio {
            for &c in &cfg.channel.models {
                let mut sc = SimConfig::new(m.into(), g.0, c.into());
                sc.ofdm.channel_bw_hz = o.bandwidth_hz;
                sc.ofdm.n_fft = o.n_fft;
                sc.ofdm.n_used = o.n_used;
                sc.ofdm.sampling_factor = (o.sampling_factor[0], o.sampling_factor[1]);
                sc.fec_enabled = f.enabled;
                sc.rs = rs;
                sc.cc = cc;
                sc.forney = forney;
                sc.sui1 = sui1;
                sc.trial_payload_bits = cfg.sweep.trial_payload_bits;
                sc.seed = cfg.sweep.seed;
                sc.validate().map_err(|e| SimError::Config(e.to_string()))?;
                grid.push(sc);
            }
        }
    }
    Ok(grid)
}

/// Accepts either a single value or an array of values.
fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    struct V<T>(PhantomData<T>);

    impl<'de, T: Deserialize<'de>> Visitor<'de> for V<T> {
        type Value = Vec<T>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a value or an array of values")
        }

        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Vec<T>, A::Error> {
            let mut out = Vec::new();
            while let Some(x) = seq.next_element()? {
                out.push(x);
            }
            Ok(out)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Vec<T>, E> {
            Ok(vec![T::deserialize(v.into_deserializer())?])
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Vec<T>, E> {
            Ok(vec![T::deserialize(v.into_deserializer())?])
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Vec<T>, E> {
            Ok(vec![T::deserialize((v as f64).into_deserializer())?])
        }
    }

    d.deserialize_any(V(PhantomData))
}

fn snr_grid<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    struct V;

    impl<'de> Visitor<'de> for V {
        type Value = Vec<f64>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a list of dB values or a \"start:step:stop\" string")
        }

        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Vec<f64>, A::Error> {
            let mut out = Vec::new();
            while let Some(x) = seq.next_element::<f64>()? {
                out.push(x);
            }
            Ok(out)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Vec<f64>, E> {
            parse_snr_range(v).map_err(E::custom)
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Vec<f64>, E> {
            Ok(vec![v])
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Vec<f64>, E> {
            Ok(vec![v as f64])
        }
    }

    d.deserialize_any(V)
}
