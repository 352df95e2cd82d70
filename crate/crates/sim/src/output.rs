//! CSV results, the per-curve summary table and the run manifest.

use std::fs;
use std::io::Write;
use std::path::Path;

use wimax_phy_core::{BerRecord, ChannelKind, GuardRatio};

use crate::config::RunManifest;
use crate::error::{Result, SimError};
use crate::sweep::Crossing;

pub const CSV_HEADER: [&str; 9] = [
    "modulation",
    "guard_ratio",
    "channel",
    "eb_n0_db",
    "bits_sent",
    "bit_errors",
    "ber",
    "trials",
    "seed",
];

/// BER target used for the summary table.
pub const SUMMARY_TARGET_BER: f64 = 1e-3;

fn csv_err(path: &Path, e: csv::Error) -> SimError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SimError::io(path, io),
        other => SimError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes one row per record. Floats use the shortest text that parses back to the same value.
pub fn write_records<W: Write>(out: W, records: &[BerRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.scheme.name().to_string(),
            r.guard.as_f64().to_string(),
            r.channel.name().to_string(),
            r.eb_n0_db.to_string(),
            r.bits_sent.to_string(),
            r.bit_errors.to_string(),
            r.ber.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_string(records: &[BerRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

fn channel_label(c: ChannelKind) -> &'static str {
    match c {
        ChannelKind::Awgn => "AWGN",
        ChannelKind::Sui1 => "SUI-1",
    }
}

/// One row per modulation, one column per (guard ratio, channel); cells hold
/// the Eb/N0 in dB at the target BER, rounded to 0.01 dB, or `NA`.
pub fn summary_table(crossings: &[Crossing]) -> Vec<Vec<String>> {
    let mut columns: Vec<(GuardRatio, ChannelKind)> = Vec::new();
    let mut schemes = Vec::new();
    for c in crossings {
        if !columns.contains(&(c.guard, c.channel)) {
            columns.push((c.guard, c.channel));
        }
        if !schemes.contains(&c.scheme) {
            schemes.push(c.scheme);
        }
    }
    columns.sort();

    let mut rows = Vec::with_capacity(schemes.len() + 1);
    let mut header = vec!["modulation".to_string()];
    header.extend(
        columns
            .iter()
            .map(|&(g, ch)| format!("G-{} {}", g.as_f64(), channel_label(ch))),
    );
    rows.push(header);
    for s in schemes {
        let mut row = vec![s.name().to_string()];
        for &(g, ch) in &columns {
            let cell = crossings
                .iter()
                .find(|c| c.scheme == s && c.guard == g && c.channel == ch)
                .and_then(|c| c.eb_n0_db)
                .map(|db| format!("{:.2}", db))
                .unwrap_or_else(|| "NA".into());
            row.push(cell);
        }
        rows.push(row);
    }
    rows
}

/// Fixed-width rendering of [`summary_table`] for the terminal.
pub fn render_table(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| SimError::io(path, e))
}

pub fn write_manifest(m: &RunManifest) -> Result<()> {
    write_file(&m.outputs.manifest, m.to_toml().as_bytes())
}

/// Writes the CSV and the summary table to the manifest's output paths.
pub fn write_results(m: &RunManifest, records: &[BerRecord], crossings: &[Crossing]) -> Result<()> {
    let mut csv_bytes = Vec::new();
    write_records(&mut csv_bytes, records).map_err(|e| csv_err(&m.outputs.results, e))?;
    write_file(&m.outputs.results, &csv_bytes)?;

    let mut summary = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut summary);
        for row in summary_table(crossings) {
            w.write_record(&row).map_err(|e| csv_err(&m.outputs.summary, e))?;
        }
        w.flush().map_err(|e| SimError::io(&m.outputs.summary, e))?;
    }
    write_file(&m.outputs.summary, &summary)
}
