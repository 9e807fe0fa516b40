//! CSV files with `#` provenance lines, and plot scripts.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};

use decoscat_core::experiments::{DispersionSeries, Mode, Provenance, SweepResult, SweepRow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub const SWEEP_HEADER: [&str; 9] = [
    "E",
    "mode",
    "D",
    "P",
    "stderr",
    "seed",
    "growth_rate",
    "dE_collision",
    "dE_initial",
];

/// Shortest text that parses back to the same value; exponent form for
/// very small or large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && x.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    #[serde(rename = "E")]
    e: String,
    mode: String,
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "P")]
    p: String,
    stderr: String,
    seed: u64,
    growth_rate: String,
    #[serde(rename = "dE_collision")]
    de_collision: String,
    #[serde(rename = "dE_initial")]
    de_initial: String,
}

fn provenance_lines(p: &Provenance) -> String {
    format!(
        "# decoscat {}\n# seed = {}\n# config_sha256 = {}\n",
        p.code_version, p.seed, p.config_hash
    )
}

/// Writes the provenance block, the header and one line per row.
pub fn write_sweep_csv<W: Write>(mut w: W, result: &SweepResult) -> Result<(), OutputError> {
    w.write_all(provenance_lines(&result.provenance).as_bytes())
        .map_err(|source| OutputError::Io {
            path: "<output>".into(),
            source,
        })?;
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(SWEEP_HEADER)?;
    for r in &result.rows {
        wr.serialize(Record {
            e: fmt_f64(r.energy),
            mode: r.mode.label().to_string(),
            d: fmt_f64(r.d),
            p: fmt_f64(r.probability),
            stderr: fmt_f64(r.stderr),
            seed: r.seed,
            growth_rate: fmt_opt(r.growth_rate),
            de_collision: fmt_opt(r.de_collision),
            de_initial: fmt_f64(r.de_initial),
        })?;
    }
    wr.flush().map_err(|source| OutputError::Io {
        path: "<output>".into(),
        source,
    })?;
    Ok(())
}

fn parse_num(line: usize, s: &str) -> Result<f64, OutputError> {
    s.parse().map_err(|_| OutputError::Parse {
        line,
        message: format!("'{s}' is not a number"),
    })
}

fn parse_opt(line: usize, s: &str) -> Result<Option<f64>, OutputError> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_num(line, s).map(Some)
    }
}

/// Reads a file written by [`write_sweep_csv`].
pub fn read_sweep_csv<R: Read>(r: R) -> Result<SweepResult, OutputError> {
    let mut text = String::new();
    io::BufReader::new(r)
        .read_to_string(&mut text)
        .map_err(|source| OutputError::Io {
            path: "<input>".into(),
            source,
        })?;
    let mut prov = Provenance {
        seed: 0,
        config_hash: String::new(),
        code_version: String::new(),
    };
    for (i, line) in text.as_bytes().lines().enumerate() {
        let line = line.map_err(|source| OutputError::Io {
            path: "<input>".into(),
            source,
        })?;
        let Some(c) = line.strip_prefix('#') else {
            break;
        };
        let c = c.trim();
        if let Some(v) = c.strip_prefix("decoscat ") {
            prov.code_version = v.trim().to_string();
        } else if let Some((k, v)) = c.split_once('=') {
            match k.trim() {
                "seed" => {
                    prov.seed = v.trim().parse().map_err(|_| OutputError::Parse {
                        line: i + 1,
                        message: "seed".into(),
                    })?
                }
                "config_sha256" => prov.config_hash = v.trim().to_string(),
                _ => {}
            }
        }
    }
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != SWEEP_HEADER {
        return Err(OutputError::Parse {
            line: 0,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.deserialize::<Record>().enumerate() {
        let rec = rec?;
        let line = i + 1;
        rows.push(SweepRow {
            energy: parse_num(line, &rec.e)?,
            mode: rec.mode.parse::<Mode>().map_err(|e| OutputError::Parse {
                line,
                message: e.to_string(),
            })?,
            d: parse_num(line, &rec.d)?,
            probability: parse_num(line, &rec.p)?,
            stderr: parse_num(line, &rec.stderr)?,
            seed: rec.seed,
            growth_rate: parse_opt(line, &rec.growth_rate)?,
            de_collision: parse_opt(line, &rec.de_collision)?,
            de_initial: parse_num(line, &rec.de_initial)?,
        });
    }
    Ok(SweepResult {
        rows,
        provenance: prov,
    })
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let io = |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}

pub fn sweep_csv_bytes(result: &SweepResult) -> Result<Vec<u8>, OutputError> {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, result)?;
    Ok(buf)
}

/// Renderer-neutral command file: one `series` per `(mode, D)` curve of
/// `P` against `E` with `stderr` error bars, read from `data`.
pub fn plot_script(result: &SweepResult, data: &Path) -> String {
    let mut s = String::new();
    s.push_str("# P(E) per mode\n");
    s.push_str(&format!("data {}\n", data.display()));
    s.push_str("x E\ny P\nerror stderr\nxlabel E\nylabel P\nyrange 0 1\n");
    let mut seen: Vec<(Mode, f64)> = Vec::new();
    for r in &result.rows {
        if !seen.iter().any(|&(m, d)| m == r.mode && d == r.d) {
            seen.push((r.mode, r.d));
        }
    }
    for (m, d) in seen {
        let label = if m.is_open() {
            format!("{m} D={}", fmt_f64(d))
        } else {
            m.to_string()
        };
        s.push_str(&format!(
            "series where mode={m} D={} label \"{label}\"\n",
            fmt_f64(d)
        ));
    }
    s
}

pub const DISPERSION_HEADER: [&str; 5] = ["t", "H", "H_stderr", "dE", "p2"];

pub fn write_dispersion_csv<W: Write>(
    w: W,
    series: &DispersionSeries,
    prov: &Provenance,
) -> Result<(), OutputError> {
    let mut w = w;
    let head = format!(
        "{}# mode = {}\n# D = {}\n# E = {}\n",
        provenance_lines(prov),
        series.mode,
        fmt_f64(series.d),
        fmt_f64(series.energy)
    );
    w.write_all(head.as_bytes())
        .map_err(|source| OutputError::Io {
            path: "<output>".into(),
            source,
        })?;
    let mut wr = csv::WriterBuilder::new().from_writer(w);
    wr.write_record(DISPERSION_HEADER)?;
    for i in 0..series.times.len() {
        wr.write_record([
            fmt_f64(series.times[i]),
            fmt_f64(series.mean_h[i]),
            fmt_f64(series.mean_h_stderr[i]),
            fmt_f64(series.delta_e[i]),
            fmt_f64(series.mean_p2[i]),
        ])?;
    }
    wr.flush().map_err(|source| OutputError::Io {
        path: "<output>".into(),
        source,
    })?;
    Ok(())
}
