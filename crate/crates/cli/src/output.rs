//! Rendering results and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What a subcommand produced.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    /// `Some(false)` when a checked claim failed.
    pub verified: Option<bool>,
    pub seeds: Vec<u64>,
}

impl Report {
    pub fn new(json: impl Serialize, text: impl Into<String>) -> Self {
        Self {
            json: serde_json::to_value(json).expect("report values serialize"),
            text: text.into(),
            csv: None,
            verified: None,
            seeds: Vec::new(),
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn verified(mut self, ok: bool) -> Self {
        self.verified = Some(ok);
        self
    }

    pub fn seeds(mut self, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.seeds.extend(seeds);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub threads: usize,
    pub wall_time_ms: f64,
    pub exit_code: i32,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Csv => report.csv.clone().unwrap_or_else(|| pretty(&report.json)),
        Format::Json => pretty(&report.json),
        Format::Text => report.text.clone(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the rendered output and its manifest; the manifest goes next to
/// `--out`, or to stderr when printing to stdout.
pub fn emit(
    body: &str,
    out: Option<&Path>,
    command: &str,
    args: Vec<String>,
    seeds: Vec<u64>,
    started: Instant,
    exit_code: i32,
) -> std::io::Result<()> {
    let digest = sha256_hex(body.as_bytes());
    let target = match out {
        Some(p) => {
            std::fs::write(p, body)?;
            p.display().to_string()
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            "<stdout>".to_string()
        }
    };
    let manifest = RunManifest {
        command: command.to_string(),
        args,
        seeds,
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: cell24_core::par::current_threads(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        exit_code,
        outputs: vec![OutputDigest {
            path: target,
            sha256: digest,
        }],
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    match out {
        Some(p) => std::fs::write(manifest_path(p), text + "\n"),
        None => writeln!(
            std::io::stderr(),
            "{}",
            serde_json::to_string(&manifest).expect("manifest serializes")
        ),
    }
}
