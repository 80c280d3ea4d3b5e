use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::rmt::{CumulantEstimate, RNG_NAME};
use crate::series::CouplingSeries;

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 9] =
    ["quantity", "N", "t", "estimate_re", "estimate_im", "std_error", "samples", "config_hash", "seed"];

/// Where a result came from: enough to rerun it bit for bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    /// SHA-256 of the compact config JSON without output paths.
    pub config_hash: String,
    pub seed: u64,
    pub rng: String,
    pub versions: BTreeMap<String, String>,
}

impl Provenance {
    pub fn of(config: &RunConfig) -> Self {
        let mut hashed = config.clone();
        hashed.output = Default::default();
        let bytes = serde_json::to_vec(&hashed).expect("config serializes");
        let mut versions = BTreeMap::new();
        versions.insert("umm-core".to_string(), env!("CARGO_PKG_VERSION").to_string());
        versions.insert("report-format".to_string(), "1".to_string());
        Self {
            command: config.command.to_string(),
            config_hash: hex::encode(Sha256::digest(&bytes)),
            seed: config.seed(),
            rng: RNG_NAME.to_string(),
            versions,
        }
    }
}

/// One numeric result. Exact values have no `N` and zero error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub quantity: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl ResultRow {
    pub fn exact(quantity: impl Into<String>, t: Option<f64>, value: (f64, f64)) -> Self {
        Self {
            quantity: quantity.into(),
            n: None,
            t,
            estimate_re: value.0,
            estimate_im: value.1,
            std_error: 0.0,
            samples: 0,
        }
    }

    pub fn estimate(quantity: impl Into<String>, n: usize, t: f64, est: &CumulantEstimate) -> Self {
        Self {
            quantity: quantity.into(),
            n: Some(n),
            t: Some(t),
            estimate_re: est.value.re,
            estimate_im: est.value.im,
            std_error: est.std_error,
            samples: est.samples,
        }
    }

    /// `label[t^k]` for every coefficient, then `label` at `t` when `t ≠ 0`.
    pub fn series(label: &str, s: &CouplingSeries, t: f64) -> Vec<Self> {
        let mut rows: Vec<Self> = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| Self::exact(format!("{label}[t^{k}]"), None, c.to_f64_pair()))
            .collect();
        if t != 0.0 {
            rows.push(Self::exact(label, Some(t), s.eval_f64(t)));
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub provenance: Provenance,
    /// Command-specific exact output.
    pub exact: Value,
    pub rows: Vec<ResultRow>,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    quantity: &'a str,
    #[serde(rename = "N")]
    n: Option<usize>,
    t: Option<f64>,
    estimate_re: f64,
    estimate_im: f64,
    std_error: f64,
    samples: usize,
    config_hash: &'a str,
    seed: u64,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Self { provenance: Provenance::of(config), exact: Value::Null, rows: Vec::new(), checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header always, then one row per result carrying the provenance.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.serialize(CsvRow {
                quantity: &r.quantity,
                n: r.n,
                t: r.t,
                estimate_re: r.estimate_re,
                estimate_im: r.estimate_im,
                std_error: r.std_error,
                samples: r.samples,
                config_hash: &self.provenance.config_hash,
                seed: self.provenance.seed,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn write_files(&self, json: Option<&Path>, csv_path: Option<&Path>) -> std::io::Result<()> {
        if let Some(p) = json {
            std::fs::write(p, self.to_json() + "\n")?;
        }
        if let Some(p) = csv_path {
            std::fs::write(p, self.csv_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::Command;

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new(&RunConfig::new(Command::Validate));
        assert_eq!(r.csv_string(), CSV_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn hash_ignores_output_paths() {
        let a = RunConfig::new(Command::Clt);
        let mut b = a.clone();
        b.output.csv = Some("elsewhere.csv".into());
        assert_eq!(Provenance::of(&a).config_hash, Provenance::of(&b).config_hash);
        b.potential = "u1 + u1^-1".into();
        assert_ne!(Provenance::of(&a).config_hash, Provenance::of(&b).config_hash);
    }
}
