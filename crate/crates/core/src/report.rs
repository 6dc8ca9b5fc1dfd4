//! Report assembly and rendering.
//!
//! JSON is the canonical format; the table renderer works from the
//! serialized JSON value, never from a separate computation, so the two
//! always agree. Reports embed the resolved config, the crate version and
//! the provenance tag, and contain nothing time- or machine-dependent:
//! identical configs produce byte-identical reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::dist::{BitDistribution, Provenance};
use crate::Result;

/// One named check: a measured quantity against its bound.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub detail: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// A check that passes when `measured <= bound`.
    pub fn le(
        name: impl Into<String>,
        detail: impl Into<String>,
        measured: f64,
        bound: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            detail: detail.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    /// A check that passes when `measured >= bound`.
    pub fn ge(
        name: impl Into<String>,
        detail: impl Into<String>,
        measured: f64,
        bound: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            detail: detail.into(),
            measured,
            bound,
            pass: measured >= bound,
        }
    }

    /// A non-gating diagnostic: always passes, the numbers are for reading.
    pub fn diagnostic(
        name: impl Into<String>,
        detail: impl Into<String>,
        measured: f64,
        bound: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            detail: detail.into(),
            measured,
            bound,
            pass: true,
        }
    }
}

/// One experiment outcome: a game, its challenge, its parameters, a
/// distribution.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRecord {
    pub game: String,
    pub g: Option<String>,
    pub params: BTreeMap<String, String>,
    pub distribution: Vec<DistEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistEntry {
    pub value: String,
    pub probability: f64,
}

impl ExperimentRecord {
    pub fn from_bits(
        game: impl Into<String>,
        g: Option<String>,
        params: BTreeMap<String, String>,
        dist: &BitDistribution,
    ) -> Self {
        ExperimentRecord {
            game: game.into(),
            g,
            params,
            distribution: dist
                .support()
                .iter()
                .map(|(v, p)| DistEntry {
                    value: v.to_string(),
                    probability: *p,
                })
                .collect(),
        }
    }
}

/// A complete run report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub provenance: Provenance,
    pub checks: Vec<CheckRecord>,
    pub experiments: Vec<Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: RunConfig, provenance: Provenance) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            provenance,
            checks: Vec::new(),
            experiments: Vec::new(),
            passed: true,
        }
    }

    pub fn push_checks(&mut self, checks: Vec<CheckRecord>) {
        self.checks.extend(checks);
        self.passed = self.checks.iter().all(|c| c.pass);
    }

    pub fn push_experiment<T: Serialize>(&mut self, record: &T) {
        self.experiments
            .push(serde_json::to_value(record).expect("serializable record"));
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable report");
        text.push('\n');
        text
    }

    /// Text rendering derived from the JSON value.
    pub fn to_table(&self) -> String {
        let value = serde_json::to_value(self).expect("serializable report");
        let mut out = String::new();
        out.push_str(&format!(
            "romlift {} ({})\n",
            value["version"].as_str().unwrap_or("?"),
            provenance_label(&value["provenance"]),
        ));
        let checks = value["checks"].as_array().cloned().unwrap_or_default();
        if !checks.is_empty() {
            let name_width = checks
                .iter()
                .filter_map(|c| c["name"].as_str().map(str::len))
                .max()
                .unwrap_or(4)
                .max(5);
            out.push_str(&format!(
                "{:<name_width$}  {:>14}  {:>14}  {:>6}  detail\n",
                "check", "measured", "bound", "status",
            ));
            for check in &checks {
                out.push_str(&format!(
                    "{:<name_width$}  {:>14.6e}  {:>14.6e}  {:>6}  {}\n",
                    check["name"].as_str().unwrap_or("?"),
                    check["measured"].as_f64().unwrap_or(f64::NAN),
                    check["bound"].as_f64().unwrap_or(f64::NAN),
                    if check["pass"].as_bool().unwrap_or(false) {
                        "pass"
                    } else {
                        "FAIL"
                    },
                    check["detail"].as_str().unwrap_or(""),
                ));
            }
        }
        if let Some(experiments) = value["experiments"].as_array() {
            for experiment in experiments {
                out.push_str("--\n");
                out.push_str(&render_experiment(experiment));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if value["passed"].as_bool().unwrap_or(false) {
                "pass"
            } else {
                "FAIL"
            }
        ));
        out
    }
}

/// Distribution records become aligned rows; anything else (traces, lift
/// reports) falls back to pretty JSON. Both read from the serialized value.
fn render_experiment(experiment: &Value) -> String {
    let (Some(game), Some(distribution)) = (
        experiment["game"].as_str(),
        experiment["distribution"].as_array(),
    ) else {
        let mut out = serde_json::to_string_pretty(experiment).expect("serializable value");
        out.push('\n');
        return out;
    };
    let mut out = String::from(game);
    if let Some(g) = experiment["g"].as_str() {
        out.push_str(&format!("  g={g}"));
    }
    if let Some(params) = experiment["params"].as_object() {
        for (key, val) in params {
            out.push_str(&format!("  {key}={}", val.as_str().unwrap_or("?")));
        }
    }
    out.push('\n');
    for entry in distribution {
        out.push_str(&format!(
            "  {:>8}  {:.12}\n",
            entry["value"].as_str().unwrap_or("?"),
            entry["probability"].as_f64().unwrap_or(f64::NAN),
        ));
    }
    out
}

fn provenance_label(value: &Value) -> String {
    match value["mode"].as_str() {
        Some("exact_enumeration") => "exact".to_string(),
        Some("sampled") => format!(
            "sampled seed={} trials={}",
            value["seed"].as_u64().unwrap_or(0),
            value["trials"].as_u64().unwrap_or(0)
        ),
        _ => "?".to_string(),
    }
}

/// Write a report file atomically: write to a sibling temp file, then
/// rename over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_reproducible() {
        let build = || {
            let mut report = Report::new(RunConfig::default(), Provenance::ExactEnumeration);
            report.push_checks(vec![
                CheckRecord::le("a", "first", 0.5, 1.0),
                CheckRecord::ge("b", "second", 0.5, 0.25),
            ]);
            report.push_experiment(&ExperimentRecord::from_bits(
                "PRG",
                Some("01".to_string()),
                BTreeMap::from([("prg".to_string(), "g_id".to_string())]),
                &BitDistribution::from_prob_one(0.25, Provenance::ExactEnumeration),
            ));
            report
        };
        assert_eq!(build().to_json(), build().to_json());
        assert_eq!(build().to_table(), build().to_table());
    }

    #[test]
    fn failing_check_fails_the_report() {
        let mut report = Report::new(RunConfig::default(), Provenance::ExactEnumeration);
        report.push_checks(vec![CheckRecord::le("bad", "", 2.0, 1.0)]);
        assert!(!report.passed);
        assert!(report.to_table().contains("FAIL"));
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    }
}
