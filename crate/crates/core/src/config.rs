//! Run configuration: defaults, `key = value` config files, flag overrides.
//!
//! The config file mirrors the CLI flags one key per line; flags win over
//! file values so a suite definition can live in a file while individual
//! runs tweak it.

use serde::Serialize;

use crate::{Error, Mode, Result, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Table,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(Error::UnknownName(format!("format {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exact,
    Sampled,
}

impl ModeKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ModeKind::Exact),
            "sampled" => Ok(ModeKind::Sampled),
            other => Err(Error::UnknownName(format!("mode {other}"))),
        }
    }
}

/// Everything a run needs, resolved from defaults, config file and flags.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub suite: String,
    pub mode: ModeKind,
    pub seed: Option<u64>,
    pub trials: u64,
    pub budget: u64,
    pub out: Option<String>,
    pub format: OutputFormat,
    pub game: Option<String>,
    pub prg: Option<String>,
    pub distinguisher: Option<String>,
    pub input_wires: Option<Vec<usize>>,
    pub g: Option<String>,
    pub delta: Option<f64>,
    pub eps: Option<String>,
    pub alg: Option<String>,
    pub oracle: Option<String>,
    pub fixture: Option<String>,
    pub check_critical_set: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: "all".into(),
            mode: ModeKind::Exact,
            seed: None,
            trials: 20_000,
            budget: DEFAULT_BUDGET,
            out: None,
            format: OutputFormat::Json,
            game: None,
            prg: None,
            distinguisher: None,
            input_wires: None,
            g: None,
            delta: None,
            eps: None,
            alg: None,
            oracle: None,
            fixture: None,
            check_critical_set: false,
        }
    }
}

impl RunConfig {
    /// Resolve the evaluation mode. Sampled mode requires a seed; exact mode
    /// ignores it.
    pub fn resolve_mode(&self) -> Result<Mode> {
        match self.mode {
            ModeKind::Exact => Ok(Mode::Exact {
                budget: self.budget,
            }),
            ModeKind::Sampled => {
                let seed = self.seed.ok_or(Error::MissingSeed)?;
                Ok(Mode::Sampled {
                    seed,
                    trials: self.trials,
                })
            }
        }
    }

    /// Apply a `key = value` config file on top of the current values.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            match key {
                "suite" => self.suite = value.to_string(),
                "mode" => self.mode = ModeKind::parse(value).map_err(|e| bad(e.to_string()))?,
                "seed" => {
                    self.seed = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad seed `{value}`")))?,
                    )
                }
                "trials" => {
                    self.trials = value
                        .parse()
                        .map_err(|_| bad(format!("bad trials `{value}`")))?
                }
                "budget" => {
                    self.budget = value
                        .parse()
                        .map_err(|_| bad(format!("bad budget `{value}`")))?
                }
                "out" => self.out = Some(value.to_string()),
                "format" => {
                    self.format = OutputFormat::parse(value).map_err(|e| bad(e.to_string()))?
                }
                "game" => self.game = Some(value.to_string()),
                "prg" => self.prg = Some(value.to_string()),
                "distinguisher" => self.distinguisher = Some(value.to_string()),
                "input_wires" => {
                    self.input_wires = Some(
                        parse_wire_list(value)
                            .ok_or_else(|| bad(format!("bad wire list `{value}`")))?,
                    )
                }
                "g" => self.g = Some(value.to_string()),
                "delta" => {
                    self.delta = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad delta `{value}`")))?,
                    )
                }
                "eps" => self.eps = Some(value.to_string()),
                "alg" => self.alg = Some(value.to_string()),
                "oracle" => self.oracle = Some(value.to_string()),
                "fixture" => self.fixture = Some(value.to_string()),
                "check_critical_set" => {
                    self.check_critical_set = value
                        .parse()
                        .map_err(|_| bad(format!("bad boolean `{value}`")))?
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }

    /// Parse the `eps` selector: `auto` (use the measured quantum
    /// advantage) or an explicit value.
    pub fn eps_target(&self) -> Result<Option<f64>> {
        match self.eps.as_deref() {
            None | Some("auto") => Ok(None),
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|_| Error::UnknownName(format!("eps {text}"))),
        }
    }
}

/// Parse a comma-separated wire list like `4,5,6`.
pub fn parse_wire_list(text: &str) -> Option<Vec<usize>> {
    text.split(',')
        .map(|part| part.trim().parse().ok())
        .collect()
}
