//! Flat `key = value` experiment configuration, one experiment per file.
//!
//! ```text
//! # stability of the decay map
//! experiment = stability
//! map = rakotch-decay
//! M = 1
//! epsilon = 0.1
//! trials = 100
//! seed = 1
//! output = out/stability
//! ```
//!
//! Map parameters are given as `map.<name> = v1,v2,...`.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use contractive_core::gallery::Params;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Solve,
    Stability,
    Trace,
    Limit,
    Certify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Solve => "solve",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Trace => "trace",
            ExperimentKind::Limit => "limit",
            ExperimentKind::Certify => "certify",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solve" => Ok(ExperimentKind::Solve),
            "stability" => Ok(ExperimentKind::Stability),
            "trace" => Ok(ExperimentKind::Trace),
            "limit" => Ok(ExperimentKind::Limit),
            "certify" => Ok(ExperimentKind::Certify),
            other => Err(format!(
                "unknown experiment `{other}` (expected solve, stability, trace, limit or certify)"
            )),
        }
    }
}

const KEYS: &[&str] = &[
    "experiment",
    "map",
    "x0",
    "tol",
    "max_iter",
    "M",
    "epsilon",
    "trials",
    "n",
    "seed",
    "delta",
    "q",
    "inner_tol",
    "max_inner_iter",
    "target_t",
    "final_tol",
    "m_bound",
    "r_cap",
    "pairs",
    "slack",
    "output",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub map: String,
    pub map_params: Params,
    pub x0: Option<Vec<f64>>,
    pub tol: f64,
    pub max_iter: usize,
    pub radius: Option<f64>,
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub steps: Option<usize>,
    pub seed: u64,
    pub delta: Option<f64>,
    pub q: f64,
    pub inner_tol: f64,
    pub max_inner_iter: usize,
    pub target_t: Option<f64>,
    pub final_tol: f64,
    pub m_bound: Option<f64>,
    pub r_cap: f64,
    pub pairs: Option<usize>,
    pub slack: f64,
    pub output: PathBuf,
    /// `(key, value)` in file order, for the run manifest.
    pub entries: Vec<(String, String)>,
}

struct Raw {
    values: HashMap<String, (usize, String)>,
}

impl Raw {
    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.values.get(key).map(|(l, _)| *l),
            message: message.into(),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| ConfigError {
                line: Some(*line),
                message: format!("`{key}`: cannot parse `{v}`: {e}"),
            }),
        }
    }

    fn required<T: FromStr>(&self, key: &str, kind: ExperimentKind) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.parsed(key)?.ok_or_else(|| ConfigError {
            line: None,
            message: format!("`{}` experiments require `{key}`", kind.name()),
        })
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.parsed::<f64>(key)?.unwrap_or(default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(self.err(key, format!("`{key}` must be positive, got {v}")))
        }
    }
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|e| ConfigError {
                line: Some(line),
                message: format!("`{key}`: cannot parse `{}`: {e}", s.trim()),
            })
        })
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut values: HashMap<String, (usize, String)> = HashMap::new();
        let mut map_params = Params::new();
        let mut entries = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError {
                    line: Some(line),
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError {
                    line: Some(line),
                    message: "empty key or value".into(),
                });
            }
            if values.contains_key(key)
                || key
                    .strip_prefix("map.")
                    .is_some_and(|p| map_params.contains_key(p))
            {
                return Err(ConfigError {
                    line: Some(line),
                    message: format!("duplicate key `{key}`"),
                });
            }
            entries.push((key.to_string(), value.to_string()));
            if let Some(param) = key.strip_prefix("map.") {
                map_params.insert(param.to_string(), parse_list(line, key, value)?);
            } else if KEYS.contains(&key) {
                values.insert(key.to_string(), (line, value.to_string()));
            } else {
                return Err(ConfigError {
                    line: Some(line),
                    message: format!("unknown key `{key}`"),
                });
            }
        }
        let raw = Raw { values };

        let kind: ExperimentKind = raw
            .parsed::<String>("experiment")?
            .ok_or_else(|| ConfigError {
                line: None,
                message: "missing `experiment`".into(),
            })?
            .parse()
            .map_err(|m| raw.err("experiment", m))?;
        let map = raw.parsed::<String>("map")?.ok_or_else(|| ConfigError {
            line: None,
            message: "missing `map`".into(),
        })?;

        let x0 = match raw.values.get("x0") {
            Some((line, v)) => Some(parse_list(*line, "x0", v)?),
            None => None,
        };
        let cfg = ExperimentConfig {
            kind,
            map,
            map_params,
            x0,
            tol: raw.positive("tol", 1e-10)?,
            max_iter: raw.parsed("max_iter")?.unwrap_or(100_000),
            radius: match kind {
                ExperimentKind::Stability => Some(raw.required("M", kind)?),
                _ => raw.parsed("M")?,
            },
            epsilon: match kind {
                ExperimentKind::Stability => Some(raw.required("epsilon", kind)?),
                _ => raw.parsed("epsilon")?,
            },
            trials: raw.parsed("trials")?.unwrap_or(100),
            steps: raw.parsed("n")?,
            seed: raw.parsed("seed")?.unwrap_or(0),
            delta: raw.parsed("delta")?,
            q: match kind {
                ExperimentKind::Trace => raw.required("q", kind)?,
                _ => raw.parsed("q")?.unwrap_or(0.9),
            },
            inner_tol: raw.positive("inner_tol", 1e-10)?,
            max_inner_iter: raw.parsed("max_inner_iter")?.unwrap_or(100_000),
            target_t: match kind {
                ExperimentKind::Trace => Some(raw.required("target_t", kind)?),
                _ => raw.parsed("target_t")?,
            },
            final_tol: raw.positive("final_tol", 1e-6)?,
            m_bound: raw.parsed("m_bound")?,
            r_cap: raw.positive("r_cap", 1.0)?,
            pairs: match kind {
                ExperimentKind::Certify => Some(raw.required("pairs", kind)?),
                _ => raw.parsed("pairs")?,
            },
            slack: raw.parsed("slack")?.unwrap_or(1e-12),
            output: raw
                .parsed::<String>("output")?
                .unwrap_or_else(|| "out".into())
                .into(),
            entries,
        };
        cfg.validate(&raw)?;
        Ok(cfg)
    }

    fn validate(&self, raw: &Raw) -> Result<(), ConfigError> {
        if self.kind == ExperimentKind::Solve && self.x0.is_none() {
            return Err(ConfigError {
                line: None,
                message: "`solve` experiments require `x0`".into(),
            });
        }
        if self.trials == 0 {
            return Err(raw.err("trials", "`trials` must be at least 1"));
        }
        if self.max_iter == 0 || self.max_inner_iter == 0 {
            let key = if self.max_iter == 0 {
                "max_iter"
            } else {
                "max_inner_iter"
            };
            return Err(raw.err(key, format!("`{key}` must be at least 1")));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(raw.err("q", format!("`q` must lie in (0, 1), got {}", self.q)));
        }
        for (key, v) in [
            ("M", self.radius),
            ("epsilon", self.epsilon),
            ("m_bound", self.m_bound),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(raw.err(key, format!("`{key}` must be positive, got {v}")));
                }
            }
        }
        if let Some(d) = self.delta {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(raw.err("delta", format!("`delta` must be nonnegative, got {d}")));
            }
        }
        if let Some(t) = self.target_t {
            if !(0.0..1.0).contains(&t) {
                return Err(raw.err(
                    "target_t",
                    format!("`target_t` must lie in [0, 1), got {t}"),
                ));
            }
        }
        if self.pairs == Some(0) {
            return Err(raw.err("pairs", "`pairs` must be at least 1"));
        }
        if !(self.slack >= 0.0) {
            return Err(raw.err(
                "slack",
                format!("`slack` must be nonnegative, got {}", self.slack),
            ));
        }
        Ok(())
    }
}
