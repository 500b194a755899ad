//! Problem configuration files.
//!
//! One `key = value` pair per line. `#` starts a comment that runs to the end
//! of the line; blank lines are ignored. Keys may appear at most once.
//!
//! | key | type | default |
//! |-----|------|---------|
//! | `alpha`, `beta`, `xi` | real | required |
//! | `rhs` | expression in `t`, `u`, `v` | required |
//! | `grid_n` | integer | 513 |
//! | `tol` | real | 1e-8 |
//! | `max_iter` | integer | 200 |
//! | `k` | real, Lipschitz constant | estimated |
//! | `psi` | `constant` or `affine` | none |
//! | `psi_a` | real; the constant for `constant` | required with `psi` |
//! | `psi_b` | real, slope for `affine` | 0 |
//! | `p_star` | real | required with `psi` |
//! | `output_dir` | path | `out` |
//! | `gstar_n`, `gstar_m` | integers | 4097, 513 |
//! | `lipschitz_samples`, `lipschitz_bound` | integer, real | 64, 10 |

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::certify::{CertifyOptions, GrowthSpec, LipschitzSampling, Psi};
use crate::expr;
use crate::greens::ProblemParams;
use crate::solver::{ProblemSpec, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "beta",
    "xi",
    "rhs",
    "grid_n",
    "tol",
    "max_iter",
    "k",
    "psi",
    "psi_a",
    "psi_b",
    "p_star",
    "output_dir",
    "gstar_n",
    "gstar_m",
    "lipschitz_samples",
    "lipschitz_bound",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub rhs: String,
    pub grid_n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub k: Option<f64>,
    pub growth: Option<GrowthSpec>,
    pub output_dir: PathBuf,
    pub certify: CertifyOptions,
}

fn value_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        message: message.into(),
    }
}

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    map.get(key)
        .map(|raw| raw.parse::<T>().map_err(|e| value_err(key, format!("`{raw}`: {e}"))))
        .transpose()
}

impl Config {
    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    pub fn params(&self) -> Result<ProblemParams, ConfigError> {
        ProblemParams::new(self.alpha, self.beta, self.xi).map_err(|e| value_err("alpha/beta/xi", e.to_string()))
    }

    pub fn spec(&self) -> Result<ProblemSpec, ConfigError> {
        let rhs = expr::parse(&self.rhs).map_err(|e| value_err("rhs", e.to_string()))?;
        Ok(ProblemSpec::new(self.params()?, rhs))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.spec()?;
        if self.grid_n < 129 {
            return Err(value_err("grid_n", format!("need at least 129 nodes, got {}", self.grid_n)));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(value_err("tol", format!("must lie in (0, 1e-2], got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(value_err("max_iter", "must be positive"));
        }
        if let Some(k) = self.k {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(value_err("k", format!("must be finite and >= 0, got {k}")));
            }
        }
        if self.certify.gstar_n < 2 || self.certify.gstar_m < 2 {
            return Err(value_err("gstar_n/gstar_m", "must be at least 2"));
        }
        if self.certify.sampling.t_samples < 16 {
            return Err(value_err("lipschitz_samples", "must be at least 16"));
        }
        let b = self.certify.sampling.bound;
        if !(b > 0.0 && b.is_finite()) {
            return Err(value_err("lipschitz_bound", "must be positive"));
        }
        Ok(())
    }
}

impl FromStr for Config {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }

        let growth = match map.get("psi").map(String::as_str) {
            None => None,
            Some(kind) => {
                let a: f64 = get(&map, "psi_a")?.ok_or(ConfigError::Missing("psi_a"))?;
                let b: f64 = get(&map, "psi_b")?.unwrap_or(0.0);
                let psi = match kind {
                    "constant" => Psi::Constant { c: a },
                    "affine" => Psi::Affine { a, b },
                    other => return Err(value_err("psi", format!("expected constant or affine, got `{other}`"))),
                };
                let p_star: f64 = get(&map, "p_star")?.ok_or(ConfigError::Missing("p_star"))?;
                Some(GrowthSpec::new(p_star, psi).map_err(|e| value_err("psi", e.to_string()))?)
            }
        };

        let defaults = CertifyOptions::default();
        let config = Config {
            alpha: get(&map, "alpha")?.ok_or(ConfigError::Missing("alpha"))?,
            beta: get(&map, "beta")?.ok_or(ConfigError::Missing("beta"))?,
            xi: get(&map, "xi")?.ok_or(ConfigError::Missing("xi"))?,
            rhs: map.get("rhs").cloned().ok_or(ConfigError::Missing("rhs"))?,
            grid_n: get(&map, "grid_n")?.unwrap_or(513),
            tol: get(&map, "tol")?.unwrap_or(DEFAULT_TOL),
            max_iter: get(&map, "max_iter")?.unwrap_or(DEFAULT_MAX_ITER),
            k: get(&map, "k")?,
            growth,
            output_dir: map.get("output_dir").map_or_else(|| PathBuf::from("out"), PathBuf::from),
            certify: CertifyOptions {
                gstar_n: get(&map, "gstar_n")?.unwrap_or(defaults.gstar_n),
                gstar_m: get(&map, "gstar_m")?.unwrap_or(defaults.gstar_m),
                sampling: LipschitzSampling {
                    t_samples: get(&map, "lipschitz_samples")?.unwrap_or(defaults.sampling.t_samples),
                    bound: get(&map, "lipschitz_bound")?.unwrap_or(defaults.sampling.bound),
                },
            },
        };
        config.validate()?;
        Ok(config)
    }
}
