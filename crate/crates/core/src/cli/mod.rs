//! Workflows behind the `fracbvp` binary.
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 configuration error,
//! 3 Picard divergence. Output files are written to a temporary file in the
//! target directory and renamed into place, so a failed run leaves nothing
//! behind.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use config::{Config, ConfigError};

use crate::benchmark;
use crate::certify::{certify, contraction_constant, theta, CertifyOptions};
use crate::error::Error;
use crate::greens::{gstar_coarse_bound, gstar_scan, green_eval};
use crate::solver::{picard_solve, residual, IterationReport, ResidualReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Diverged(Error),
    #[error(transparent)]
    Numerical(Error),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::Numerical(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Diverged { .. } => CliError::Diverged(e),
            other => CliError::Numerical(other),
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut Config) -> Result<(), ConfigError> {
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(n) = self.grid {
            config.grid_n = n;
        }
        if let Some(tol) = self.tol {
            config.tol = tol;
        }
        config.validate()
    }
}

/// Decimal rendering with at most 15 significant digits, shortest form that
/// round-trips the rounded value.
pub fn format_number(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".to_string();
    }
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn staged_file(dir: &Path, contents: &str) -> Result<tempfile::NamedTempFile, CliError> {
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    file.write_all(contents.as_bytes()).map_err(io_err(dir))?;
    file.flush().map_err(io_err(dir))?;
    Ok(file)
}

/// Writes every `(name, contents)` into `dir`, renaming only after all were staged.
fn write_atomically(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let staged = files
        .iter()
        .map(|(name, contents)| Ok((dir.join(name), staged_file(dir, contents)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    staged
        .into_iter()
        .map(|(path, file)| {
            file.persist(&path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e.error,
            })?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct SolveReport<'a> {
    alpha: f64,
    beta: f64,
    xi: f64,
    rhs: &'a str,
    grid_n: usize,
    tol: f64,
    max_iter: usize,
    iterations: usize,
    converged: bool,
    observed_ratio: f64,
    diffs: &'a [f64],
    residual: ResidualReport,
}

/// Result of a successful `solve`.
#[derive(Debug)]
pub struct SolveOutcome {
    pub solution_path: PathBuf,
    pub report_path: PathBuf,
    pub report: IterationReport,
    pub residual: ResidualReport,
}

/// Picard-solves the configured problem; writes `solution.csv` and `report.json`.
pub fn cmd_solve(config: &Config) -> Result<SolveOutcome, CliError> {
    let spec = config.spec()?;
    let (pair, report) = picard_solve(&spec, config.grid_n, config.tol, config.max_iter)?;
    let res = residual(&spec, &pair)?;

    let mut csv = String::from("t,u,v\n");
    for ((t, u), v) in pair.grid().nodes().zip(pair.u.values()).zip(pair.v.values()) {
        writeln!(csv, "{},{},{}", format_number(t), format_number(*u), format_number(*v)).unwrap();
    }
    let json = serde_json::to_string_pretty(&SolveReport {
        alpha: config.alpha,
        beta: config.beta,
        xi: config.xi,
        rhs: &config.rhs,
        grid_n: config.grid_n,
        tol: config.tol,
        max_iter: config.max_iter,
        iterations: report.iterations,
        converged: report.converged,
        observed_ratio: report.observed_ratio,
        diffs: &report.diffs,
        residual: res,
    })
    .expect("report serialises")
        + "\n";
    let paths = write_atomically(&config.output_dir, &[("solution.csv", csv), ("report.json", json)])?;
    Ok(SolveOutcome {
        solution_path: paths[0].clone(),
        report_path: paths[1].clone(),
        report,
        residual: res,
    })
}

/// Certificate as flat `key=value` text. For the benchmark parameters with a
/// supplied `k`, also prints `d_paper` from the published `G*` bound.
pub fn cmd_certify(config: &Config) -> Result<String, CliError> {
    let spec = config.spec()?;
    let cert = certify(&spec, config.k, config.growth.as_ref(), &config.certify)?;
    let mut out = cert.to_key_values();
    if benchmark::matches(&spec.params) && config.k.is_some() {
        let d_paper = contraction_constant(&spec.params, cert.k, benchmark::REPORTED_GSTAR_BOUND)?;
        writeln!(out, "d_paper={d_paper:.12}").unwrap();
    }
    Ok(out)
}

/// Writes `green.csv`: `G(t, s)` on an `m_t x m_s` lattice of `[0, 1]^2`.
pub fn cmd_green(config: &Config, m_t: usize, m_s: usize) -> Result<PathBuf, CliError> {
    if m_t < 2 || m_s < 2 {
        return Err(ConfigError::Value {
            key: "lattice".into(),
            message: format!("need at least 2 x 2 points, got {m_t} x {m_s}"),
        }
        .into());
    }
    let params = config.params()?;
    let mut csv = String::new();
    let s_count = if params.is_weakly_singular() {
        writeln!(csv, "# s = 1 omitted: kernel is singular there (alpha - beta < 1)").unwrap();
        m_s - 1
    } else {
        m_s
    };
    csv.push_str("t,s,g\n");
    let node = |k: usize, m: usize| if k + 1 == m { 1.0 } else { k as f64 / (m - 1) as f64 };
    for i in 0..m_t {
        let t = node(i, m_t);
        for j in 0..s_count {
            let s = node(j, m_s);
            let g = green_eval(&params, t, s)?;
            writeln!(csv, "{},{},{}", format_number(t), format_number(s), format_number(g)).unwrap();
        }
    }
    let paths = write_atomically(&config.output_dir, &[("green.csv", csv)])?;
    Ok(paths[0].clone())
}

/// Runs the benchmark problem end to end: constants, certificate and solve.
pub fn cmd_example() -> Result<String, CliError> {
    let spec = benchmark::spec();
    let p = &spec.params;
    let k = benchmark::LIPSCHITZ_K;
    let options = CertifyOptions::default();
    let gs = gstar_scan(p, options.gstar_n, options.gstar_m)?;
    let th = theta(p);
    let cert = certify(&spec, Some(k), None, &options)?;
    let (pair, report) = picard_solve(&spec, 513, 1e-10, 200)?;
    let res = residual(&spec, &pair)?;

    let mut out = String::new();
    let mut line = |key: &str, value: String| writeln!(out, "{key}={value}").unwrap();
    line("alpha", format!("{}", p.alpha()));
    line("beta", format!("{}", p.beta()));
    line("xi", format!("{}", p.xi()));
    line("k", format!("{k:.6}"));
    line("theta", format!("{th:.12}"));
    line("second_term", format!("{:.12}", 2.0 * k * th));
    line("gstar_reported", format!("{}", benchmark::REPORTED_GSTAR_BOUND));
    line("first_term_paper", format!("{:.12}", 2.0 * k * benchmark::REPORTED_GSTAR_BOUND));
    line("gstar_bound_recomputed", format!("{:.6}", gstar_coarse_bound(p)));
    line("gstar_computed", format!("{:.6}", gs.value));
    line("gstar_argmax_t", format!("{:.6}", gs.argmax));
    line("first_term", format!("{:.12}", 2.0 * k * gs.value));
    line("d", format!("{:.12}", cert.d));
    line("unique", cert.unique.to_string());
    line("converged", report.converged.to_string());
    line("iterations", report.iterations.to_string());
    line("observed_ratio", format!("{:.6}", report.observed_ratio));
    line("u0", format!("{:.9}", pair.u.values()[0]));
    line("u1", format!("{:.9}", pair.u.values()[pair.grid().len() - 1]));
    line("residual_differential", format!("{:.3e}", res.differential));
    line("residual_boundary_value", format!("{:.3e}", res.boundary_value));
    line("residual_boundary_beta", format!("{:.3e}", res.boundary_beta));
    line("residual_consistency", format!("{:.3e}", res.consistency));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333333");
        assert_eq!(format_number(-0.1339745962155614), "-0.133974596215561");
        assert_eq!(format_number(1e-20), "1e-20");
        assert_eq!(format_number(123456.0), "123456");
        assert_eq!(format_number(2.0f64.sqrt() * 1e-9), "1.41421356237310e-9".parse::<f64>().map(|x| format!("{x:e}")).unwrap());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(ConfigError::Missing("alpha")).exit_code(), 2);
        let diverged = Error::Diverged {
            cause: crate::DivergenceCause::BlowUp { norm: 1e9 },
            report: Box::new(IterationReport {
                iterations: 1,
                diffs: vec![1e9],
                converged: false,
                observed_ratio: 0.0,
            }),
        };
        assert_eq!(CliError::from(diverged).exit_code(), 3);
        assert_eq!(CliError::from(Error::Domain("x".into())).exit_code(), 1);
    }
}
