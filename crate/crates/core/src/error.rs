use thiserror::Error;

use crate::solver::IterationReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the numerical library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("kernel is singular at s = 1 (alpha - beta = {0} < 1)")]
    Singular(f64),

    #[error("evaluation failed at node {node} (t = {t}): {source}")]
    NodeEvaluation {
        node: usize,
        t: f64,
        #[source]
        source: crate::expr::EvalError,
    },

    #[error(transparent)]
    Eval(#[from] crate::expr::EvalError),

    #[error("Picard iteration diverged after {} iterations: {cause}", report.iterations)]
    Diverged {
        cause: DivergenceCause,
        report: Box<IterationReport>,
    },
}

/// Why a Picard run was declared divergent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceCause {
    /// The pair max-norm of an iterate exceeded the blow-up cap.
    BlowUp { norm: f64 },
    /// `max_iter` iterations ran without meeting the tolerance.
    IterationLimit { last_diff: f64 },
}

impl std::fmt::Display for DivergenceCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivergenceCause::BlowUp { norm } => write!(f, "iterate norm {norm:e} exceeded cap"),
            DivergenceCause::IterationLimit { last_diff } => {
                write!(f, "iteration limit reached with last difference {last_diff:e}")
            }
        }
    }
}
