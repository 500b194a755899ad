use std::f64::consts::PI;

use thiserror::Error;

use super::{BinOp, Expr, Func, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("square root of negative value {0}")]
    SqrtDomain(f64),
    #[error("fractional power {exponent} of negative base {base}")]
    PowDomain { base: f64, exponent: f64 },
    #[error("non-finite input or result")]
    NonFinite,
    #[error("invalid sampling request: {0}")]
    Sampling(String),
}

fn finite(x: f64) -> Result<f64, EvalError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(EvalError::NonFinite)
    }
}

pub(super) fn eval(e: &Expr, t: f64, u: f64, v: f64) -> Result<f64, EvalError> {
    if !(t.is_finite() && u.is_finite() && v.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    eval_node(e, t, u, v)
}

fn eval_node(e: &Expr, t: f64, u: f64, v: f64) -> Result<f64, EvalError> {
    match e {
        Expr::Num(x) => Ok(*x),
        Expr::Pi => Ok(PI),
        Expr::Var(Var::T) => Ok(t),
        Expr::Var(Var::U) => Ok(u),
        Expr::Var(Var::V) => Ok(v),
        Expr::Neg(a) => Ok(-eval_node(a, t, u, v)?),
        Expr::Call(func, a) => {
            let x = eval_node(a, t, u, v)?;
            let y = match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Ln if x <= 0.0 => return Err(EvalError::LogDomain(x)),
                Func::Ln => x.ln(),
                Func::Sqrt if x < 0.0 => return Err(EvalError::SqrtDomain(x)),
                Func::Sqrt => x.sqrt(),
                Func::Abs => x.abs(),
            };
            finite(y)
        }
        Expr::Binary(op, a, b) => {
            let x = eval_node(a, t, u, v)?;
            let y = eval_node(b, t, u, v)?;
            let r = match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div if y == 0.0 => return Err(EvalError::DivisionByZero),
                BinOp::Div => x / y,
                BinOp::Pow if x < 0.0 && y.fract() != 0.0 => {
                    return Err(EvalError::PowDomain { base: x, exponent: y })
                }
                BinOp::Pow if x == 0.0 && y < 0.0 => return Err(EvalError::DivisionByZero),
                BinOp::Pow => x.powf(y),
            };
            finite(r)
        }
    }
}

/// Points per axis of the `(u, v)` sampling lattice.
const UV_SAMPLES: usize = 17;
const FD_STEP: f64 = 1e-6;

/// Sampled Lipschitz estimate: the largest of `|df/du|` and `|df/dv|` over
/// `t_samples` equispaced `t` in `[0, 1]` and a lattice on `[-bound, bound]^2`,
/// using central differences with step `1e-6 (1 + |x|)`.
///
/// This is an estimate: sampling can miss the true supremum.
pub fn lipschitz_estimate(e: &Expr, t_samples: usize, bound: f64) -> Result<f64, EvalError> {
    if t_samples < 16 {
        return Err(EvalError::Sampling(format!("need at least 16 t samples, got {t_samples}")));
    }
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(EvalError::Sampling(format!("bound must be positive and finite, got {bound}")));
    }
    let lattice = |k: usize| -bound + 2.0 * bound * k as f64 / (UV_SAMPLES - 1) as f64;
    let mut best: f64 = 0.0;
    for i in 0..t_samples {
        let t = i as f64 / (t_samples - 1) as f64;
        for a in 0..UV_SAMPLES {
            let u = lattice(a);
            let hu = FD_STEP * (1.0 + u.abs());
            for b in 0..UV_SAMPLES {
                let v = lattice(b);
                let hv = FD_STEP * (1.0 + v.abs());
                let du = (eval(e, t, u + hu, v)? - eval(e, t, u - hu, v)?) / (2.0 * hu);
                let dv = (eval(e, t, u, v + hv)? - eval(e, t, u, v - hv)?) / (2.0 * hv);
                best = best.max(du.abs()).max(dv.abs());
            }
        }
    }
    Ok(best)
}
