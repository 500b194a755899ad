//! Numerical evaluation of the existence (Schauder) and uniqueness (Banach)
//! hypotheses for the fixed-point operator.
//!
//! With `theta = (Gamma(3-a) Gamma(a-b+1) + Gamma(2-b)) / (Gamma(3-a) Gamma(a-b+1))`:
//!
//! * uniqueness holds when `d = max(2 k G*, 2 k theta) < 1`, `k` being the
//!   Lipschitz constant of `f` in `(u, v)`;
//! * a solution with `|u| < r` exists when `|f| <= p(t) psi(.)` and
//!   `r >= max(G* p* psi(r), p* psi(r) theta)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::lipschitz_estimate;
use crate::greens::{gstar, gstar_coarse_bound, ProblemParams};
use crate::solver::ProblemSpec;
use crate::special::gamma_unchecked;

/// Non-decreasing positive growth function `psi` in `|f| <= p(t) psi(.)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Psi {
    Constant { c: f64 },
    /// `psi(r) = a + b r`
    Affine { a: f64, b: f64 },
}

impl Psi {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Psi::Constant { c } => c,
            Psi::Affine { a, b } => a + b * r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthSpec {
    /// `sup_t p(t)`
    pub p_star: f64,
    pub psi: Psi,
}

impl GrowthSpec {
    pub fn new(p_star: f64, psi: Psi) -> Result<Self> {
        if !(p_star >= 0.0 && p_star.is_finite()) {
            return Err(Error::Domain(format!("p_star must be finite and >= 0, got {p_star}")));
        }
        match psi {
            Psi::Constant { c } if !(c > 0.0 && c.is_finite()) => {
                return Err(Error::Domain(format!("constant psi needs c > 0, got {c}")))
            }
            Psi::Affine { a, b } if !(a > 0.0 && a.is_finite() && b >= 0.0 && b.is_finite()) => {
                return Err(Error::Domain(format!("affine psi needs a > 0, b >= 0, got a = {a}, b = {b}")))
            }
            _ => {}
        }
        Ok(Self { p_star, psi })
    }
}

/// Where the Lipschitz constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LipschitzSource {
    Supplied,
    /// Sampled; can under-estimate, so the verdict is not rigorous.
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    /// Computed `sup_t int |G(t,s)| ds`.
    pub gstar_value: f64,
    /// Triangle-inequality bound on `G*`, for comparison.
    pub gstar_paper_bound: f64,
    pub theta: f64,
    pub k: f64,
    pub k_source: LipschitzSource,
    pub d: f64,
    pub unique: bool,
    pub r: Option<f64>,
    pub exists: bool,
}

impl Certificate {
    pub fn estimated_k(&self) -> bool {
        self.k_source == LipschitzSource::Estimated
    }

    /// Flat `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let r = self.r.map_or_else(|| "none".to_string(), |r| format!("{r:.12}"));
        format!(
            "alpha={:.12}\nbeta={:.12}\nxi={:.12}\ngstar_value={:.12}\ngstar_paper_bound={:.12}\n\
             theta={:.12}\nk={:.12}\nd={:.12}\nunique={}\nr={}\nexists={}\nestimated_k={}\n",
            self.alpha,
            self.beta,
            self.xi,
            self.gstar_value,
            self.gstar_paper_bound,
            self.theta,
            self.k,
            self.d,
            self.unique,
            r,
            self.exists,
            self.estimated_k()
        )
    }
}

/// Ratio of Gamma values bounding `int |H(t,s)| ds` uniformly in `t`. Always > 1.
pub fn theta(params: &ProblemParams) -> f64 {
    let denom = params.gamma_three_alpha() * gamma_unchecked(params.alpha() - params.beta() + 1.0);
    (denom + params.gamma_two_beta()) / denom
}

/// `d = max(2 k G*, 2 k theta)`.
pub fn contraction_constant(params: &ProblemParams, k: f64, gstar_value: f64) -> Result<f64> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("Lipschitz constant must be finite and >= 0, got {k}")));
    }
    if !(gstar_value >= 0.0 && gstar_value.is_finite()) {
        return Err(Error::Domain(format!("G* must be finite and >= 0, got {gstar_value}")));
    }
    Ok((2.0 * k * gstar_value).max(2.0 * k * theta(params)))
}

/// Smallest `r` with `r >= p* psi(r) max(G*, theta)`, or `None` when no finite
/// radius exists.
pub fn existence_radius(params: &ProblemParams, growth: &GrowthSpec, gstar_value: f64) -> Option<f64> {
    let m = gstar_value.max(theta(params));
    let p = growth.p_star;
    match growth.psi {
        Psi::Constant { c } => Some(p * c * m),
        Psi::Affine { a, b } => {
            let slope = p * b * m;
            (slope < 1.0).then(|| p * a * m / (1.0 - slope))
        }
    }
}

/// Sampling used when no Lipschitz constant is supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzSampling {
    pub t_samples: usize,
    pub bound: f64,
}

impl Default for LipschitzSampling {
    fn default() -> Self {
        Self {
            t_samples: 64,
            bound: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Root-bracketing grid for `G*`.
    pub gstar_n: usize,
    /// Scan size in `t` for `G*`.
    pub gstar_m: usize,
    pub sampling: LipschitzSampling,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            gstar_n: 4097,
            gstar_m: 513,
            sampling: LipschitzSampling::default(),
        }
    }
}

/// Assembles a [`Certificate`]. Without `k` the Lipschitz constant is
/// estimated from the right-hand side and the certificate is marked so.
pub fn certify(
    spec: &ProblemSpec,
    k: Option<f64>,
    growth: Option<&GrowthSpec>,
    options: &CertifyOptions,
) -> Result<Certificate> {
    let params = &spec.params;
    let (k, k_source) = match k {
        Some(k) => (k, LipschitzSource::Supplied),
        None => (
            lipschitz_estimate(&spec.rhs, options.sampling.t_samples, options.sampling.bound)?,
            LipschitzSource::Estimated,
        ),
    };
    let gstar_value = gstar(params, options.gstar_n, options.gstar_m)?;
    let d = contraction_constant(params, k, gstar_value)?;
    let r = growth.and_then(|g| existence_radius(params, g, gstar_value));
    Ok(Certificate {
        alpha: params.alpha(),
        beta: params.beta(),
        xi: params.xi(),
        gstar_value,
        gstar_paper_bound: gstar_coarse_bound(params),
        theta: theta(params),
        k,
        k_source,
        d,
        unique: d < 1.0,
        r,
        exists: r.is_some(),
    })
}
