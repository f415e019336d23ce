//! Posterior-mean shrinkage rules and the level-dependent denoiser.
//!
//! Under the mixture prior `alpha delta0 + (1 - alpha) g` and Gaussian noise,
//! the Bayes rule for squared-error loss is
//!
//! ```text
//!            (1 - alpha) int theta g(theta) phi_s(d - theta) dtheta
//! delta(d) = -----------------------------------------------------------
//!            alpha phi_s(d) + (1 - alpha) int g(theta) phi_s(d - theta) dtheta
//! ```
//!
//! with `phi_s` the N(0, sigma^2) density. Bounded priors are integrated in
//! `theta` over their support with composite Gauss-Legendre (split at the
//! triangular mode); the skew normal uses Gauss-Hermite in whichever variable
//! carries the narrower Gaussian. All terms are accumulated on a log scale
//! with the largest exponent factored out, so very large `|d| / sigma` does
//! not underflow.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Result, ShrinkError};
use crate::numeric::{self, median, norm_ln_pdf, LN_SQRT_2PI};
use crate::priors::{AsymmetricPrior, MixturePrior};
use crate::wavelet::{dwt, idwt, Signal, WaveletBasis, WaveletDecomposition};

/// Normalising constant of the MAD noise estimate.
pub const MAD_CONSTANT: f64 = 0.6745;

/// Node budget for evaluating the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss-Legendre nodes across the support of a bounded prior.
    pub legendre_nodes: usize,
    /// Gauss-Hermite nodes for the skew-normal prior.
    pub hermite_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            legendre_nodes: 128,
            hermite_nodes: 64,
        }
    }
}

impl QuadratureConfig {
    pub const MIN_NODES: usize = 32;

    fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("legendre_nodes", self.legendre_nodes),
            ("hermite_nodes", self.hermite_nodes),
        ] {
            if n < Self::MIN_NODES {
                return Err(ShrinkError::InvalidParameter {
                    name,
                    value: n as f64,
                    reason: "quadrature needs at least 32 nodes",
                });
            }
        }
        Ok(())
    }
}

/// Anything that maps an empirical coefficient to an estimate, with the noise
/// level it was built for. Risk computations are generic over this.
pub trait CoefficientRule: Sync {
    fn estimate(&self, d: f64) -> Result<f64>;
    fn sigma(&self) -> f64;
}

/// `delta(d) = d`, the unbiased no-shrinkage rule.
#[derive(Debug, Clone, Copy)]
pub struct IdentityRule {
    pub sigma: f64,
}

impl CoefficientRule for IdentityRule {
    fn estimate(&self, d: f64) -> Result<f64> {
        Ok(d)
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }
}

#[derive(Debug, Clone)]
enum Nodes {
    /// Fixed nodes in `theta` with `ln(w_k g(theta_k))`.
    Theta { theta: Vec<f64>, ln_weight: Vec<f64> },
    /// Nodes in `u = (theta - d) / sigma`; `g` is evaluated per call.
    Shifted { u: Vec<f64>, ln_weight: Vec<f64> },
}

/// The posterior-mean rule for one mixture prior and noise level.
#[derive(Debug, Clone)]
pub struct ShrinkageRule {
    prior: MixturePrior,
    sigma: f64,
    config: QuadratureConfig,
    nodes: Nodes,
}

impl ShrinkageRule {
    pub fn new(prior: MixturePrior, sigma: f64) -> Result<Self> {
        Self::with_config(prior, sigma, QuadratureConfig::default())
    }

    pub fn with_config(prior: MixturePrior, sigma: f64, config: QuadratureConfig) -> Result<Self> {
        let sigma = positive("sigma", sigma)?;
        config.validate()?;
        let g = *prior.continuous();
        let nodes = match g {
            AsymmetricPrior::SkewNormal { tau, gamma } => skew_normal_nodes(tau, gamma, sigma, config.hermite_nodes),
            _ => bounded_nodes(&g, sigma, config.legendre_nodes),
        };
        Ok(Self {
            prior,
            sigma,
            config,
            nodes,
        })
    }

    pub fn prior(&self) -> &MixturePrior {
        &self.prior
    }

    pub fn config(&self) -> QuadratureConfig {
        self.config
    }

    pub fn node_count(&self) -> usize {
        match &self.nodes {
            Nodes::Theta { theta, .. } => theta.len(),
            Nodes::Shifted { u, .. } => u.len(),
        }
    }

    /// `E(theta | d)`.
    pub fn shrink(&self, d: f64) -> Result<f64> {
        if !d.is_finite() {
            return Err(self.quadrature_error(d));
        }
        let alpha = self.prior.alpha();
        let s = self.sigma;
        let ln_point = alpha.ln() + norm_ln_pdf(d / s) - s.ln();
        let ln_slab = (1.0 - alpha).ln();

        // Two passes: find the largest exponent, then accumulate.
        let (num, den) = match &self.nodes {
            Nodes::Theta { theta, ln_weight } => {
                let ln_norm = s.ln() + LN_SQRT_2PI;
                let inv2s2 = 0.5 / (s * s);
                let exponent = |t: f64, lw: f64| ln_slab + lw - (d - t) * (d - t) * inv2s2 - ln_norm;
                let max = theta
                    .iter()
                    .zip(ln_weight)
                    .map(|(&t, &lw)| exponent(t, lw))
                    .fold(ln_point, f64::max);
                let mut num = 0.0;
                let mut den = (ln_point - max).exp();
                for (&t, &lw) in theta.iter().zip(ln_weight) {
                    let e = (exponent(t, lw) - max).exp();
                    num += e * t;
                    den += e;
                }
                (num, den)
            }
            Nodes::Shifted { u, ln_weight } => {
                let g = self.prior.continuous();
                let mut terms = Vec::with_capacity(u.len());
                let mut max = ln_point;
                for (&uk, &lw) in u.iter().zip(ln_weight) {
                    let t = s * uk + d;
                    let e = ln_slab + lw + g.ln_pdf(t);
                    max = max.max(e);
                    terms.push((t, e));
                }
                let mut num = 0.0;
                let mut den = (ln_point - max).exp();
                for (t, e) in terms {
                    let w = (e - max).exp();
                    num += w * t;
                    den += w;
                }
                (num, den)
            }
        };
        let value = num / den;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(self.quadrature_error(d))
        }
    }

    /// Applies the rule to every coefficient; evaluation order does not
    /// affect the result.
    pub fn shrink_all(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        coefficients.par_iter().map(|&d| self.shrink(d)).collect()
    }

    fn quadrature_error(&self, d: f64) -> ShrinkError {
        ShrinkError::Quadrature {
            prior: self.prior.to_string(),
            sigma: self.sigma,
            d,
        }
    }
}

impl CoefficientRule for ShrinkageRule {
    fn estimate(&self, d: f64) -> Result<f64> {
        self.shrink(d)
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Upper bound on panels per piece; only reached when the noise is tiny
/// next to the support.
const MAX_PANELS: usize = 2048;

/// Nodes for a bounded prior: composite Gauss-Legendre on each smooth piece
/// of the support, with panels no wider than three noise standard deviations
/// so the likelihood bump is always resolved.
fn bounded_nodes(g: &AsymmetricPrior, sigma: f64, budget: usize) -> Nodes {
    let (lo, hi) = g.support().expect("bounded prior");
    let pieces: Vec<(f64, f64)> = match g.kink() {
        Some(k) => vec![(lo, k), (k, hi)],
        None => vec![(lo, hi)],
    };
    let total = hi - lo;
    let mut theta = Vec::new();
    let mut ln_weight = Vec::new();
    for (a, b) in pieces {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let share = ((budget as f64) * len / total).ceil() as usize;
        let panels = (len / (3.0 * sigma)).ceil().clamp(1.0, MAX_PANELS as f64) as usize;
        let per_panel = share.div_ceil(panels).max(16);
        let rule = numeric::composite_legendre(a, b, panels, per_panel);
        for (t, w) in rule.iter() {
            let lg = g.ln_pdf(t);
            if lg.is_finite() {
                theta.push(t);
                ln_weight.push(w.ln() + lg);
            }
        }
    }
    Nodes::Theta { theta, ln_weight }
}

/// Nodes for the skew normal. When the noise is narrower than the prior the
/// Gaussian weight is put on the likelihood (`theta = d + sigma u`);
/// otherwise on the prior's own normal kernel (`theta = tau v`).
fn skew_normal_nodes(tau: f64, gamma: f64, sigma: f64, n: usize) -> Nodes {
    let rule = numeric::hermite_cached(n);
    if sigma <= tau {
        // int h(theta) g(theta) phi_s(d - theta) dtheta = E_U[h(d + sigma U) g(d + sigma U)]
        Nodes::Shifted {
            u: rule.nodes.clone(),
            ln_weight: rule.weights.iter().map(|w| w.ln()).collect(),
        }
    } else {
        // g(theta) dtheta = 2 phi(v) Phi(gamma v) dv with theta = tau v
        let mut theta = Vec::with_capacity(n);
        let mut ln_weight = Vec::with_capacity(n);
        for (v, w) in rule.iter() {
            theta.push(tau * v);
            ln_weight.push(w.ln() + std::f64::consts::LN_2 + numeric::norm_ln_cdf(gamma * v));
        }
        Nodes::Theta { theta, ln_weight }
    }
}

/// `alpha(j) = 1 - 1 / (j - j0 + 1)^beta`, defined for levels above `j0`.
pub fn alpha_policy(j: usize, j0: usize, beta_exponent: f64) -> Result<f64> {
    let beta_exponent = positive("beta_exponent", beta_exponent)?;
    if j <= j0 {
        return Err(ShrinkError::LevelNotAbovePrimary { level: j, j0 });
    }
    Ok(1.0 - ((j - j0 + 1) as f64).powf(-beta_exponent))
}

/// `m(j) = max_k |d_jk|`.
pub fn m_policy(level_coeffs: &[f64]) -> Result<f64> {
    if level_coeffs.is_empty() {
        return Err(ShrinkError::Empty);
    }
    Ok(level_coeffs.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}

/// Robust noise estimate `median |d_{J-1,k}| / 0.6745` from the finest
/// detail level.
pub fn estimate_sigma(finest_details: &[f64]) -> Result<f64> {
    let abs: Vec<f64> = finest_details.iter().map(|v| v.abs()).collect();
    let med = median(&abs).ok_or(ShrinkError::Empty)?;
    if med > 0.0 {
        Ok(med / MAD_CONSTANT)
    } else {
        Err(ShrinkError::ZeroSigma)
    }
}

/// Where the noise level comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSource {
    Estimated,
    Fixed(f64),
}

/// Where the half-support of a bounded prior comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfSupport {
    /// `m(j) = max_k |d_jk|` per level.
    LevelMax,
    Fixed(f64),
}

/// Hyperparameter policies applied level by level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub beta_exponent: f64,
    pub j0: usize,
    pub sigma_source: SigmaSource,
    pub half_support: HalfSupport,
    pub quadrature: QuadratureConfig,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            beta_exponent: 2.0,
            j0: 3,
            sigma_source: SigmaSource::Estimated,
            half_support: HalfSupport::LevelMax,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl PolicyConfig {
    pub fn with_j0(mut self, j0: usize) -> Self {
        self.j0 = j0;
        self
    }
}

/// Hyperparameters actually used at one detail level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPolicy {
    pub level: usize,
    /// `None` when the level was left untouched.
    pub alpha: Option<f64>,
    pub m: Option<f64>,
    pub shrunk: bool,
}

/// Result of [`shrink_decomposition`] and [`denoise_detailed`].
#[derive(Debug, Clone)]
pub struct Denoised {
    pub estimate: Signal,
    pub coefficients: WaveletDecomposition,
    pub sigma: f64,
    pub levels: Vec<LevelPolicy>,
}

/// Shrinks the detail levels above `policy.j0` of an existing decomposition.
/// Scaling coefficients and the detail level at `j0` pass through. A level
/// whose coefficients are all zero is left as is.
pub fn shrink_decomposition(
    decomp: &WaveletDecomposition,
    family: &AsymmetricPrior,
    policy: &PolicyConfig,
) -> Result<(WaveletDecomposition, f64, Vec<LevelPolicy>)> {
    family.validate()?;
    if policy.j0 < decomp.j0() || policy.j0 >= decomp.levels() {
        return Err(ShrinkError::InvalidLevel {
            j0: policy.j0,
            levels: decomp.levels(),
        });
    }
    let sigma = match policy.sigma_source {
        SigmaSource::Estimated => estimate_sigma(decomp.finest())?,
        SigmaSource::Fixed(s) => positive("sigma", s)?,
    };
    let mut out = decomp.clone();
    let mut report = Vec::new();
    for (j, coeffs) in out.details_mut() {
        if j <= policy.j0 {
            report.push(LevelPolicy {
                level: j,
                alpha: None,
                m: None,
                shrunk: false,
            });
            continue;
        }
        let alpha = alpha_policy(j, policy.j0, policy.beta_exponent)?;
        let m = match policy.half_support {
            HalfSupport::LevelMax => m_policy(coeffs)?,
            HalfSupport::Fixed(m) => positive("m", m)?,
        };
        if m == 0.0 {
            report.push(LevelPolicy {
                level: j,
                alpha: Some(alpha),
                m: Some(0.0),
                shrunk: false,
            });
            continue;
        }
        let g = family.with_half_support(m)?;
        let rule = ShrinkageRule::with_config(MixturePrior::new(alpha, g)?, sigma, policy.quadrature)?;
        let shrunk = rule.shrink_all(coeffs)?;
        *coeffs = shrunk;
        report.push(LevelPolicy {
            level: j,
            alpha: Some(alpha),
            m: family.half_support().map(|_| m),
            shrunk: true,
        });
    }
    Ok((out, sigma, report))
}

/// Full pipeline: transform, shrink each detail level with its own
/// `(alpha(j), m(j))`, transform back.
pub fn denoise_detailed(
    signal: &Signal,
    basis: &WaveletBasis,
    family: &AsymmetricPrior,
    policy: &PolicyConfig,
) -> Result<Denoised> {
    let decomp = dwt(signal, basis, policy.j0)?;
    let (coefficients, sigma, levels) = shrink_decomposition(&decomp, family, policy)?;
    let estimate = idwt(&coefficients)?;
    Ok(Denoised {
        estimate,
        coefficients,
        sigma,
        levels,
    })
}

pub fn denoise(
    signal: &Signal,
    basis: &WaveletBasis,
    family: &AsymmetricPrior,
    policy: &PolicyConfig,
) -> Result<Signal> {
    denoise_detailed(signal, basis, family, policy).map(|d| d.estimate)
}
