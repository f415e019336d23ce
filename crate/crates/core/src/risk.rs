//! Frequentist and Bayes risk of coefficient rules under squared-error loss.
//!
//! For a true coefficient `theta`, the empirical coefficient is
//! `d ~ N(theta, sigma^2)`; expectations over `d` use Gauss-Hermite
//! quadrature. The Bayes risk integrates the frequentist risk against an
//! evaluation prior, which need not be the prior the rule was built from.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, ShrinkError};
use crate::numeric::{self, norm_ln_cdf};
use crate::priors::{AsymmetricPrior, MixturePrior};
use crate::shrinkage::CoefficientRule;

/// Node counts for the risk integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiskConfig {
    /// Gauss-Hermite nodes for the expectation over `d`.
    pub outer_nodes: usize,
    /// Gauss-Legendre nodes across a bounded evaluation prior.
    pub prior_legendre_nodes: usize,
    /// Gauss-Hermite nodes for a skew-normal evaluation prior.
    pub prior_hermite_nodes: usize,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self {
            outer_nodes: 96,
            prior_legendre_nodes: 128,
            prior_hermite_nodes: 128,
        }
    }
}

/// Sampling moments of `delta(d)` at one `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskPoint {
    pub theta: f64,
    /// `delta(theta)`, the rule evaluated at `d = theta`.
    pub delta: f64,
    pub squared_bias: f64,
    pub variance: f64,
    pub risk: f64,
}

pub fn risk_point<R: CoefficientRule + ?Sized>(rule: &R, theta: f64, config: &RiskConfig) -> Result<RiskPoint> {
    if !theta.is_finite() {
        return Err(ShrinkError::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "must be finite",
        });
    }
    let gh = numeric::hermite_cached(config.outer_nodes);
    let sigma = rule.sigma();
    let values = gh
        .nodes
        .iter()
        .map(|&z| rule.estimate(theta + sigma * z))
        .collect::<Result<Vec<f64>>>()?;
    let mean: f64 = values.iter().zip(&gh.weights).map(|(v, w)| w * v).sum();
    let variance: f64 = values
        .iter()
        .zip(&gh.weights)
        .map(|(v, w)| w * (v - mean).powi(2))
        .sum();
    let risk: f64 = values
        .iter()
        .zip(&gh.weights)
        .map(|(v, w)| w * (v - theta).powi(2))
        .sum();
    Ok(RiskPoint {
        theta,
        delta: rule.estimate(theta)?,
        squared_bias: (mean - theta).powi(2),
        variance,
        risk,
    })
}

/// `(E[delta(d)] - theta)^2`.
pub fn squared_bias<R: CoefficientRule + ?Sized>(rule: &R, theta: f64) -> Result<f64> {
    risk_point(rule, theta, &RiskConfig::default()).map(|p| p.squared_bias)
}

/// `Var[delta(d)]`.
pub fn variance<R: CoefficientRule + ?Sized>(rule: &R, theta: f64) -> Result<f64> {
    risk_point(rule, theta, &RiskConfig::default()).map(|p| p.variance)
}

/// `E[(delta(d) - theta)^2]`.
pub fn frequentist_risk<R: CoefficientRule + ?Sized>(rule: &R, theta: f64) -> Result<f64> {
    risk_point(rule, theta, &RiskConfig::default()).map(|p| p.risk)
}

/// Bias, variance and risk on a grid of `theta` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskGrid {
    pub theta_grid: Vec<f64>,
    pub delta: Vec<f64>,
    pub squared_bias: Vec<f64>,
    pub variance: Vec<f64>,
    pub risk: Vec<f64>,
}

impl RiskGrid {
    pub fn len(&self) -> usize {
        self.theta_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_grid.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = RiskPoint> + '_ {
        (0..self.len()).map(|i| RiskPoint {
            theta: self.theta_grid[i],
            delta: self.delta[i],
            squared_bias: self.squared_bias[i],
            variance: self.variance[i],
            risk: self.risk[i],
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serialises")
    }

    /// CSV with header `theta,delta,squared_bias,variance,risk`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "theta,delta,squared_bias,variance,risk")?;
        for p in self.points() {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.theta, p.delta, p.squared_bias, p.variance, p.risk
            )?;
        }
        Ok(())
    }
}

/// Evaluates every grid point (in parallel, collected in grid order).
pub fn risk_grid<R: CoefficientRule + ?Sized>(rule: &R, thetas: &[f64], config: &RiskConfig) -> Result<RiskGrid> {
    let points = thetas
        .par_iter()
        .map(|&t| risk_point(rule, t, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(RiskGrid {
        theta_grid: points.iter().map(|p| p.theta).collect(),
        delta: points.iter().map(|p| p.delta).collect(),
        squared_bias: points.iter().map(|p| p.squared_bias).collect(),
        variance: points.iter().map(|p| p.variance).collect(),
        risk: points.iter().map(|p| p.risk).collect(),
    })
}

/// `n` evenly spaced points on `[lo, hi]`; a single point sits at `lo`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Nodes `theta_k` and weights such that `sum w_k h(theta_k) ~ int h g`.
pub fn prior_nodes(g: &AsymmetricPrior, config: &RiskConfig) -> Vec<(f64, f64)> {
    match *g {
        AsymmetricPrior::SkewNormal { tau, gamma } => numeric::hermite_cached(config.prior_hermite_nodes)
            .iter()
            .map(|(v, w)| (tau * v, 2.0 * w * norm_ln_cdf(gamma * v).exp()))
            .collect(),
        _ => {
            let (lo, hi) = g.support().expect("bounded prior");
            let pieces = match g.kink() {
                Some(k) => vec![(lo, k), (k, hi)],
                None => vec![(lo, hi)],
            };
            let panels = 4;
            let per_panel = config.prior_legendre_nodes.div_ceil(panels * pieces.len()).max(8);
            pieces
                .into_iter()
                .flat_map(|(a, b)| {
                    numeric::composite_legendre(a, b, panels, per_panel)
                        .iter()
                        .map(|(t, w)| (t, w * g.pdf(t)))
                        .collect::<Vec<_>>()
                })
                .collect()
        }
    }
}

/// Bayes risk `alpha R(delta, 0) + (1 - alpha) int R(delta, theta) g(theta) dtheta`
/// of `rule` under the evaluation prior `prior`.
pub fn bayes_risk<R: CoefficientRule + ?Sized>(rule: &R, prior: &MixturePrior) -> Result<f64> {
    bayes_risk_with(rule, prior, &RiskConfig::default())
}

pub fn bayes_risk_with<R: CoefficientRule + ?Sized>(
    rule: &R,
    prior: &MixturePrior,
    config: &RiskConfig,
) -> Result<f64> {
    let at_zero = risk_point(rule, 0.0, config)?.risk;
    let nodes = prior_nodes(prior.continuous(), config);
    let risks = nodes
        .par_iter()
        .map(|&(t, w)| risk_point(rule, t, config).map(|p| w * p.risk))
        .collect::<Result<Vec<f64>>>()?;
    let slab: f64 = risks.iter().sum();
    Ok(prior.alpha() * at_zero + (1.0 - prior.alpha()) * slab)
}
