//! Asymmetric prior densities for wavelet coefficients and the point-mass
//! mixture built on top of them.
//!
//! Three members of the family are supported on `(-m, m)` (beta,
//! Kumaraswamy, triangular); the skew normal lives on the whole real line.
//! Symmetric settings (`a = b` for the beta, mode `0` for the triangular) are
//! accepted: they are valid densities and give the symmetric baselines.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{positive, Result, ShrinkError};
use crate::numeric::{self, norm_cdf, norm_ln_cdf, norm_ln_pdf};

/// Continuous component `g` of the mixture prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AsymmetricPrior {
    /// Beta(a, b) rescaled from `(0, 1)` to `(-m, m)`.
    Beta { a: f64, b: f64, m: f64 },
    /// Kumaraswamy(a, b) rescaled from `(0, 1)` to `(-m, m)`.
    Kumaraswamy { a: f64, b: f64, m: f64 },
    /// Triangular on `(-m, m)` with its mode at `mode`.
    Triangular { mode: f64, m: f64 },
    /// Skew normal with scale `tau` and skewness `gamma`.
    SkewNormal { tau: f64, gamma: f64 },
}

impl AsymmetricPrior {
    pub fn beta(a: f64, b: f64, m: f64) -> Result<Self> {
        Ok(Self::Beta {
            a: positive("a", a)?,
            b: positive("b", b)?,
            m: positive("m", m)?,
        })
    }

    pub fn kumaraswamy(a: f64, b: f64, m: f64) -> Result<Self> {
        Ok(Self::Kumaraswamy {
            a: positive("a", a)?,
            b: positive("b", b)?,
            m: positive("m", m)?,
        })
    }

    pub fn triangular(mode: f64, m: f64) -> Result<Self> {
        let m = positive("m", m)?;
        if !(mode.is_finite() && mode > -m && mode < m) {
            return Err(ShrinkError::InvalidParameter {
                name: "mode",
                value: mode,
                reason: "must lie strictly inside (-m, m)",
            });
        }
        Ok(Self::Triangular { mode, m })
    }

    pub fn skew_normal(tau: f64, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(ShrinkError::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be finite",
            });
        }
        Ok(Self::SkewNormal {
            tau: positive("tau", tau)?,
            gamma,
        })
    }

    /// Re-checks the parameter constraints (useful after deserialisation).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Beta { a, b, m } => Self::beta(a, b, m).map(drop),
            Self::Kumaraswamy { a, b, m } => Self::kumaraswamy(a, b, m).map(drop),
            Self::Triangular { mode, m } => Self::triangular(mode, m).map(drop),
            Self::SkewNormal { tau, gamma } => Self::skew_normal(tau, gamma).map(drop),
        }
    }

    /// Open support interval, `None` for the skew normal.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.half_support().map(|m| (-m, m))
    }

    pub fn half_support(&self) -> Option<f64> {
        match *self {
            Self::Beta { m, .. } | Self::Kumaraswamy { m, .. } | Self::Triangular { m, .. } => Some(m),
            Self::SkewNormal { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.half_support().is_some()
    }

    /// Interior point where the density is not smooth.
    pub fn kink(&self) -> Option<f64> {
        match *self {
            Self::Triangular { mode, .. } => Some(mode),
            _ => None,
        }
    }

    /// Same shape with a new half-support `m`. The skew normal is returned
    /// unchanged. A triangular mode that falls outside the new support is
    /// pulled just inside it, so the density degenerates towards a ramp.
    pub fn with_half_support(&self, m: f64) -> Result<Self> {
        let m = positive("m", m)?;
        match *self {
            Self::Beta { a, b, .. } => Self::beta(a, b, m),
            Self::Kumaraswamy { a, b, .. } => Self::kumaraswamy(a, b, m),
            Self::Triangular { mode, .. } => {
                let limit = m * (1.0 - 1e-9);
                Self::triangular(mode.clamp(-limit, limit), m)
            }
            s @ Self::SkewNormal { .. } => Ok(s),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Beta { .. } => "beta",
            Self::Kumaraswamy { .. } => "kumaraswamy",
            Self::Triangular { .. } => "triangular",
            Self::SkewNormal { .. } => "skew_normal",
        }
    }

    /// Natural log of the density; `-inf` outside the support.
    pub fn ln_pdf(&self, theta: f64) -> f64 {
        match *self {
            Self::Beta { a, b, m } => {
                if theta <= -m || theta >= m {
                    return f64::NEG_INFINITY;
                }
                let x = (theta + m) / (2.0 * m);
                (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta(a, b) - (2.0 * m).ln()
            }
            Self::Kumaraswamy { a, b, m } => {
                if theta <= -m || theta >= m {
                    return f64::NEG_INFINITY;
                }
                let x = (theta + m) / (2.0 * m);
                let xa = x.powf(a);
                a.ln() + b.ln() + (a - 1.0) * x.ln() + (b - 1.0) * (-xa).ln_1p() - (2.0 * m).ln()
            }
            Self::Triangular { .. } => {
                let p = self.pdf(theta);
                if p > 0.0 {
                    p.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::SkewNormal { tau, gamma } => {
                let z = theta / tau;
                std::f64::consts::LN_2 - tau.ln() + norm_ln_pdf(z) + norm_ln_cdf(gamma * z)
            }
        }
    }

    /// Density; exactly zero outside the support of the bounded members.
    pub fn pdf(&self, theta: f64) -> f64 {
        match *self {
            Self::Triangular { mode, m } => {
                if theta <= -m || theta >= m {
                    0.0
                } else if theta <= mode {
                    (theta + m) / (m * (m + mode))
                } else {
                    (m - theta) / (m * (m - mode))
                }
            }
            _ => self.ln_pdf(theta).exp(),
        }
    }

    /// Distribution function.
    pub fn cdf(&self, theta: f64) -> f64 {
        match *self {
            Self::Beta { a, b, m } => {
                if theta <= -m {
                    0.0
                } else if theta >= m {
                    1.0
                } else {
                    beta_reg(a, b, (theta + m) / (2.0 * m))
                }
            }
            Self::Kumaraswamy { a, b, m } => {
                if theta <= -m {
                    0.0
                } else if theta >= m {
                    1.0
                } else {
                    let x = (theta + m) / (2.0 * m);
                    -(b * (-x.powf(a)).ln_1p()).exp_m1()
                }
            }
            Self::Triangular { mode, m } => {
                if theta <= -m {
                    0.0
                } else if theta >= m {
                    1.0
                } else if theta <= mode {
                    (theta + m).powi(2) / (2.0 * m * (m + mode))
                } else {
                    1.0 - (m - theta).powi(2) / (2.0 * m * (m - mode))
                }
            }
            Self::SkewNormal { tau, gamma } => {
                let h = theta / tau;
                (norm_cdf(h) - 2.0 * owens_t(h, gamma)).clamp(0.0, 1.0)
            }
        }
    }

    /// Mean of the distribution.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Beta { a, b, m } => m * (2.0 * a / (a + b) - 1.0),
            Self::Kumaraswamy { a, b, m } => {
                // E[X] = b B(1 + 1/a, b)
                let ex = b * ln_beta(1.0 + 1.0 / a, b).exp();
                m * (2.0 * ex - 1.0)
            }
            Self::Triangular { mode, .. } => mode / 3.0,
            Self::SkewNormal { tau, gamma } => {
                let delta = gamma / (1.0 + gamma * gamma).sqrt();
                tau * delta * (2.0 / std::f64::consts::PI).sqrt()
            }
        }
    }

    /// One draw from the distribution; bounded members never return a value
    /// on or outside `(-m, m)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Beta { a, b, m } => {
                let ga = Gamma::new(a, 1.0).expect("validated shape");
                let gb = Gamma::new(b, 1.0).expect("validated shape");
                loop {
                    let x: f64 = ga.sample(rng);
                    let y: f64 = gb.sample(rng);
                    let u = x / (x + y);
                    if u > 0.0 && u < 1.0 {
                        let theta = m * (2.0 * u - 1.0);
                        if theta.abs() < m {
                            return theta;
                        }
                    }
                }
            }
            Self::Kumaraswamy { a, b, m } => loop {
                let u: f64 = rng.random();
                // 1 - (1-u)^(1/b), computed without cancellation
                let v = -((-u).ln_1p() / b).exp_m1();
                let x = v.powf(1.0 / a);
                if x > 0.0 && x < 1.0 {
                    let theta = m * (2.0 * x - 1.0);
                    if theta.abs() < m {
                        return theta;
                    }
                }
            },
            Self::Triangular { mode, m } => loop {
                let u: f64 = rng.random();
                let split = (mode + m) / (2.0 * m);
                let theta = if u < split {
                    -m + (u * 2.0 * m * (m + mode)).sqrt()
                } else {
                    m - ((1.0 - u) * 2.0 * m * (m - mode)).sqrt()
                };
                if theta.abs() < m {
                    return theta;
                }
            },
            Self::SkewNormal { tau, gamma } => {
                let delta = gamma / (1.0 + gamma * gamma).sqrt();
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                tau * (delta * z1.abs() + (1.0 - delta * delta).sqrt() * z2)
            }
        }
    }
}

impl fmt::Display for AsymmetricPrior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Beta { a, b, m } => write!(f, "beta(a={a}, b={b}, m={m})"),
            Self::Kumaraswamy { a, b, m } => write!(f, "kumaraswamy(a={a}, b={b}, m={m})"),
            Self::Triangular { mode, m } => write!(f, "triangular(a={mode}, m={m})"),
            Self::SkewNormal { tau, gamma } => write!(f, "skew_normal(tau={tau}, gamma={gamma})"),
        }
    }
}

/// Owen's T function `T(h, a) = 1/(2 pi) int_0^a exp(-h^2 (1+x^2)/2) / (1+x^2) dx`.
pub(crate) fn owens_t(h: f64, a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if a < 0.0 {
        return -owens_t(h, -a);
    }
    // Substitute x = tan(t): integrand exp(-h^2 / (2 cos^2 t)) on [0, atan a].
    let upper = a.atan();
    let rule = numeric::composite_legendre(0.0, upper, 8, 32);
    let s: f64 = rule
        .iter()
        .map(|(t, w)| {
            let c = t.cos();
            w * (-0.5 * h * h / (c * c)).exp()
        })
        .sum();
    s / (2.0 * std::f64::consts::PI)
}

/// Point mass at zero with weight `alpha` mixed with a continuous prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixturePrior {
    alpha: f64,
    continuous: AsymmetricPrior,
}

impl MixturePrior {
    pub fn new(alpha: f64, continuous: AsymmetricPrior) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ShrinkError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "mixture weight must lie strictly inside (0, 1)",
            });
        }
        continuous.validate()?;
        Ok(Self { alpha, continuous })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn continuous(&self) -> &AsymmetricPrior {
        &self.continuous
    }

    /// Exactly `0.0` with probability `alpha`, otherwise a draw from `g`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        if u < self.alpha {
            0.0
        } else {
            self.continuous.sample(rng)
        }
    }
}

impl fmt::Display for MixturePrior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} delta0 + {} {}", self.alpha, 1.0 - self.alpha, self.continuous)
    }
}
