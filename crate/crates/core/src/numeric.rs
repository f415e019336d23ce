//! Standard-normal helpers and Gaussian quadrature rules.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use statrs::function::erf::erfc;

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

pub fn norm_ln_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `ln Phi(x)`, accurate deep into the lower tail where `Phi` underflows.
pub fn norm_ln_cdf(x: f64) -> f64 {
    if x > -30.0 {
        if x > 5.0 {
            // ln(1 - q) with q tiny
            (-0.5 * erfc(x / SQRT_2)).ln_1p()
        } else {
            norm_cdf(x).ln()
        }
    } else {
        // Mills-ratio asymptotic series; the first omitted term is < 2e-12.
        let z = 1.0 / (x * x);
        let series = 1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)));
        norm_ln_pdf(x) - (-x).ln() + series.ln()
    }
}

/// Nodes and weights of an n-point Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss-Legendre rule on `[-1, 1]`, computed by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    QuadratureRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // p1 = P_n(x), p0 = P_{n-1}(x)
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Hermite rule for expectations under the standard normal: the
/// weights sum to one and `sum w_k f(x_k) ~ E f(Z)`, `Z ~ N(0, 1)`.
pub fn gauss_hermite_normal(n: usize) -> QuadratureRule {
    assert!(n >= 1, "Gauss-Hermite needs at least one node");
    // Physicists' rule with orthonormal recurrence, then x -> sqrt(2) x.
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (p, d) = hermite_orthonormal(n, z, pim4);
            pp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = hermite_orthonormal(n, z, pim4);
        if d != 0.0 {
            pp = d;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        let w = 2.0 / (pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let scale = 1.0 / PI.sqrt();
    let mut rule = QuadratureRule {
        nodes: nodes.iter().rev().map(|x| x * SQRT_2).collect(),
        weights: weights.iter().rev().map(|w| w * scale).collect(),
    };
    // Remove the residual rounding so the weights are an exact partition of unity.
    let total: f64 = rule.weights.iter().sum();
    rule.weights.iter_mut().for_each(|w| *w /= total);
    rule
}

fn hermite_orthonormal(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Cached Gauss-Legendre rule; the library only uses a handful of sizes.
pub(crate) fn legendre_cached(n: usize) -> &'static QuadratureRule {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(usize, &'static QuadratureRule)>>> = OnceLock::new();
    cached(CACHE.get_or_init(Default::default), n, gauss_legendre)
}

pub(crate) fn hermite_cached(n: usize) -> &'static QuadratureRule {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(usize, &'static QuadratureRule)>>> = OnceLock::new();
    cached(CACHE.get_or_init(Default::default), n, gauss_hermite_normal)
}

fn cached(
    cache: &std::sync::Mutex<Vec<(usize, &'static QuadratureRule)>>,
    n: usize,
    build: fn(usize) -> QuadratureRule,
) -> &'static QuadratureRule {
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((_, rule)) = guard.iter().find(|(k, _)| *k == n) {
        return rule;
    }
    let rule: &'static QuadratureRule = Box::leak(Box::new(build(n)));
    guard.push((n, rule));
    rule
}

/// Composite Gauss-Legendre nodes on `[lo, hi]` split into `panels` equal
/// panels of `per_panel` nodes each.
pub(crate) fn composite_legendre(lo: f64, hi: f64, panels: usize, per_panel: usize) -> QuadratureRule {
    let base = legendre_cached(per_panel);
    let width = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let a = lo + width * p as f64;
        let half = 0.5 * width;
        let mid = a + half;
        for (x, w) in base.iter() {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    QuadratureRule { nodes, weights }
}

/// Median of a slice (mean of the central pair for even lengths).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Sample standard deviation (divisor `n - 1`).
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (n as f64 - 1.0)).sqrt()
}
