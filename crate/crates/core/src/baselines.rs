//! Soft thresholding with SURE and two-fold cross-validated thresholds.

use serde::{Deserialize, Serialize};

use crate::error::{positive, Result, ShrinkError};
use crate::shrinkage::estimate_sigma;
use crate::wavelet::{dwt, idwt, Signal, WaveletBasis, WaveletDecomposition};

/// `sign(d) max(|d| - lambda, 0)`.
pub fn soft(d: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(soft_unchecked(d, lambda))
}

fn soft_unchecked(d: f64, lambda: f64) -> f64 {
    let mag = d.abs() - lambda;
    if mag > 0.0 {
        mag.copysign(d)
    } else {
        0.0
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(ShrinkError::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "threshold must be finite and nonnegative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    Fixed(f64),
    Sure,
    CrossValidation,
}

/// How to choose the soft threshold. `per_level` only changes SURE: one
/// threshold per detail level instead of one pooled over all of them.
/// Cross-validation always yields a single threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy {
    pub kind: ThresholdKind,
    pub per_level: bool,
}

impl ThresholdPolicy {
    pub fn fixed(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self {
            kind: ThresholdKind::Fixed(lambda),
            per_level: false,
        })
    }

    pub fn sure() -> Self {
        Self {
            kind: ThresholdKind::Sure,
            per_level: true,
        }
    }

    pub fn cross_validation() -> Self {
        Self {
            kind: ThresholdKind::CrossValidation,
            per_level: false,
        }
    }
}

/// Stein's unbiased estimate of the risk of soft thresholding at `lambda`.
pub fn sure_risk(coeffs: &[f64], sigma: f64, lambda: f64) -> f64 {
    let s2 = sigma * sigma;
    let l2 = lambda * lambda;
    coeffs.len() as f64 * s2
        + coeffs
            .iter()
            .map(|d| if d.abs() <= lambda { d * d - 2.0 * s2 } else { l2 })
            .sum::<f64>()
}

/// Minimiser of [`sure_risk`] over `{0} ∪ {|d_i|}`; ties go to the smallest
/// threshold.
pub fn sure_threshold(coeffs: &[f64], sigma: f64) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(ShrinkError::Empty);
    }
    let sigma = positive("sigma", sigma)?;
    if let Some(i) = coeffs.iter().position(|v| !v.is_finite()) {
        return Err(ShrinkError::NonFinite(i));
    }
    let s2 = sigma * sigma;
    let mut abs: Vec<f64> = coeffs.iter().map(|d| d.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len();

    // SURE(lambda) = n s2 + sum_{|d| <= lambda} (d^2 - 2 s2) + #{|d| > lambda} lambda^2
    let mut best_lambda = 0.0;
    let mut prefix = 0.0;
    let mut i = 0;
    while i < n && abs[i] == 0.0 {
        prefix -= 2.0 * s2;
        i += 1;
    }
    let mut best = n as f64 * s2 + prefix;
    // improvements below rounding noise count as ties
    let slack = 1e-12 * (n as f64 * s2 + abs.iter().map(|v| v * v).sum::<f64>());
    while i < n {
        let lambda = abs[i];
        while i < n && abs[i] == lambda {
            prefix += abs[i] * abs[i] - 2.0 * s2;
            i += 1;
        }
        let value = n as f64 * s2 + prefix + (n - i) as f64 * lambda * lambda;
        if value < best - slack {
            best = value;
            best_lambda = lambda;
        }
    }
    Ok(best_lambda)
}

fn threshold_levels(decomp: &mut WaveletDecomposition, lambdas: &[f64]) {
    for ((_, coeffs), &lambda) in decomp.details_mut().zip(lambdas) {
        coeffs.iter_mut().for_each(|d| *d = soft_unchecked(*d, lambda));
    }
}

fn soft_denoise(signal: &Signal, basis: &WaveletBasis, j0: usize, lambda: f64) -> Result<Vec<f64>> {
    let mut decomp = dwt(signal, basis, j0)?;
    let count = decomp.levels() - j0;
    threshold_levels(&mut decomp, &vec![lambda; count]);
    Ok(idwt(&decomp)?.into_vec())
}

/// Two-fold cross-validation of a single soft threshold.
///
/// The even- and odd-indexed halves are each thresholded at `lambda`; each
/// fit is interpolated onto the other half's positions by averaging
/// neighbours (periodically) and scored against it. The threshold
/// minimising the total squared prediction error is found by golden-section
/// search on `[0, max |d|]`, then rescaled by `(1 - ln 2 / ln n)^(-1/2)` to
/// carry it from half to full sample size.
pub fn cv_threshold(signal: &Signal, basis: &WaveletBasis, j0: usize) -> Result<f64> {
    let n = signal.len();
    if n < 8 {
        return Err(ShrinkError::TooShort);
    }
    let levels = signal.levels();
    if j0 >= levels - 1 {
        return Err(ShrinkError::InvalidLevel { j0, levels: levels - 1 });
    }
    let y = signal.as_slice();
    let even = Signal::new(y.iter().step_by(2).copied().collect())?;
    let odd = Signal::new(y.iter().skip(1).step_by(2).copied().collect())?;
    let half = n / 2;

    let upper = [&even, &odd]
        .iter()
        .map(|s| {
            dwt(s, basis, j0).map(|d| {
                d.details()
                    .flat_map(|(_, c)| c.iter())
                    .fold(0.0f64, |acc, v| acc.max(v.abs()))
            })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let score = |lambda: f64| -> Result<f64> {
        let fe = soft_denoise(&even, basis, j0, lambda)?;
        let fo = soft_denoise(&odd, basis, j0, lambda)?;
        let mut total = 0.0;
        for i in 0..half {
            // odd position 2i+1 lies between even positions 2i and 2i+2
            let pred_odd = 0.5 * (fe[i] + fe[(i + 1) % half]);
            // even position 2i lies between odd positions 2i-1 and 2i+1
            let pred_even = 0.5 * (fo[(i + half - 1) % half] + fo[i]);
            total += (pred_odd - odd.as_slice()[i]).powi(2) + (pred_even - even.as_slice()[i]).powi(2);
        }
        Ok(total)
    };

    let lambda = golden_section(score, 0.0, upper, 1e-8 * upper.max(1e-300))?;
    let nf = n as f64;
    Ok(lambda / (1.0 - std::f64::consts::LN_2 / nf.ln()).sqrt())
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { c } else { d })
}

/// Output of [`threshold_denoise_detailed`].
#[derive(Debug, Clone)]
pub struct Thresholded {
    pub estimate: Signal,
    /// Threshold used at each detail level `j0..J-1`.
    pub thresholds: Vec<f64>,
    /// Noise estimate, when the policy needed one.
    pub sigma: Option<f64>,
}

/// Soft-thresholds every detail level from `j0` up; scaling coefficients
/// pass through.
pub fn threshold_denoise_detailed(
    signal: &Signal,
    basis: &WaveletBasis,
    j0: usize,
    policy: &ThresholdPolicy,
) -> Result<Thresholded> {
    let mut decomp = dwt(signal, basis, j0)?;
    let count = decomp.levels() - j0;
    let (thresholds, sigma) = match policy.kind {
        ThresholdKind::Fixed(lambda) => {
            check_lambda(lambda)?;
            (vec![lambda; count], None)
        }
        ThresholdKind::Sure => {
            let sigma = estimate_sigma(decomp.finest())?;
            let lambdas = if policy.per_level {
                decomp
                    .details()
                    .map(|(_, c)| sure_threshold(c, sigma))
                    .collect::<Result<Vec<_>>>()?
            } else {
                let pooled: Vec<f64> = decomp.details().flat_map(|(_, c)| c.iter().copied()).collect();
                vec![sure_threshold(&pooled, sigma)?; count]
            };
            (lambdas, Some(sigma))
        }
        ThresholdKind::CrossValidation => (vec![cv_threshold(signal, basis, j0)?; count], None),
    };
    threshold_levels(&mut decomp, &thresholds);
    Ok(Thresholded {
        estimate: idwt(&decomp)?,
        thresholds,
        sigma,
    })
}

pub fn threshold_denoise(signal: &Signal, basis: &WaveletBasis, j0: usize, policy: &ThresholdPolicy) -> Result<Signal> {
    threshold_denoise_detailed(signal, basis, j0, policy).map(|t| t.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_values() {
        assert_eq!(soft(3.0, 1.0).unwrap(), 2.0);
        assert_eq!(soft(-0.5, 1.0).unwrap(), 0.0);
        assert_eq!(soft(-2.5, 0.0).unwrap(), -2.5);
        assert!(soft(1.0, -0.1).is_err());
        assert!(ThresholdPolicy::fixed(-1.0).is_err());
    }

    #[test]
    fn sure_on_zeros_is_zero() {
        assert_eq!(sure_threshold(&[0.0; 16], 1.0).unwrap(), 0.0);
        assert!(sure_threshold(&[], 1.0).is_err());
        assert!(sure_threshold(&[1.0], 0.0).is_err());
    }

    #[test]
    fn sure_two_spikes_interior() {
        let mut v = vec![10.0, 10.0];
        v.extend(std::iter::repeat_n(0.1, 30));
        let lambda = sure_threshold(&v, 1.0).unwrap();
        assert!(lambda > 0.1 - 1e-12 && lambda < 10.0, "{lambda}");
        let grid_min = (0..=20_000)
            .map(|k| sure_risk(&v, 1.0, k as f64 * 12.0 / 20_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(sure_risk(&v, 1.0, lambda) <= grid_min + 1e-9);
    }

    #[test]
    fn sure_ties_go_to_smallest() {
        // with s2 = 1/2 both candidates give SURE = 1
        let v = [1.0, -1.0];
        let s = (0.5f64).sqrt();
        assert!((sure_risk(&v, s, 0.0) - sure_risk(&v, s, 1.0)).abs() < 1e-12);
        assert_eq!(sure_threshold(&v, s).unwrap(), 0.0);
    }

    #[test]
    fn threshold_denoise_zero_lambda_is_identity() {
        let values: Vec<f64> = (0..64).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let s = Signal::new(values.clone()).unwrap();
        let out = threshold_denoise(&s, &WaveletBasis::default(), 2, &ThresholdPolicy::fixed(0.0).unwrap()).unwrap();
        for (a, b) in out.as_slice().iter().zip(&values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn cv_rejects_short_signals() {
        let s = Signal::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(
            cv_threshold(&s, &WaveletBasis::default(), 0),
            Err(ShrinkError::TooShort)
        ));
    }
}
