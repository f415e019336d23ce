//! Test functions, scenario generators, error metrics and the Monte Carlo
//! driver comparing shrinkage rules with thresholding baselines.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::baselines::{threshold_denoise, ThresholdPolicy};
use crate::error::{positive, Result, ShrinkError};
use crate::numeric::{median, sample_sd};
use crate::priors::{AsymmetricPrior, MixturePrior};
use crate::shrinkage::{denoise, PolicyConfig};
use crate::wavelet::{idwt, Signal, WaveletBasis, WaveletDecomposition};

/// Mixture weight used when drawing study-1 coefficients.
pub const STUDY1_ALPHA: f64 = 0.925;

/// Standard deviation the test functions are rescaled to.
pub const TEST_FUNCTION_SD: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    Bumps,
    Blocks,
    Doppler,
    Heavisine,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [Self::Bumps, Self::Blocks, Self::Doppler, Self::Heavisine];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bumps => "bumps",
            Self::Blocks => "blocks",
            Self::Doppler => "doppler",
            Self::Heavisine => "heavisine",
        }
    }

    /// Value at `x` in `(0, 1]`, unscaled.
    pub fn eval(self, x: f64) -> f64 {
        const KNOTS: [f64; 11] = [0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
        match self {
            Self::Bumps => {
                const H: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
                const W: [f64; 11] = [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005];
                KNOTS
                    .iter()
                    .zip(H.iter().zip(&W))
                    .map(|(t, (h, w))| h * (1.0 + ((x - t) / w).abs()).powi(-4))
                    .sum()
            }
            Self::Blocks => {
                const H: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
                KNOTS.iter().zip(&H).filter(|(t, _)| x >= **t).map(|(_, h)| h).sum()
            }
            Self::Doppler => (x * (1.0 - x)).sqrt() * (2.0 * PI * 1.05 / (x + 0.05)).sin(),
            Self::Heavisine => 4.0 * (4.0 * PI * x).sin() - sgn(x - 0.3) - sgn(0.72 - x),
        }
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = ShrinkError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ShrinkError::UnknownTestFunction(s.to_string()))
    }
}

/// Test function sampled at `x_i = i / n`, `i = 1..n`.
pub fn dj_test_function(name: &str, n: usize) -> Result<Signal> {
    let f: TestFunction = name.parse()?;
    sample_function(f, n)
}

pub fn sample_function(f: TestFunction, n: usize) -> Result<Signal> {
    Signal::new((1..=n).map(|i| f.eval(i as f64 / n as f64)).collect())
}

/// `sd(f) / snr`, with `sd` the sample standard deviation.
pub fn snr_sigma(f: &Signal, snr: f64) -> Result<f64> {
    let snr = positive("snr", snr)?;
    let sd = sample_sd(f.as_slice());
    if sd > 0.0 {
        Ok(sd / snr)
    } else {
        Err(ShrinkError::ConstantSignal)
    }
}

/// One draw of the prior-generated design.
#[derive(Debug, Clone)]
pub struct Study1Sample {
    pub f: Signal,
    pub y: Signal,
    pub theta: WaveletDecomposition,
    /// Wavelet-domain noise, flattened in the same order as `theta.to_vec()`.
    pub noise: Vec<f64>,
    pub sigma: f64,
}

/// Draws detail coefficients at levels `j0..J-1` from `mixture` (scaling
/// coefficients are zero), sets `sigma` from the SNR of `f = W' theta`, and
/// adds `N(0, sigma^2)` noise in the wavelet domain.
pub fn generate_study1<R: Rng + ?Sized>(
    mixture: &MixturePrior,
    n: usize,
    snr: f64,
    j0: usize,
    basis: &WaveletBasis,
    rng: &mut R,
) -> Result<Study1Sample> {
    if !n.is_power_of_two() {
        return Err(ShrinkError::NotDyadic(n));
    }
    let levels = n.trailing_zeros() as usize;
    let mut theta = WaveletDecomposition::zeros(levels, j0, *basis)?;
    for (_, coeffs) in theta.details_mut() {
        coeffs.iter_mut().for_each(|c| *c = mixture.sample(rng));
    }
    let f = idwt(&theta)?;
    let sigma = snr_sigma(&f, snr)?;
    let noise: Vec<f64> = (0..n).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect();
    let d: Vec<f64> = theta.to_vec().iter().zip(&noise).map(|(t, e)| t + e).collect();
    let y = idwt(&WaveletDecomposition::from_flat(&d, j0, *basis)?)?;
    Ok(Study1Sample {
        f,
        y,
        theta,
        noise,
        sigma,
    })
}

fn check_dims(estimate: &[f64], truth: &[f64]) -> Result<()> {
    if estimate.len() != truth.len() {
        return Err(ShrinkError::DimensionMismatch {
            expected: truth.len(),
            found: estimate.len(),
        });
    }
    if truth.is_empty() {
        return Err(ShrinkError::Empty);
    }
    Ok(())
}

/// Mean squared error of one estimate.
pub fn mse(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    check_dims(estimate, truth)?;
    Ok(estimate.iter().zip(truth).map(|(e, t)| (e - t).powi(2)).sum::<f64>() / truth.len() as f64)
}

/// Median absolute error of one estimate.
pub fn mae(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    check_dims(estimate, truth)?;
    let abs: Vec<f64> = estimate.iter().zip(truth).map(|(e, t)| (e - t).abs()).collect();
    median(&abs).ok_or(ShrinkError::Empty)
}

fn average_over<F: Fn(&[f64], &[f64]) -> Result<f64>>(estimates: &[Vec<f64>], truth: &[f64], metric: F) -> Result<f64> {
    if estimates.is_empty() {
        return Err(ShrinkError::Empty);
    }
    let mut total = 0.0;
    for e in estimates {
        total += metric(e, truth)?;
    }
    Ok(total / estimates.len() as f64)
}

/// `(1 / Rn) sum_r sum_i (fhat_r(x_i) - f(x_i))^2` over the `R` rows of `estimates`.
pub fn amse(estimates: &[Vec<f64>], truth: &[f64]) -> Result<f64> {
    average_over(estimates, truth, mse)
}

/// Mean over rows of the median absolute error.
pub fn amae(estimates: &[Vec<f64>], truth: &[f64]) -> Result<f64> {
    average_over(estimates, truth, mae)
}

/// Estimators compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "CV")]
    Cv,
    #[serde(rename = "SURE")]
    Sure,
    #[serde(rename = "BETASYM")]
    BetaSym,
    #[serde(rename = "BETAASYM")]
    BetaAsym,
    #[serde(rename = "KUM")]
    Kum,
    #[serde(rename = "TRI")]
    Tri,
    #[serde(rename = "SN")]
    Sn,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Self::Cv,
        Self::Sure,
        Self::BetaSym,
        Self::BetaAsym,
        Self::Kum,
        Self::Tri,
        Self::Sn,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Cv => "CV",
            Self::Sure => "SURE",
            Self::BetaSym => "BETASYM",
            Self::BetaAsym => "BETAASYM",
            Self::Kum => "KUM",
            Self::Tri => "TRI",
            Self::Sn => "SN",
        }
    }

    pub fn is_bayesian(self) -> bool {
        self.prior_family().is_some()
    }

    /// Prior shape used by the Bayesian methods. The half-support is a
    /// placeholder replaced level by level.
    pub fn prior_family(self) -> Option<AsymmetricPrior> {
        match self {
            Self::Cv | Self::Sure => None,
            Self::BetaSym => Some(AsymmetricPrior::Beta { a: 5.0, b: 5.0, m: 1.0 }),
            Self::BetaAsym => Some(AsymmetricPrior::Beta { a: 5.0, b: 1.0, m: 1.0 }),
            Self::Kum => Some(AsymmetricPrior::Kumaraswamy { a: 7.0, b: 2.0, m: 1.0 }),
            Self::Tri => Some(AsymmetricPrior::Triangular { mode: 8.0, m: 16.0 }),
            Self::Sn => Some(AsymmetricPrior::SkewNormal { tau: 8.0, gamma: 4.0 }),
        }
    }

    /// Estimate of `f` from the noisy `y`.
    pub fn estimate(self, y: &Signal, basis: &WaveletBasis, j0: usize) -> Result<Signal> {
        match self {
            Self::Cv => threshold_denoise(y, basis, j0, &ThresholdPolicy::cross_validation()),
            Self::Sure => threshold_denoise(y, basis, j0, &ThresholdPolicy::sure()),
            _ => {
                let family = self.prior_family().expect("bayesian method");
                denoise(y, basis, &family, &PolicyConfig::default().with_j0(j0))
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = ShrinkError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ShrinkError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Coefficients drawn from a mixture prior, noise added in the wavelet domain.
    PriorGenerated { mixture: MixturePrior },
    /// A test function rescaled to `signal_sd`, noise added in time.
    TestFunction { function: TestFunction, signal_sd: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub kind: ScenarioKind,
    pub n: usize,
    pub snr: f64,
    pub replications: usize,
    pub seed: u64,
    pub j0: usize,
    pub basis: WaveletBasis,
}

impl Scenario {
    /// Beta(`a`, 1) on `(-10, 10)` mixed with a point mass of weight
    /// [`STUDY1_ALPHA`].
    pub fn study1(a: f64, n: usize, snr: f64, replications: usize, seed: u64) -> Result<Self> {
        let mixture = MixturePrior::new(STUDY1_ALPHA, AsymmetricPrior::beta(a, 1.0, 10.0)?)?;
        Self::new(ScenarioKind::PriorGenerated { mixture }, n, snr, replications, seed)
    }

    /// Weak asymmetry, Beta(7, 1).
    pub fn study1_weak(n: usize, snr: f64, replications: usize, seed: u64) -> Result<Self> {
        Self::study1(7.0, n, snr, replications, seed)
    }

    /// Strong asymmetry, Beta(20, 1).
    pub fn study1_strong(n: usize, snr: f64, replications: usize, seed: u64) -> Result<Self> {
        Self::study1(20.0, n, snr, replications, seed)
    }

    pub fn test_function(function: TestFunction, n: usize, snr: f64, replications: usize, seed: u64) -> Result<Self> {
        Self::new(
            ScenarioKind::TestFunction {
                function,
                signal_sd: TEST_FUNCTION_SD,
            },
            n,
            snr,
            replications,
            seed,
        )
    }

    pub fn new(kind: ScenarioKind, n: usize, snr: f64, replications: usize, seed: u64) -> Result<Self> {
        let s = Self {
            kind,
            n,
            snr,
            replications,
            seed,
            j0: 3,
            basis: WaveletBasis::default(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_j0(mut self, j0: usize) -> Result<Self> {
        self.j0 = j0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_basis(mut self, basis: WaveletBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() || self.n < 2 {
            return Err(ShrinkError::NotDyadic(self.n));
        }
        positive("snr", self.snr)?;
        if self.replications == 0 {
            return Err(ShrinkError::InvalidParameter {
                name: "replications",
                value: 0.0,
                reason: "need at least one replication",
            });
        }
        let levels = self.n.trailing_zeros() as usize;
        // cross-validation works on half-length signals
        if self.j0 + 1 >= levels {
            return Err(ShrinkError::InvalidLevel { j0: self.j0, levels });
        }
        match self.kind {
            ScenarioKind::PriorGenerated { mixture } => mixture.continuous().validate(),
            ScenarioKind::TestFunction { signal_sd, .. } => positive("signal_sd", signal_sd).map(drop),
        }
    }

    /// Generator for replication `r`: the scenario seed with stream `r`.
    pub fn rng(&self, replication: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(replication as u64);
        rng
    }

    /// Truth and noisy observation for replication `r`.
    pub fn draw(&self, replication: usize) -> Result<(Signal, Signal)> {
        let mut rng = self.rng(replication);
        match self.kind {
            ScenarioKind::PriorGenerated { mixture } => {
                let s = generate_study1(&mixture, self.n, self.snr, self.j0, &self.basis, &mut rng)?;
                Ok((s.f, s.y))
            }
            ScenarioKind::TestFunction { function, signal_sd } => {
                let raw = sample_function(function, self.n)?;
                let scale = signal_sd / sample_sd(raw.as_slice());
                let f = Signal::new(raw.as_slice().iter().map(|v| v * scale).collect())?;
                let sigma = snr_sigma(&f, self.snr)?;
                let y = f
                    .as_slice()
                    .iter()
                    .map(|v| v + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                Ok((f, Signal::new(y)?))
            }
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            ScenarioKind::PriorGenerated { mixture } => format!("prior-generated ({mixture})"),
            ScenarioKind::TestFunction { function, .. } => function.to_string(),
        }
    }
}

/// Error of one method on one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicationMetric {
    pub replication: usize,
    pub method: Method,
    pub mse: f64,
    pub mae: f64,
}

/// Aggregated row of the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodSummary {
    pub id: Method,
    pub amse: f64,
    pub amse_sd: f64,
    pub amae: f64,
    pub amae_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub scenario: Scenario,
    pub methods: Vec<MethodSummary>,
    pub seed: u64,
    pub replications: usize,
    /// Per-replication errors, replication-major.
    #[serde(skip)]
    pub raw: Vec<ReplicationMetric>,
}

impl SimReport {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.id == method)
    }

    /// Per-replication MSE of `method`, in replication order.
    pub fn mse_series(&self, method: Method) -> Vec<f64> {
        self.raw.iter().filter(|r| r.method == method).map(|r| r.mse).collect()
    }

    pub fn mae_series(&self, method: Method) -> Vec<f64> {
        self.raw.iter().filter(|r| r.method == method).map(|r| r.mae).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Aligned text table, one row per method.
    pub fn write_table<W: Write>(&self, mut out: W) -> io::Result<()> {
        let sc = &self.scenario;
        writeln!(
            out,
            "{}  n = {}  SNR = {}  R = {}  seed = {}",
            sc.label(),
            sc.n,
            sc.snr,
            self.replications,
            self.seed
        )?;
        writeln!(
            out,
            "{:<10} {:>10} {:>10} {:>10} {:>10}",
            "Method", "AMSE", "(SD)", "AMAE", "(SD)"
        )?;
        for m in &self.methods {
            writeln!(
                out,
                "{:<10} {:>10.4} {:>10} {:>10.4} {:>10}",
                m.id.id(),
                m.amse,
                format!("({:.4})", m.amse_sd),
                m.amae,
                format!("({:.4})", m.amae_sd)
            )?;
        }
        Ok(())
    }

    /// `replication,method,mse,mae` rows.
    pub fn write_raw_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "replication,method,mse,mae")?;
        for r in &self.raw {
            writeln!(out, "{},{},{},{}", r.replication, r.method.id(), r.mse, r.mae)?;
        }
        Ok(())
    }
}

/// Runs every method on the same noisy data in each replication.
/// Replications run in parallel; results are gathered and summed in
/// replication order, so the report depends only on the inputs.
pub fn run_experiment(scenario: &Scenario, methods: &[Method]) -> Result<SimReport> {
    scenario.validate()?;
    if methods.is_empty() {
        return Err(ShrinkError::Empty);
    }
    let per_rep = (0..scenario.replications)
        .into_par_iter()
        .map(|r| {
            let (f, y) = scenario.draw(r)?;
            methods
                .iter()
                .map(|&method| {
                    let label = |e: ShrinkError| ShrinkError::Replication {
                        replication: r,
                        method: method.id().to_string(),
                        source: Box::new(e),
                    };
                    let est = method.estimate(&y, &scenario.basis, scenario.j0).map_err(label)?;
                    Ok(ReplicationMetric {
                        replication: r,
                        method,
                        mse: mse(est.as_slice(), f.as_slice())?,
                        mae: mae(est.as_slice(), f.as_slice())?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let raw: Vec<ReplicationMetric> = per_rep.into_iter().flatten().collect();

    let rows = methods
        .iter()
        .map(|&id| {
            let mses: Vec<f64> = raw.iter().filter(|r| r.method == id).map(|r| r.mse).collect();
            let maes: Vec<f64> = raw.iter().filter(|r| r.method == id).map(|r| r.mae).collect();
            let n = mses.len() as f64;
            MethodSummary {
                id,
                amse: mses.iter().sum::<f64>() / n,
                amse_sd: sample_sd(&mses),
                amae: maes.iter().sum::<f64>() / n,
                amae_sd: sample_sd(&maes),
            }
        })
        .collect();
    Ok(SimReport {
        scenario: *scenario,
        methods: rows,
        seed: scenario.seed,
        replications: scenario.replications,
        raw,
    })
}

/// Paired two-sided sign test of `a_i < b_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignTest {
    /// Pairs with `a < b`.
    pub below: u64,
    /// Pairs with `a > b`.
    pub above: u64,
    pub ties: u64,
    pub p_value: f64,
}

pub fn sign_test(a: &[f64], b: &[f64]) -> Result<SignTest> {
    check_dims(a, b)?;
    let below = a.iter().zip(b).filter(|(x, y)| x < y).count() as u64;
    let above = a.iter().zip(b).filter(|(x, y)| x > y).count() as u64;
    let ties = a.len() as u64 - below - above;
    let trials = below + above;
    let p_value = if trials == 0 {
        1.0
    } else {
        let binom = Binomial::new(0.5, trials).expect("valid binomial");
        (2.0 * binom.cdf(below.min(above))).min(1.0)
    };
    Ok(SignTest {
        below,
        above,
        ties,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heavisine_at_half() {
        // 4 sin(2 pi) - sgn(0.2) - sgn(0.22)
        assert!((TestFunction::Heavisine.eval(0.5) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_has_twelve_plateaus() {
        let s = dj_test_function("blocks", 2048).unwrap();
        let v = s.as_slice();
        let segments = 1 + v.windows(2).filter(|w| (w[0] - w[1]).abs() > 1e-12).count();
        assert_eq!(segments, 12);
    }

    #[test]
    fn doppler_envelope() {
        let s = dj_test_function("doppler", 1024).unwrap();
        assert!(s.as_slice().iter().all(|v| v.abs() <= 1.1));
        assert!(TestFunction::Doppler.eval(1e-9).abs() < 1e-4);
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(
            dj_test_function("wiggles", 64),
            Err(ShrinkError::UnknownTestFunction(_))
        ));
        assert!(matches!("LPM".parse::<Method>(), Err(ShrinkError::UnknownMethod(_))));
        assert_eq!("betaasym".parse::<Method>().unwrap(), Method::BetaAsym);
    }

    #[test]
    fn snr_sigma_scales() {
        let f = Signal::new(vec![-3.0, 3.0, -3.0, 3.0]).unwrap();
        let sd = sample_sd(f.as_slice());
        assert!((snr_sigma(&f, 3.0).unwrap() - sd / 3.0).abs() < 1e-15);
        assert!((snr_sigma(&f, 9.0).unwrap() / snr_sigma(&f, 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            snr_sigma(&Signal::new(vec![1.0; 8]).unwrap(), 3.0),
            Err(ShrinkError::ConstantSignal)
        );
    }

    #[test]
    fn metrics_small_cases() {
        let truth = [0.0; 4];
        assert_eq!(amse(&[vec![1.0; 4]], &truth).unwrap(), 1.0);
        assert_eq!(amae(&[vec![1.0, 2.0, 3.0, 4.0]], &truth).unwrap(), 2.5);
        assert_eq!(amse(&[truth.to_vec(), truth.to_vec()], &truth).unwrap(), 0.0);
        assert!(matches!(
            amse(&[vec![0.0; 3]], &truth),
            Err(ShrinkError::DimensionMismatch { .. })
        ));
        let est = [vec![1.0, -1.0, 2.0, 0.0], vec![0.5, 0.5, 0.5, 3.0]];
        // (1 + 1 + 4 + 0 + 0.25 * 3 + 9) / 8
        assert!((amse(&est, &truth).unwrap() - 15.75 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn sign_test_extremes() {
        let a = vec![0.0; 20];
        let b = vec![1.0; 20];
        let t = sign_test(&a, &b).unwrap();
        assert_eq!((t.below, t.above), (20, 0));
        assert!((t.p_value - 2.0 * 0.5f64.powi(20)).abs() < 1e-15);
        assert_eq!(sign_test(&a, &a).unwrap().p_value, 1.0);
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::study1_weak(500, 3.0, 10, 1).is_err());
        assert!(Scenario::study1_weak(512, 0.0, 10, 1).is_err());
        assert!(Scenario::study1_weak(512, 3.0, 0, 1).is_err());
        assert!(Scenario::study1_weak(16, 3.0, 1, 1).is_err());
        assert!(Scenario::study1_weak(64, 3.0, 1, 1).unwrap().with_j0(5).is_err());
    }
}
