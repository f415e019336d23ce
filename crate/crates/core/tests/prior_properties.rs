use asymshrink::numeric::norm_pdf;
use asymshrink::{AsymmetricPrior, MixturePrior};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 100_000;

fn ks_statistic(mut draws: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    draws
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn grid() -> Vec<AsymmetricPrior> {
    let mut v = Vec::new();
    for &(a, b) in &[
        (1.0, 1.0),
        (7.0, 1.0),
        (7.0, 2.0),
        (5.0, 5.0),
        (20.0, 1.0),
        (0.7, 2.5),
        (2.0, 30.0),
    ] {
        for &m in &[0.5, 3.0, 10.0] {
            v.push(AsymmetricPrior::beta(a, b, m).unwrap());
            v.push(AsymmetricPrior::kumaraswamy(a, b, m).unwrap());
        }
    }
    for &(mode, m) in &[(1.0, 3.0), (-2.9, 3.0), (0.0, 1.0), (8.0, 10.0), (0.5, 5.0)] {
        v.push(AsymmetricPrior::triangular(mode, m).unwrap());
    }
    for &(tau, gamma) in &[(1.0, 0.0), (8.0, 8.0), (8.0, 3.0), (2.0, -4.0), (0.3, 20.0)] {
        v.push(AsymmetricPrior::skew_normal(tau, gamma).unwrap());
    }
    v
}

/// Adaptive Simpson on `[lo, hi]`, independent of the library's Gauss rules.
fn simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (lo + hi);
    let (fa, fm, fb) = (f(lo), f(m), f(hi));
    rec(
        f,
        lo,
        hi,
        fa,
        fm,
        fb,
        (hi - lo) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        depth,
    )
}

fn total_mass(g: &AsymmetricPrior) -> f64 {
    let pdf = |t: f64| g.pdf(t);
    match (g.support(), g.kink()) {
        (Some((lo, hi)), Some(k)) => simpson(&pdf, lo, k, 1e-12, 50) + simpson(&pdf, k, hi, 1e-12, 50),
        (Some((lo, hi)), None) => {
            // split off the ends, where shapes below one are singular
            let w = hi - lo;
            let edge = 1e-6 * w;
            let mid = simpson(&pdf, lo + edge, hi - edge, 1e-12, 50);
            mid + g.cdf(lo + edge) + (1.0 - g.cdf(hi - edge))
        }
        (None, _) => {
            let AsymmetricPrior::SkewNormal { tau, .. } = *g else {
                unreachable!()
            };
            simpson(&pdf, -40.0 * tau, 40.0 * tau, 1e-12, 50)
        }
    }
}

#[test]
fn densities_integrate_to_one() {
    for g in grid() {
        let mass = total_mass(&g);
        assert!((mass - 1.0).abs() < 1e-8, "{g}: {mass}");
    }
}

#[test]
fn densities_vanish_outside_bounded_support() {
    for g in grid().into_iter().filter(AsymmetricPrior::is_bounded) {
        let m = g.half_support().unwrap();
        for t in [-m, m, -1.5 * m, 2.0 * m, -1e9] {
            assert_eq!(g.pdf(t), 0.0, "{g} at {t}");
        }
    }
}

#[test]
fn reductions_to_uniform_and_normal() {
    for m in [0.5, 2.0, 7.0] {
        let b = AsymmetricPrior::beta(1.0, 1.0, m).unwrap();
        let k = AsymmetricPrior::kumaraswamy(1.0, 1.0, m).unwrap();
        for i in 1..100 {
            let t = -m + 2.0 * m * i as f64 / 100.0;
            assert!((b.pdf(t) - 0.5 / m).abs() < 1e-12);
            assert!((k.pdf(t) - 0.5 / m).abs() < 1e-12);
        }
    }
    assert!((AsymmetricPrior::beta(1.0, 1.0, 2.0).unwrap().pdf(0.0) - 0.25).abs() < 1e-15);
    for tau in [0.5, 1.0, 8.0] {
        let s = AsymmetricPrior::skew_normal(tau, 0.0).unwrap();
        for i in -40..=40 {
            let t = tau * i as f64 / 8.0;
            assert!((s.pdf(t) - norm_pdf(t / tau) / tau).abs() < 1e-12);
        }
    }
    assert!((AsymmetricPrior::skew_normal(1.0, 0.0).unwrap().pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-12);
}

#[test]
fn triangular_peak_is_one_over_m() {
    for (mode, m) in [(1.0, 3.0), (-2.0, 5.0), (0.0, 1.0)] {
        let g = AsymmetricPrior::triangular(mode, m).unwrap();
        assert!((g.pdf(mode) - 1.0 / m).abs() < 1e-12);
    }
}

#[test]
fn kumaraswamy_matches_direct_formula() {
    // (1 / 2m) a b x^(a-1) (1 - x^a)^(b-1), x = (theta + m) / 2m, evaluated plainly
    let (a, b, m) = (7.0f64, 2.0f64, 3.0f64);
    let g = AsymmetricPrior::kumaraswamy(a, b, m).unwrap();
    for i in 0..=100 {
        let t = -m + 2.0 * m * (i as f64 + 0.5) / 101.0;
        let x = (t + m) / (2.0 * m);
        let direct = a * b * x.powf(a - 1.0) * (1.0 - x.powf(a)).powf(b - 1.0) / (2.0 * m);
        assert!((g.pdf(t) - direct).abs() <= 1e-12 * direct.max(1e-300) + 1e-15, "{t}");
    }
}

#[test]
fn samplers_pass_ks_and_stay_in_support() {
    let priors = [
        AsymmetricPrior::beta(7.0, 1.0, 10.0).unwrap(),
        AsymmetricPrior::beta(0.7, 2.5, 3.0).unwrap(),
        AsymmetricPrior::beta(20.0, 1.0, 10.0).unwrap(),
        AsymmetricPrior::kumaraswamy(7.0, 2.0, 3.0).unwrap(),
        AsymmetricPrior::kumaraswamy(0.5, 0.5, 1.0).unwrap(),
        AsymmetricPrior::triangular(1.0, 3.0).unwrap(),
        AsymmetricPrior::triangular(-2.9, 3.0).unwrap(),
        AsymmetricPrior::skew_normal(8.0, 4.0).unwrap(),
        AsymmetricPrior::skew_normal(1.0, -3.0).unwrap(),
    ];
    for (k, g) in priors.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let draws: Vec<f64> = (0..DRAWS).map(|_| g.sample(&mut rng)).collect();
        if let Some(m) = g.half_support() {
            assert!(draws.iter().all(|t| t.abs() < m), "{g} left its support");
        }
        let d = ks_statistic(draws, |t| g.cdf(t));
        assert!(d < 0.01, "{g}: KS = {d}");
    }
}

#[test]
fn sample_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = AsymmetricPrior::kumaraswamy(1.0, 1.0, 1.0).unwrap();
    let mean: f64 = (0..DRAWS).map(|_| u.sample(&mut rng)).sum::<f64>() / DRAWS as f64;
    assert!(mean.abs() < 0.01, "{mean}");

    // shifted, scaled Beta(7, 1): mean 2m a / (a + b) - m = 7.5
    let g = AsymmetricPrior::beta(7.0, 1.0, 10.0).unwrap();
    let draws: Vec<f64> = (0..DRAWS).map(|_| g.sample(&mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / DRAWS as f64;
    let var = draws.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (DRAWS as f64 - 1.0);
    let se = (var / DRAWS as f64).sqrt();
    assert!((mean - 7.5).abs() < 3.0 * se, "{mean} +- {se}");
    assert!((g.mean() - 7.5).abs() < 1e-12);
}

#[test]
fn mixture_zero_fraction_and_conditional_law() {
    let g = AsymmetricPrior::beta(7.0, 1.0, 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut fractions = Vec::new();
    for alpha in [0.5, 0.9, 0.99] {
        let mix = MixturePrior::new(alpha, g).unwrap();
        let zeros = (0..DRAWS).filter(|_| mix.sample(&mut rng) == 0.0).count();
        let frac = zeros as f64 / DRAWS as f64;
        assert!((frac - alpha).abs() < 0.01, "{alpha}: {frac}");
        fractions.push(frac);
    }
    assert!(fractions.windows(2).all(|w| w[0] < w[1]));

    let mix = MixturePrior::new(0.8, g).unwrap();
    let nonzero: Vec<f64> = std::iter::repeat_with(|| mix.sample(&mut rng))
        .filter(|&t| t != 0.0)
        .take(DRAWS)
        .collect();
    assert!(ks_statistic(nonzero, |t| g.cdf(t)) < 0.01);
}

#[test]
fn invalid_mixtures_are_rejected() {
    let g = AsymmetricPrior::skew_normal(1.0, 1.0).unwrap();
    for alpha in [0.0, 1.0, -0.1, f64::NAN] {
        assert!(MixturePrior::new(alpha, g).is_err());
    }
    assert!(AsymmetricPrior::triangular(3.0, 3.0).is_err());
    assert!(AsymmetricPrior::beta(0.0, 1.0, 1.0).is_err());
    assert!(AsymmetricPrior::kumaraswamy(1.0, 1.0, -1.0).is_err());
    assert!(AsymmetricPrior::skew_normal(0.0, 1.0).is_err());
}
