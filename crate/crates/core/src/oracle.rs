//! Independent checks on the closed forms: adaptive Simpson quadrature of the
//! defining integrals and a Monte-Carlo lifetime sampler.
//!
//! Nothing here touches the special functions. Quadrature integrates the
//! survival curve directly; the sampler draws Gompertz-Makeham lifetimes as
//! the minimum of an exponential and a pure-Gompertz lifetime, both by
//! inversion.
//!
//! Random draws come from a caller-supplied generator. [`SeedStream`] is
//! ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64`, which is what the CLI uses.

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::life_values::Rate;
use crate::mortality::{Age, GmParams};

/// The generator used for reproducible Monte-Carlo runs.
pub type SeedStream = rand_chacha::ChaCha8Rng;

pub fn seed_stream(seed: u64) -> SeedStream {
    SeedStream::seed_from_u64(seed)
}

/// Integrand evaluations allowed per quadrature.
pub const EVALUATION_BUDGET: usize = 10_000_000;

/// Integration stops where the integrand falls below this fraction of its
/// value at the lower limit.
pub const TRUNCATION_LEVEL: f64 = 1e-16;

const INITIAL_PANELS: usize = 64;
const MAX_DEPTH: u32 = 50;
const MAX_HORIZON: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

struct Simpson<F> {
    f: F,
    evaluations: usize,
    budget: usize,
    error: f64,
}

impl<F: Fn(f64) -> f64> Simpson<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evaluations += 1;
        if self.evaluations > self.budget {
            return Err(Error::NonConvergence {
                func: "adaptive Simpson quadrature",
                iterations: self.budget,
            });
        }
        Ok((self.f)(x))
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            self.error += diff.abs() / 15.0;
            return Ok(left + right + diff / 15.0);
        }
        Ok(self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first cut into 64 panels, each refined by bisection with
/// Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "adaptive_simpson",
            format!("need finite a ≤ b and tol > 0, got [{a}, {b}], tol {tol}"),
        ));
    }
    let mut s = Simpson {
        f,
        evaluations: 0,
        budget,
        error: 0.0,
    };
    let width = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut value = 0.0;
    let mut lo = a;
    let mut f_lo = s.eval(lo)?;
    for i in 1..=INITIAL_PANELS {
        let hi = if i == INITIAL_PANELS {
            b
        } else {
            a + i as f64 * width
        };
        let mid = 0.5 * (lo + hi);
        let f_mid = s.eval(mid)?;
        let f_hi = s.eval(hi)?;
        let whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
        value += s.refine(lo, hi, f_lo, f_mid, f_hi, whole, panel_tol, MAX_DEPTH)?;
        lo = hi;
        f_lo = f_hi;
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate: s.error,
        evaluations: s.evaluations,
    })
}

/// First `T = 2^k ≥ 1` with `f(T) < TRUNCATION_LEVEL · f(0)`.
fn horizon<F: Fn(f64) -> f64>(f: &F) -> Result<f64> {
    let threshold = TRUNCATION_LEVEL * f(0.0);
    let mut t = 1.0;
    while f(t) >= threshold {
        t *= 2.0;
        if t > MAX_HORIZON {
            return Err(Error::NonConvergence {
                func: "quadrature horizon search",
                iterations: MAX_HORIZON.log2() as usize,
            });
        }
    }
    Ok(t)
}

fn integrate_to_horizon<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    if f(0.0) == 0.0 {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let t = horizon(&f)?;
    adaptive_simpson(f, 0.0, t, tol, EVALUATION_BUDGET)
}

fn check_inputs(func: &'static str, p: &GmParams, r: Rate, tol: f64) -> Result<()> {
    if p.alpha() + p.beta() + r.delta() == 0.0 {
        return Err(Error::domain(func, "α = β = δ = 0: integral diverges"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(
            func,
            format!("tolerance must be positive, got {tol}"),
        ));
    }
    Ok(())
}

/// `log l(y)` straight from the definition of the law.
fn log_survival(p: &GmParams, y: f64) -> f64 {
    if p.beta() == 0.0 {
        -p.alpha() * y
    } else {
        -p.alpha() * y - p.beta() / p.gamma() * (p.gamma() * y).exp_m1()
    }
}

/// `∫₀^∞ e^{−δt} l(x+t)/l(x) dt`: the continuous annuity `ā_x`, and with
/// `δ = 0` the remaining lifetime `e_x`.
pub fn integrate_survival(p: &GmParams, r: Rate, x: Age, tol: f64) -> Result<QuadratureResult> {
    check_inputs("integrate_survival", p, r, tol)?;
    let x = x.years();
    let base = log_survival(p, x);
    let delta = r.delta();
    integrate_to_horizon(|t| (log_survival(p, x + t) - base - delta * t).exp(), tol)
}

fn discounted_survival(p: &GmParams, delta: f64, y: f64) -> f64 {
    (log_survival(p, y) - delta * y).exp()
}

/// `N(x) = ∫_x^∞ l(y) e^{−δy} dy`.
pub fn integrate_n(p: &GmParams, r: Rate, x: Age, tol: f64) -> Result<QuadratureResult> {
    check_inputs("integrate_n", p, r, tol)?;
    let (x, delta) = (x.years(), r.delta());
    integrate_to_horizon(|t| discounted_survival(p, delta, x + t), tol)
}

/// `M(x) = ∫_x^∞ μ(y) l(y) e^{−δy} dy`.
pub fn integrate_m(p: &GmParams, r: Rate, x: Age, tol: f64) -> Result<QuadratureResult> {
    check_inputs("integrate_m", p, r, tol)?;
    let (x, delta) = (x.years(), r.delta());
    integrate_to_horizon(
        |t| {
            let y = x + t;
            let d = discounted_survival(p, delta, y);
            if d == 0.0 {
                return 0.0;
            }
            let mu = if p.beta() == 0.0 {
                p.alpha()
            } else {
                p.alpha() + p.beta() * (p.gamma() * y).exp()
            };
            mu * d
        },
        tol,
    )
}

/// Runs `quadrature` twice: once coarsely to size the integral, then with an
/// absolute tolerance of `rel_tol` times that size.
pub fn relative_tolerance<Q>(rel_tol: f64, mut quadrature: Q) -> Result<QuadratureResult>
where
    Q: FnMut(f64) -> Result<QuadratureResult>,
{
    let coarse = quadrature(f64::MAX)?;
    if coarse.value == 0.0 {
        return Ok(coarse);
    }
    quadrature(rel_tol * coarse.value.abs())
}

/// `u` uniform on `(0, 1]`.
fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// One Gompertz-Makeham lifetime from age 0.
///
/// Drawn as `min(E, G)` with `E ~ Exp(α)` and `G` pure Gompertz, the latter
/// by inversion: `G = ln(1 − (γ/β) ln u)/γ`. A component whose hazard
/// parameter is zero never fires.
pub fn sample_lifetime<R: Rng + ?Sized>(p: &GmParams, rng: &mut R) -> f64 {
    let makeham = if p.alpha() > 0.0 {
        -open_uniform(rng).ln() / p.alpha()
    } else {
        f64::INFINITY
    };
    let gompertz = if p.beta() > 0.0 {
        gompertz_inverse(p.beta(), p.gamma(), open_uniform(rng))
    } else {
        f64::INFINITY
    };
    makeham.min(gompertz)
}

fn gompertz_inverse(beta: f64, gamma: f64, u: f64) -> f64 {
    (-(gamma / beta) * u.ln()).ln_1p() / gamma
}

/// Monte-Carlo estimate of the expected remaining lifetime at age `x`,
/// sampling directly from the age-shifted basis `(α, β e^{γx}, γ)`.
pub fn mc_remaining_life<R: Rng + ?Sized>(
    p: &GmParams,
    x: Age,
    n: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    const F: &str = "mc_remaining_life";
    if n < 1000 {
        return Err(Error::domain(
            F,
            format!("need at least 1000 samples, got {n}"),
        ));
    }
    if p.alpha() + p.beta() == 0.0 {
        return Err(Error::domain(F, "α = β = 0: lifetimes are infinite"));
    }
    let shifted = p.shifted(x, 0.0)?;
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 1..=n {
        let sample = sample_lifetime(&shifted, rng);
        let d = sample - mean;
        mean += d / k as f64;
        m2 += d * (sample - mean);
    }
    let variance = m2 / (n - 1) as f64;
    Ok(McEstimate {
        mean,
        std_error: (variance / n as f64).sqrt(),
        n_samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mortality::cdf;

    fn age(x: f64) -> Age {
        Age::new(x).unwrap()
    }

    fn reference_basis() -> GmParams {
        GmParams::new(0.001, 0.000_012, 0.101_314).unwrap()
    }

    /// Kolmogorov–Smirnov distance between `samples` and `cdf`.
    fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    // asymptotic 1% critical value of the KS statistic
    fn ks_critical(n: usize) -> f64 {
        1.627_6 / (n as f64).sqrt()
    }

    #[test]
    fn simpson_polynomial_and_exponential() {
        let q = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12, 1000).unwrap();
        assert!((q.value - 4.0).abs() < 1e-13);
        let q = adaptive_simpson(|x: f64| (-x).exp(), 0.0, 40.0, 1e-12, 1_000_000).unwrap();
        assert!((q.value - (1.0 - (-40f64).exp())).abs() < 1e-11);
        assert!(q.abs_error_estimate >= 0.0 && q.evaluations >= 1);
        assert!(adaptive_simpson(|x| x, 0.0, 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn simpson_budget_exhaustion() {
        let res = adaptive_simpson(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1e-15, 2_000);
        assert!(matches!(res, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn survival_integral_exponential_case() {
        let p = GmParams::exponential(0.02).unwrap();
        let r = Rate::new(0.03).unwrap();
        let q = integrate_survival(&p, r, age(10.0), 1e-10).unwrap();
        assert!((q.value - 20.0).abs() < 1e-10);
    }

    #[test]
    fn survival_integral_dominated_by_discount() {
        let p = reference_basis();
        let r = Rate::new(10.0).unwrap();
        let q = integrate_survival(&p, r, age(0.0), 1e-12).unwrap();
        let bound = 1.0 / (p.alpha() + 10.0);
        assert!(q.value < bound && (bound - q.value) / bound < 2e-6);
    }

    #[test]
    fn survival_integral_reference_value() {
        let q = integrate_survival(
            &reference_basis(),
            Rate::new(0.026_559).unwrap(),
            age(0.0),
            1e-10,
        )
        .unwrap();
        assert!((q.value - 32.395_329_482_727_368).abs() < 1e-9);
        assert!(q.abs_error_estimate <= 1e-10);
    }

    #[test]
    fn m_integral_special_cases() {
        let p = reference_basis();
        let x = age(47.0);
        let l = crate::mortality::survival(&p, x);
        let q = integrate_m(&p, Rate::ZERO, x, 1e-12).unwrap();
        assert!(((q.value - l) / l).abs() < 1e-10);

        let expo = GmParams::exponential(0.01).unwrap();
        let q = integrate_m(&expo, Rate::new(0.03).unwrap(), age(20.0), 1e-13).unwrap();
        let exact = 0.25 * (-0.04f64 * 20.0).exp();
        assert!((q.value - exact).abs() < 1e-12);

        let q = integrate_m(&p, Rate::new(0.026_559).unwrap(), age(30.0), 1e-12).unwrap();
        assert!((q.value - 0.117_887_900_833_484_49).abs() < 1e-11);
    }

    #[test]
    fn quadrature_rejects_bad_inputs() {
        let none = GmParams::new(0.0, 0.0, 0.1).unwrap();
        assert!(integrate_survival(&none, Rate::ZERO, age(0.0), 1e-8).is_err());
        assert!(integrate_m(&reference_basis(), Rate::ZERO, age(0.0), 0.0).is_err());
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        for (p, delta, x) in [
            (reference_basis(), 0.026_559, 0.0),
            (reference_basis(), 0.0, 65.0),
            (GmParams::new(0.02, 3e-4, 0.08).unwrap(), 0.05, 30.0),
        ] {
            let r = Rate::new(delta).unwrap();
            for tol in [1e-6, 1e-8] {
                let coarse = integrate_survival(&p, r, age(x), tol).unwrap();
                let fine = integrate_survival(&p, r, age(x), tol / 2.0).unwrap();
                assert!(
                    (coarse.value - fine.value).abs() <= coarse.abs_error_estimate,
                    "{:?}: |Δ| = {:e} vs estimate {:e}",
                    (delta, x, tol),
                    (coarse.value - fine.value).abs(),
                    coarse.abs_error_estimate
                );
            }
        }
    }

    #[test]
    fn sampler_boundaries() {
        assert_eq!(gompertz_inverse(1e-5, 0.1, 1.0), 0.0);
        assert!(gompertz_inverse(1e-5, 0.1, 1.0 - 1e-12) < 1e-3);
        let expo = GmParams::exponential(0.05).unwrap();
        let mut rng = seed_stream(7);
        let samples: Vec<f64> = (0..200_000)
            .map(|_| sample_lifetime(&expo, &mut rng))
            .collect();
        let d = ks_distance(samples, |x| 1.0 - (-0.05 * x).exp());
        assert!(d < ks_critical(200_000), "KS {d}");
    }

    #[test]
    fn sampler_matches_closed_form_cdf() {
        let p = reference_basis();
        let mut rng = seed_stream(20_240_611);
        let n = 1_000_000;
        let samples: Vec<f64> = (0..n).map(|_| sample_lifetime(&p, &mut rng)).collect();
        let d = ks_distance(samples, |x| cdf(&p, age(x)));
        assert!(d < ks_critical(n), "KS {d}");
    }

    #[test]
    fn age_shifted_sampling_matches_conditional_survival() {
        for (i, (p, x)) in [
            (reference_basis(), 65.0),
            (GmParams::new(0.0, 1e-4, 0.12).unwrap(), 30.0),
            (GmParams::new(0.03, 5e-6, 0.14).unwrap(), 80.0),
        ]
        .into_iter()
        .enumerate()
        {
            let shifted = p.shifted(age(x), 0.0).unwrap();
            let mut rng = seed_stream(100 + i as u64);
            let n = 200_000;
            let samples: Vec<f64> = (0..n)
                .map(|_| sample_lifetime(&shifted, &mut rng))
                .collect();
            let lx = crate::mortality::survival(&p, age(x));
            let d = ks_distance(samples, |t| {
                1.0 - crate::mortality::survival(&p, age(x + t)) / lx
            });
            assert!(d < ks_critical(n), "set {i}: KS {d}");
        }
    }

    #[test]
    fn mc_exponential_mean() {
        let p = GmParams::exponential(0.02).unwrap();
        let est = mc_remaining_life(&p, age(40.0), 100_000, &mut seed_stream(3)).unwrap();
        assert!((est.mean - 50.0).abs() < 4.0 * est.std_error);
        assert_eq!(est.n_samples, 100_000);
        assert!(mc_remaining_life(&p, age(0.0), 999, &mut seed_stream(3)).is_err());
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let p = reference_basis();
        let a = mc_remaining_life(&p, age(0.0), 5_000, &mut seed_stream(11)).unwrap();
        let b = mc_remaining_life(&p, age(0.0), 5_000, &mut seed_stream(11)).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = mc_remaining_life(&p, age(0.0), 5_000, &mut seed_stream(12)).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn mc_age_zero_estimates_e0() {
        let p = reference_basis();
        let est = mc_remaining_life(&p, age(0.0), 200_000, &mut seed_stream(5)).unwrap();
        assert!((est.mean - 80.083_089_603_390_067).abs() < 4.0 * est.std_error);
    }
}
