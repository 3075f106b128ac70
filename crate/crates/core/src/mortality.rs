//! The Gompertz-Makeham mortality law, `μ(x) = α + β e^{γx}`.

use crate::error::{Error, Result};

/// Attained age in years.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Age(f64);

impl Age {
    pub const ZERO: Age = Age(0.0);

    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && x >= 0.0 {
            Ok(Age(x))
        } else {
            Err(Error::domain(
                "Age::new",
                format!("age must be finite and ≥ 0, got {x}"),
            ))
        }
    }

    pub fn years(self) -> f64 {
        self.0
    }
}

/// Mortality basis `(α, β, γ)`.
///
/// `α` is the age-independent (Makeham) hazard, `β e^{γx}` the senescent
/// (Gompertz) hazard. With `β = 0` the value of `γ` is irrelevant and any
/// finite number is accepted, including zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl GmParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        const F: &str = "GmParams::new";
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::domain(
                F,
                format!("alpha must be finite and ≥ 0, got {alpha}"),
            ));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain(
                F,
                format!("beta must be finite and ≥ 0, got {beta}"),
            ));
        }
        if !gamma.is_finite() {
            return Err(Error::domain(
                F,
                format!("gamma must be finite, got {gamma}"),
            ));
        }
        if beta > 0.0 && gamma <= 0.0 {
            return Err(Error::domain(
                F,
                format!("gamma must be > 0 when beta > 0, got {gamma}"),
            ));
        }
        Ok(GmParams { alpha, beta, gamma })
    }

    /// Constant hazard `α`: exponentially distributed lifetimes.
    pub fn exponential(alpha: f64) -> Result<Self> {
        GmParams::new(alpha, 0.0, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Basis `(α + extra_alpha, β e^{γx}, γ)`. Survival from age `x` onward
    /// under `self`, discounted at force `extra_alpha`, is survival from
    /// age 0 under the returned basis.
    pub fn shifted(&self, x: Age, extra_alpha: f64) -> Result<GmParams> {
        let beta = if self.beta == 0.0 {
            0.0
        } else {
            self.beta * (self.gamma * x.years()).exp()
        };
        if !beta.is_finite() {
            return Err(Error::overflow(
                "GmParams::shifted",
                format!("β·e^(γx) not representable at x = {}", x.years()),
            ));
        }
        Ok(GmParams {
            alpha: self.alpha + extra_alpha,
            beta,
            gamma: self.gamma,
        })
    }

    pub(crate) fn log_survival(&self, x: f64) -> f64 {
        let makeham = -self.alpha * x;
        if self.beta == 0.0 {
            makeham
        } else {
            makeham - self.beta / self.gamma * (self.gamma * x).exp_m1()
        }
    }
}

/// Survival function `l(x) = exp{−αx − (β/γ)(e^{γx} − 1)}`.
pub fn survival(p: &GmParams, x: Age) -> f64 {
    p.log_survival(x.years()).exp()
}

/// Distribution function `F(x) = 1 − l(x)`.
pub fn cdf(p: &GmParams, x: Age) -> f64 {
    -p.log_survival(x.years()).exp_m1()
}

/// Force of mortality `μ(x) = α + β e^{γx}`.
pub fn mortality_rate(p: &GmParams, x: Age) -> Result<f64> {
    if p.beta == 0.0 {
        return Ok(p.alpha);
    }
    let mu = p.alpha + p.beta * (p.gamma * x.years()).exp();
    if mu.is_finite() {
        Ok(mu)
    } else {
        Err(Error::overflow(
            "mortality_rate",
            format!("μ({}) exceeds f64 range", x.years()),
        ))
    }
}
