//! Closed-form continuous life-contingency values.
//!
//! Everything reduces to the expected lifetime from birth,
//!
//! ```text
//! e₀(α, β, γ) = (1/α)·(1 − (β/γ)^{α/γ} · e^{β/γ} Γ(1 − α/γ, β/γ))
//! ```
//!
//! where `e^{β/γ} Γ(1 − α/γ, β/γ) = e^{β/γ} Γ(1 − α/γ) [1 − G(β/γ; 1 − α/γ, 1)]`
//! when the shape is positive. Remaining lifetime at age `x`, the continuous
//! annuity and the commutation function `N` follow by shifting the basis:
//! `ā_x(α, β, γ, δ) = e₀(α + δ, β e^{γx}, γ)`, `e_x = ā_x|_{δ=0}` and
//! `N(x) = D(x) ā_x` with `D(x) = l(x; α + δ, β, γ)`.

use crate::error::{Error, Result};
use crate::mortality::{survival, Age, GmParams};
use crate::special_fn::pow_scaled_upper_inc_gamma;

/// Continuously compounded force of interest `δ` per year.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rate(f64);

impl Rate {
    pub const ZERO: Rate = Rate(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && delta >= 0.0 {
            Ok(Rate(delta))
        } else {
            Err(Error::domain(
                "Rate::new",
                format!("force of interest must be finite and ≥ 0, got {delta}"),
            ))
        }
    }

    pub fn delta(self) -> f64 {
        self.0
    }

    pub fn doubled(self) -> Rate {
        Rate(2.0 * self.0)
    }
}

/// Commutation values at one age and one rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationRow {
    pub x: Age,
    pub d_val: f64,
    pub n_val: f64,
    pub m_val: f64,
}

// Above this ageing factor the (1 − factor)/α form loses more than a bit,
// and e₀ is taken from e₀ = z^{α/γ} e^z Γ(−α/γ, z)/γ instead.
const AGEING_SWITCH: f64 = 0.5;

/// Expected lifetime at birth, `e₀(α, β, γ) = ∫₀^∞ l(t) dt`.
pub fn e0(p: &GmParams) -> Result<f64> {
    let (alpha, beta, gamma) = (p.alpha(), p.beta(), p.gamma());
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::domain(
            "e0",
            "α = β = 0 gives an infinite expected lifetime",
        ));
    }
    if beta == 0.0 {
        return Ok(1.0 / alpha);
    }
    let z = beta / gamma;
    if !z.is_finite() {
        return Err(Error::overflow(
            "e0",
            format!("β/γ = {beta}/{gamma} not representable"),
        ));
    }
    if alpha == 0.0 {
        // pure Gompertz: e₀ = e^z E₁(z) / γ
        return Ok(pow_scaled_upper_inc_gamma(0.0, z, 0.0)? / gamma);
    }
    let a = alpha / gamma;
    let ageing = pow_scaled_upper_inc_gamma(1.0 - a, z, a)?;
    if ageing <= AGEING_SWITCH {
        Ok((1.0 - ageing) / alpha)
    } else {
        Ok(pow_scaled_upper_inc_gamma(-a, z, a)? / gamma)
    }
}

/// Expected remaining lifetime at age `x`, `e_x = e₀(α, β e^{γx}, γ)`.
pub fn remaining_life(p: &GmParams, x: Age) -> Result<f64> {
    annuity(p, Rate::ZERO, x)
}

/// Present value of a life annuity paid continuously at rate 1 from age `x`,
/// `ā_x = e₀(α + δ, β e^{γx}, γ)`.
pub fn annuity(p: &GmParams, r: Rate, x: Age) -> Result<f64> {
    if p.alpha() + p.beta() + r.delta() == 0.0 {
        return Err(Error::domain(
            "annuity",
            "α = β = δ = 0: undiscounted payments for an infinite lifetime",
        ));
    }
    e0(&p.shifted(x, r.delta())?)
}

/// The ageing term `f` in `ā_x = (1 − f)/(α + δ)`, i.e.
/// `(β e^{γx}/γ)^{(α+δ)/γ} · e^{β e^{γx}/γ} · Γ(1 − (α+δ)/γ, β e^{γx}/γ)`.
///
/// Zero without senescent mortality. Undefined when `α + δ = 0`.
pub fn ageing_factor(p: &GmParams, r: Rate, x: Age) -> Result<f64> {
    const F: &str = "ageing_factor";
    let alpha_eff = p.alpha() + r.delta();
    if p.beta() == 0.0 {
        if alpha_eff == 0.0 {
            return Err(Error::domain(F, "α = β = δ = 0"));
        }
        return Ok(0.0);
    }
    if alpha_eff == 0.0 {
        return Err(Error::domain(F, "factorisation needs α + δ > 0"));
    }
    let shifted = p.shifted(x, r.delta())?;
    let z = shifted.beta() / shifted.gamma();
    if !z.is_finite() {
        return Err(Error::overflow(F, "β·e^(γx)/γ not representable"));
    }
    let a = alpha_eff / p.gamma();
    pow_scaled_upper_inc_gamma(1.0 - a, z, a)
}

/// `D(x) = l(x) e^{−δx} = l(x; α + δ, β, γ)`.
pub fn commutation_d(p: &GmParams, r: Rate, x: Age) -> f64 {
    let discounted = GmParams::new(p.alpha() + r.delta(), p.beta(), p.gamma())
        .expect("adding a non-negative rate keeps the basis valid");
    survival(&discounted, x)
}

/// `N(x) = ∫_x^∞ D(y) dy = D(x) · ā_x`.
pub fn commutation_n(p: &GmParams, r: Rate, x: Age) -> Result<f64> {
    Ok(commutation_d(p, r, x) * annuity(p, r, x)?)
}

/// `M(x) = ∫_x^∞ μ(y) D(y) dy = D(x) − δ N(x)`.
pub fn commutation_m(p: &GmParams, r: Rate, x: Age) -> Result<f64> {
    let d = commutation_d(p, r, x);
    let n = d * annuity(p, r, x)?;
    Ok(d - r.delta() * n)
}

/// `D`, `N` and `M` at age `x`, at rate `δ` or `2δ` when `double_rate` is set.
pub fn commutation_row(p: &GmParams, r: Rate, x: Age, double_rate: bool) -> Result<CommutationRow> {
    let rate = if double_rate { r.doubled() } else { r };
    let d_val = commutation_d(p, rate, x);
    let n_val = d_val * annuity(p, rate, x)?;
    Ok(CommutationRow {
        x,
        d_val,
        n_val,
        m_val: d_val - rate.delta() * n_val,
    })
}

/// Shape `1 − (α + δ)/γ` of the gamma distribution function in the closed
/// form. Positive for typical bases; zero or negative shapes are evaluated
/// through the recurrence for the incomplete gamma function.
pub fn positive_shape_check(p: &GmParams, r: Rate) -> Result<f64> {
    if !(p.gamma() > 0.0) {
        return Err(Error::domain(
            "positive_shape_check",
            format!("γ must be positive, got {}", p.gamma()),
        ));
    }
    Ok(1.0 - (p.alpha() + r.delta()) / p.gamma())
}
