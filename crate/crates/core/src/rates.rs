//! Time-dependent decay rates and phases for a Lorentzian bath
//! `Φ(s) = (Γ_M λ / 2) e^{-λ|s|}`.
//!
//! Transitions between eigenstates at Bohr frequency `J` (ψ1→ψ2, ψ2→ψ4) are
//! governed by `η(t)`; those at `3J` (ψ1→ψ3, ψ3→ψ4) by `Σ(t)`. The
//! accumulated exponents are `Γ₋ = ½∫η` and `Γ₊ = ½∫Σ`, evaluated in closed
//! form. The accumulated phases `S₋`, `S₊` are evaluated exactly as the closed
//! forms they are defined by; their rates are the analytic time derivatives of
//! those forms.

use crate::error::{domain, Result};
use crate::model::{DimensionlessParams, ModelParams};

/// Instantaneous rates and accumulated exponents/phases at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBundle {
    pub t: f64,
    pub eta: f64,
    pub sigma: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub s_minus: f64,
    pub s_plus: f64,
    /// `Γ₊ + Γ₋`
    pub gamma_total: f64,
    /// `S₊ + S₋`
    pub s1: f64,
    /// `2Jt + S₁`
    pub s2: f64,
}

/// Large-Q approximation of the accumulated exponents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxGamma {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    /// Set when `Q < 5`, outside the regime the approximation targets.
    pub outside_validity: bool,
}

/// Smallest Q for which [`gamma_approx`] is considered valid.
pub const APPROX_MIN_Q: f64 = 5.0;

/// `1 - e^{-x} cos y` without cancellation for small `x`, `y`.
pub(crate) fn one_minus_damped_cos(x: f64, y: f64) -> f64 {
    let s = (0.5 * y).sin();
    -(-x).exp_m1() + (-x).exp() * 2.0 * s * s
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain(format!("time {t} must be finite and >= 0")));
    }
    Ok(())
}

/// Rate for a transition at Bohr frequency `omega`:
/// `Γ_M λ/(λ²+ω²) [λ(1 - e^{-λt} cos ωt) + ω e^{-λt} sin ωt]`.
fn transition_rate(t: f64, p: &ModelParams, omega: f64) -> f64 {
    let l = p.lambda;
    let n = l * l + omega * omega;
    let decay = (-l * t).exp();
    p.gamma_m * l / n
        * (l * one_minus_damped_cos(l * t, omega * t) + omega * decay * (omega * t).sin())
}

/// `½∫₀ᵗ` of [`transition_rate`].
fn accumulated_decay(t: f64, p: &ModelParams, omega: f64) -> f64 {
    let l = p.lambda;
    let n = l * l + omega * omega;
    let scale = 0.5 * p.gamma_m * l;
    // small |κt|, κ = λ + iω: ½Γλ t² Re φ₂(κt), φ₂(z) = Σ (-z)^k/(k+2)!
    if n.sqrt() * t < 1e-2 {
        let (zr, zi) = (l * t, omega * t);
        let mut term = (1.0, 0.0);
        let mut fact = 2.0;
        let mut acc = 0.0;
        for k in 0..8 {
            acc += term.0 / fact;
            // term *= -z
            term = (-(term.0 * zr - term.1 * zi), -(term.0 * zi + term.1 * zr));
            fact *= (k + 3) as f64;
        }
        return scale * t * t * acc;
    }
    let decay = (-l * t).exp();
    scale / n
        * (l * t
            - (l * l - omega * omega) / n * one_minus_damped_cos(l * t, omega * t)
            - 2.0 * l * omega / n * decay * (omega * t).sin())
}

/// Accumulated phase in its defining closed form:
/// `Γ_M λ/(2N) [ωt + (2ω/N)(1 - e^{-λt} cos ωt) + ((λ²-ω²)/N) e^{-λt} sin ωt]`.
fn accumulated_phase(t: f64, p: &ModelParams, omega: f64) -> f64 {
    let l = p.lambda;
    let n = l * l + omega * omega;
    let decay = (-l * t).exp();
    0.5 * p.gamma_m * l / n
        * (omega * t
            + 2.0 * omega / n * one_minus_damped_cos(l * t, omega * t)
            + (l * l - omega * omega) / n * decay * (omega * t).sin())
}

/// Time derivative of [`accumulated_phase`].
fn phase_rate(t: f64, p: &ModelParams, omega: f64) -> f64 {
    rate_pair(t, p, omega).1
}

/// [`transition_rate`] and [`phase_rate`] sharing one exponential and one `sin_cos`.
fn rate_pair(t: f64, p: &ModelParams, omega: f64) -> (f64, f64) {
    let l = p.lambda;
    let n = l * l + omega * omega;
    let decay = (-l * t).exp();
    let (s, c) = (omega * t).sin_cos();
    let rate = p.gamma_m * l / n * (l * one_minus_damped_cos(l * t, omega * t) + omega * decay * s);
    let phase = 0.5 * p.gamma_m * l / n
        * (omega
            + 2.0 * omega / n * decay * (l * c + omega * s)
            + (l * l - omega * omega) / n * decay * (omega * c - l * s));
    (rate, phase)
}

/// Upper bound on `|dS₂/dt| = |2J + dS₁/dt|` over all `t ≥ 0`.
pub(crate) fn phase_rate_bound(p: &ModelParams) -> f64 {
    let l = p.lambda;
    let one = |omega: f64| {
        let n = l * l + omega * omega;
        0.5 * p.gamma_m * l / n
            * (omega
                + 2.0 * omega / n * (l + omega)
                + (l * l - omega * omega).abs() / n * (omega + l))
    };
    2.0 * p.j + one(p.j) + one(3.0 * p.j)
}

/// `(η(t), Σ(t))`.
pub fn memory_rates(t: f64, p: &ModelParams) -> Result<(f64, f64)> {
    check_time(t)?;
    p.validate()?;
    Ok((transition_rate(t, p, p.j), transition_rate(t, p, 3.0 * p.j)))
}

/// `(dS₋/dt, dS₊/dt)`.
pub fn phase_rates(t: f64, p: &ModelParams) -> Result<(f64, f64)> {
    check_time(t)?;
    p.validate()?;
    Ok((phase_rate(t, p, p.j), phase_rate(t, p, 3.0 * p.j)))
}

/// Every rate and accumulated quantity at time `t`.
pub fn gamma_phase(t: f64, p: &ModelParams) -> Result<RateBundle> {
    check_time(t)?;
    p.validate()?;
    Ok(bundle_unchecked(t, p))
}

pub(crate) fn bundle_unchecked(t: f64, p: &ModelParams) -> RateBundle {
    let gamma_minus = accumulated_decay(t, p, p.j);
    let gamma_plus = accumulated_decay(t, p, 3.0 * p.j);
    let s_minus = accumulated_phase(t, p, p.j);
    let s_plus = accumulated_phase(t, p, 3.0 * p.j);
    let s1 = s_plus + s_minus;
    RateBundle {
        t,
        eta: transition_rate(t, p, p.j),
        sigma: transition_rate(t, p, 3.0 * p.j),
        gamma_minus,
        gamma_plus,
        s_minus,
        s_plus,
        gamma_total: gamma_plus + gamma_minus,
        s1,
        s2: 2.0 * p.j * t + s1,
    }
}

/// `(η, Σ)` without argument checks.
pub(crate) fn transition_rates(t: f64, p: &ModelParams) -> (f64, f64) {
    (transition_rate(t, p, p.j), transition_rate(t, p, 3.0 * p.j))
}

/// `(Γ₋, Γ₊)` without argument checks.
pub(crate) fn exponents(t: f64, p: &ModelParams) -> (f64, f64) {
    (
        accumulated_decay(t, p, p.j),
        accumulated_decay(t, p, 3.0 * p.j),
    )
}

/// Rates used by the reduced ODE right-hand side: `(η, Σ, dS₁/dt)`.
pub(crate) fn instantaneous(t: f64, p: &ModelParams) -> (f64, f64, f64) {
    let (eta, ds_minus) = rate_pair(t, p, p.j);
    let (sigma, ds_plus) = rate_pair(t, p, 3.0 * p.j);
    (eta, sigma, ds_minus + ds_plus)
}

fn dimless_exponent(tau: f64, qk: f64, r: f64) -> f64 {
    let den = 1.0 + qk * qk;
    tau / (2.0 * den)
        - (1.0 - qk * qk) * one_minus_damped_cos(r * tau, qk * r * tau) / (2.0 * r * den * den)
        - qk * (-r * tau).exp() * (qk * r * tau).sin() / (r * den * den)
}

/// `(Γ₋(τ), Γ₊(τ))` written directly in `Q`, `R`, `τ = Γ_M t`.
pub fn gamma_dimless(tau: f64, q: f64, r: f64) -> Result<(f64, f64)> {
    check_time(tau)?;
    DimensionlessParams::new(q, r)?;
    Ok((
        dimless_exponent(tau, q, r),
        dimless_exponent(tau, 3.0 * q, r),
    ))
}

/// Large-Q form of the accumulated exponents in rescaled time `τ′ = τ/Q²`:
///
/// ```text
/// Γ₋ ≈ ½  [τ′ + (1 - e^{-RQ²τ′} cos( RQ³τ′))/(RQ²)]
/// Γ₊ ≈ 1/18 [τ′ + (1 - e^{-RQ²τ′} cos(3RQ³τ′))/(RQ²)]
/// ```
pub fn gamma_approx(tau_prime: f64, q: f64, r: f64) -> Result<ApproxGamma> {
    check_time(tau_prime)?;
    DimensionlessParams::new(q, r)?;
    if q <= 0.0 {
        return Err(domain("large-Q approximation is undefined at Q = 0"));
    }
    let rq2 = r * q * q;
    let rq3 = rq2 * q;
    let x = rq2 * tau_prime;
    Ok(ApproxGamma {
        gamma_minus: 0.5 * (tau_prime + one_minus_damped_cos(x, rq3 * tau_prime) / rq2),
        gamma_plus: (tau_prime + one_minus_damped_cos(x, 3.0 * rq3 * tau_prime) / rq2) / 18.0,
        outside_validity: q < APPROX_MIN_Q,
    })
}
