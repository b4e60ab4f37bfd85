//! Concurrence of two-qubit states, plus the single-qubit comparator `G(t)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    charpoly, hermitian_eigenvalues, psd_sqrt, quartic_roots, singular_values, Mat4, ONE, ZERO,
};
use crate::model::{
    standard_from_eigen_unchecked, validate_xstate, validate_xstate_with, x_matrix, DensityMatrix4,
    XStateStandard,
};
use crate::propagator::Trajectory;
use crate::rates::gamma_dimless;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    /// `[|w| − √(x₁x₂), |y| − √(uv)]` when the X-state formula was used.
    pub competitors: Option<[f64; 2]>,
}

impl ConcurrenceValue {
    fn bare(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            competitors: None,
        }
    }
}

/// Tolerance on Hermiticity, trace and positivity accepted by [`wootters`].
pub const DENSITY_TOL: f64 = 1e-8;

fn spin_flip() -> Mat4 {
    // σʸ ⊗ σʸ
    let mut y = Mat4::zeros();
    y.0[0][3] = -ONE;
    y.0[1][2] = ONE;
    y.0[2][1] = ONE;
    y.0[3][0] = -ONE;
    y
}

fn check_density(rho: &DensityMatrix4) -> Result<()> {
    let m = rho.matrix();
    let herm = m.hermiticity_residual();
    if herm > DENSITY_TOL || !m.is_finite() {
        return Err(Error::NotHermitian { residual: herm });
    }
    let tr = m.trace();
    if (tr - 1.0).norm() > DENSITY_TOL {
        return Err(Error::StateViolation {
            constraint: "trace",
            residual: tr.re - 1.0,
        });
    }
    let lowest = hermitian_eigenvalues(m)[0];
    if lowest < -DENSITY_TOL {
        return Err(Error::StateViolation {
            constraint: "positivity",
            residual: lowest,
        });
    }
    Ok(())
}

/// Wootters concurrence `max(0, s₁ − s₂ − s₃ − s₄)`, where `sᵢ = √rᵢ` are the
/// singular values of `√ρ · Y · conj(√ρ)` (equivalently the square roots of
/// the eigenvalues of `ρ ρ̃`).
pub fn wootters(rho: &DensityMatrix4) -> Result<ConcurrenceValue> {
    check_density(rho)?;
    let s = psd_sqrt(rho.matrix());
    let sv = singular_values(&(s * spin_flip() * s.conj()));
    Ok(ConcurrenceValue::bare(sv[0] - sv[1] - sv[2] - sv[3]))
}

/// Same quantity from the characteristic polynomial of `ρ ρ̃` and a quartic
/// solve. Less accurate near repeated roots; kept as a cross-check.
pub fn wootters_charpoly(rho: &DensityMatrix4) -> Result<ConcurrenceValue> {
    check_density(rho)?;
    let m = rho.matrix();
    let y = spin_flip();
    let tilde = y * m.conj() * y;
    let mut roots = quartic_roots(&charpoly(&(*m * tilde))).map(|z| z.re.max(0.0).sqrt());
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(ConcurrenceValue::bare(
        roots[0] - roots[1] - roots[2] - roots[3],
    ))
}

fn x_formula(s: &XStateStandard) -> ConcurrenceValue {
    let c1 = s.w.norm() - (s.x1 * s.x2).max(0.0).sqrt();
    let c2 = s.y.norm() - (s.u * s.v).max(0.0).sqrt();
    ConcurrenceValue {
        value: (2.0 * c1.max(c2).max(0.0)).min(1.0),
        competitors: Some([c1, c2]),
    }
}

/// `2 max(0, |w| − √(x₁x₂), |y| − √(uv))`.
pub fn concurrence_x(s: &XStateStandard) -> Result<ConcurrenceValue> {
    validate_xstate(s)?;
    Ok(x_formula(s))
}

/// [`concurrence_x`] with a caller-chosen validation tolerance, for states
/// carrying integration error.
pub fn concurrence_x_with(s: &XStateStandard, tol: f64) -> Result<ConcurrenceValue> {
    validate_xstate_with(s, tol)?;
    Ok(x_formula(s))
}

/// Closed-form decay of `cos(θ/2)|01⟩ + sin(θ/2)|10⟩`:
/// `|(1+C₀)/2 · e^{−Γ₋} − (1−C₀)/2 · e^{−Γ₊}|` with `C₀ = sin θ`.
pub fn figure_concurrence(tau: f64, q: f64, r: f64, theta: f64) -> Result<ConcurrenceValue> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    let (gm, gp) = gamma_dimless(tau, q, r)?;
    let c0 = theta.sin();
    let value = (0.5 * (1.0 + c0) * (-gm).exp() - 0.5 * (1.0 - c0) * (-gp).exp()).abs();
    Ok(ConcurrenceValue::bare(value))
}

/// Positivity slack accepted on propagated states before the X formula.
pub const TRAJECTORY_TOL: f64 = 1e-9;

/// X-state concurrence of every sample of a reduced trajectory.
pub fn exact_concurrence(tr: &Trajectory) -> Result<Vec<ConcurrenceValue>> {
    tr.states
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let s = standard_from_eigen_unchecked(e);
            concurrence_x_with(&s, TRAJECTORY_TOL).map_err(|source| Error::Sample {
                index,
                source: Box::new(source),
            })
        })
        .collect()
}

/// Convenience for tests and reports: the full X-state density matrix.
pub fn x_density(s: &XStateStandard) -> DensityMatrix4 {
    DensityMatrix4::from_matrix_unchecked(x_matrix(s))
}

/// Single qubit in a Lorentzian bath: `δ = √(1 − 2Γ_M/λ)`, complex when `2Γ_M > λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparatorParams {
    pub gamma_m: f64,
    pub lambda: f64,
    pub delta: C64,
}

impl ComparatorParams {
    pub fn new(gamma_m: f64, lambda: f64) -> Result<Self> {
        if !(gamma_m.is_finite() && gamma_m > 0.0 && lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!(
                "comparator needs Γ_M > 0 and λ > 0, got {gamma_m}, {lambda}"
            )));
        }
        let delta = C64::new(1.0 - 2.0 * gamma_m / lambda, 0.0).sqrt();
        Ok(Self {
            gamma_m,
            lambda,
            delta,
        })
    }
}

/// `G(t) = e^{−λt/2} [cosh(λtδ/2) + sinh(λtδ/2)/δ]`; the concurrence of a
/// state with `C(0)` evolves as `max(0, C(0)·G(t))`.
pub fn comparator_g(t: f64, cp: &ComparatorParams) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    let x = cp.lambda * t;
    let envelope = (-0.5 * x).exp();
    if cp.delta == ZERO {
        return Ok(envelope * (1.0 + 0.5 * x));
    }
    let arg = cp.delta * (0.5 * x);
    let g = envelope * (arg.cosh() + arg.sinh() / cp.delta);
    Ok(g.re)
}
