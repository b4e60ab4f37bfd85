//! Direct integration of the time-local master equation on the full 4×4
//! density matrix:
//!
//! ```text
//! dρ/dt = -i[H, ρ] + Σᵢ ( Kᵢρσᵢ⁺ − σᵢ⁺Kᵢρ + h.c. )
//! Kᵢ(t) = ∫₀ᵗ Φ(s) σᵢ⁻(−s) ds,   Φ(s) = (Γ_M λ / 2) e^{−λs}
//! ```
//!
//! With the Lorentzian correlation the kernel integrates in closed form per
//! eigenbasis entry, so the integrator never nests a quadrature. Nothing here
//! shares code with the reduced equations beyond the Hamiltonian conventions.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Mat4, ZERO};
use crate::model::{
    eigenvector_matrix, hamiltonian_matrix, on_qubit, sigma_minus, DensityMatrix4, EigenbasisState,
    HamiltonianSpectrum, ModelParams, Qubit,
};
use crate::ode::rk4_span;
use crate::propagator::check_grid;

/// Ladder operators on the ψ basis plus the Bohr frequencies `Δ_jk = ε_j − ε_k`.
#[derive(Clone, Debug)]
pub struct EigenOperatorSet {
    /// `[σ₁⁻, σ₂⁻]`
    pub lowering: [Mat4; 2],
    /// `[σ₁⁺, σ₂⁺]`
    pub raising: [Mat4; 2],
    pub bohr: [[f64; 4]; 4],
}

impl EigenOperatorSet {
    pub fn conjugacy_residual(&self) -> f64 {
        (0..2)
            .map(|i| (self.raising[i] - self.lowering[i].adjoint()).max_abs())
            .fold(0.0, f64::max)
    }

    /// `σᵢ⁻(τ) = e^{iHτ} σᵢ⁻ e^{−iHτ}` rebuilt from the Bohr phases, in the ψ basis.
    pub fn heisenberg_lowering(&self, qubit: Qubit, tau: f64) -> Mat4 {
        let m = &self.lowering[index(qubit)];
        Mat4::from_fn(|j, k| m[(j, k)] * C64::from_polar(1.0, self.bohr[j][k] * tau))
    }
}

fn index(q: Qubit) -> usize {
    match q {
        Qubit::First => 0,
        Qubit::Second => 1,
    }
}

pub fn build_eigen_operators(j: f64) -> Result<EigenOperatorSet> {
    if !(j.is_finite() && j >= 0.0) {
        return Err(Error::Domain(format!("J must be finite and >= 0, got {j}")));
    }
    let v = eigenvector_matrix();
    let lower = |q| v.adjoint() * on_qubit(&sigma_minus(), q) * v;
    let lowering = [lower(Qubit::First), lower(Qubit::Second)];
    let raising = [lowering[0].adjoint(), lowering[1].adjoint()];
    let eps = HamiltonianSpectrum::new(j).energies;
    let mut bohr = [[0.0; 4]; 4];
    for (r, row) in bohr.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = eps[r] - eps[c];
        }
    }
    Ok(EigenOperatorSet {
        lowering,
        raising,
        bohr,
    })
}

/// `(1 − e^{−zt}) / z`, stable as `z t → 0`.
fn one_minus_exp_over(z: C64, t: f64) -> C64 {
    let x = z * t;
    if x.norm() < 1e-4 {
        // t (1 − x/2 + x²/6 − x³/24)
        t * (C64::new(1.0, 0.0) - x / 2.0 + x * x / 6.0 - x * x * x / 24.0)
    } else {
        (C64::new(1.0, 0.0) - (-x).exp()) / z
    }
}

fn kernel_unchecked(ops: &EigenOperatorSet, t: f64, p: &ModelParams, qubit: Qubit) -> Mat4 {
    let m = &ops.lowering[index(qubit)];
    let amp = 0.5 * p.gamma_m * p.lambda;
    Mat4::from_fn(|j, k| {
        if m[(j, k)] == ZERO {
            return ZERO;
        }
        let z = C64::new(p.lambda, ops.bohr[j][k]);
        m[(j, k)] * amp * one_minus_exp_over(z, t)
    })
}

/// Memory kernel of one qubit on the ψ basis.
pub fn memory_kernel(t: f64, p: &ModelParams, qubit: Qubit) -> Result<Mat4> {
    p.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "kernel time must be finite and >= 0, got {t}"
        )));
    }
    Ok(kernel_unchecked(&build_eigen_operators(p.j)?, t, p, qubit))
}

/// Kernels and ladder operators already rotated to the product basis.
struct Generator {
    h: Mat4,
    ops: EigenOperatorSet,
    v: Mat4,
    raising_std: [Mat4; 2],
    p: ModelParams,
}

impl Generator {
    fn new(p: &ModelParams) -> Result<Self> {
        let ops = build_eigen_operators(p.j)?;
        let v = eigenvector_matrix();
        let raising_std = [
            v * ops.raising[0] * v.adjoint(),
            v * ops.raising[1] * v.adjoint(),
        ];
        Ok(Self {
            h: hamiltonian_matrix(p.j),
            ops,
            v,
            raising_std,
            p: *p,
        })
    }

    fn rhs(&self, t: f64, rho: &Mat4) -> Mat4 {
        let mut out = (Mat4::commutator(&self.h, rho)).scale(C64::new(0.0, -1.0));
        for (i, q) in [Qubit::First, Qubit::Second].into_iter().enumerate() {
            let k = self.v * kernel_unchecked(&self.ops, t, &self.p, q) * self.v.adjoint();
            let sp = &self.raising_std[i];
            let k_rho = k * *rho;
            let a = k_rho * *sp - *sp * k_rho;
            out += a + a.adjoint();
        }
        out
    }
}

/// Residual above which an input to [`master_rhs`] is rejected as non-Hermitian.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Time derivative of `rho` (product basis) at time `t`.
pub fn master_rhs(t: f64, rho: &Mat4, p: &ModelParams) -> Result<Mat4> {
    p.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    let residual = rho.hermiticity_residual();
    if residual > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(Generator::new(p)?.rhs(t, rho))
}

/// Per-sample health of the integrated density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub trace_drift: f64,
    pub hermiticity: f64,
    pub leakage: f64,
    /// Smallest eigenvalue; may dip below zero for time-local generators.
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug)]
pub struct MasterTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Mat4>,
    pub diagnostics: Vec<Diagnostics>,
    pub step: f64,
}

impl MasterTrajectory {
    /// Worst value of each diagnostic over the run.
    pub fn worst(&self) -> Diagnostics {
        self.diagnostics.iter().fold(
            Diagnostics {
                trace_drift: 0.0,
                hermiticity: 0.0,
                leakage: 0.0,
                min_eigenvalue: f64::INFINITY,
            },
            |acc, d| Diagnostics {
                trace_drift: acc.trace_drift.max(d.trace_drift),
                hermiticity: acc.hermiticity.max(d.hermiticity),
                leakage: acc.leakage.max(d.leakage),
                min_eigenvalue: acc.min_eigenvalue.min(d.min_eigenvalue),
            },
        )
    }

    /// Reads `(a, b, e, d, c, h)` off each sample's ψ-basis matrix.
    pub fn eigen_states(&self) -> Vec<EigenbasisState> {
        self.states.iter().map(eigen_parameters).collect()
    }
}

pub fn eigen_parameters(rho: &Mat4) -> EigenbasisState {
    let m = DensityMatrix4::from_matrix_unchecked(*rho).in_eigenbasis();
    EigenbasisState {
        a: m[(0, 0)].re,
        b: m[(1, 1)].re,
        e: m[(2, 2)].re,
        d: m[(3, 3)].re,
        c: m[(0, 3)],
        h: m[(1, 2)],
    }
}

/// Fixed RK4 step `min(1/λ, 1/(3J), 1/Γ_M) / 50`.
pub fn default_step(p: &ModelParams) -> f64 {
    let mut s = (1.0 / p.lambda).min(1.0 / p.gamma_m);
    if p.j > 0.0 {
        s = s.min(1.0 / (3.0 * p.j));
    }
    s / 50.0
}

pub fn integrate_master(
    rho0: &DensityMatrix4,
    p: &ModelParams,
    grid: &[f64],
) -> Result<MasterTrajectory> {
    integrate_master_with_step(rho0, p, grid, None)
}

/// As [`integrate_master`] with an explicit step, which may not exceed the default.
pub fn integrate_master_with_step(
    rho0: &DensityMatrix4,
    p: &ModelParams,
    grid: &[f64],
    step: Option<f64>,
) -> Result<MasterTrajectory> {
    p.validate()?;
    check_grid(grid)?;
    let limit = default_step(p);
    let step = step.unwrap_or(limit);
    if !(step > 0.0 && step <= limit * (1.0 + 1e-12)) {
        return Err(Error::StepTooCoarse { step, limit });
    }
    let gen = Generator::new(p)?;
    let mut f = |t: f64, y: &Mat4| gen.rhs(t, y);

    let mut rho = *rho0.matrix();
    let mut t_prev = 0.0;
    let mut states = Vec::with_capacity(grid.len());
    let mut diagnostics = Vec::with_capacity(grid.len());
    for &t in grid {
        rho = rk4_span(&mut f, t_prev, t, rho, step);
        t_prev = t;
        if !rho.is_finite() {
            return Err(Error::NonFinite {
                t,
                what: "density matrix".into(),
            });
        }
        let wrapped = DensityMatrix4::from_matrix_unchecked(rho);
        diagnostics.push(Diagnostics {
            trace_drift: (wrapped.trace() - 1.0).norm(),
            hermiticity: wrapped.hermiticity_residual(),
            leakage: wrapped.off_x_leakage(),
            min_eigenvalue: hermitian_eigenvalues(&hermitian_part(&rho))[0],
        });
        states.push(rho);
    }
    Ok(MasterTrajectory {
        times: grid.to_vec(),
        states,
        diagnostics,
        step,
    })
}

fn hermitian_part(m: &Mat4) -> Mat4 {
    (*m + m.adjoint()).scale_re(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, ONE};
    use crate::model::{density_matrix, make_pure_xstate, DimensionlessParams, XStateStandard};
    use crate::quadrature::{integrate, QuadOptions};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn params() -> Vec<ModelParams> {
        [(1.0, 1.0), (0.0, 100.0), (5.0, 0.04), (0.3, 2.0)]
            .iter()
            .map(|&(q, r)| DimensionlessParams::new(q, r).unwrap().to_model())
            .collect()
    }

    #[test]
    fn ladder_matrix_elements() {
        let ops = build_eigen_operators(1.0).unwrap();
        assert!((ops.raising[0][(0, 1)] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(ops.conjugacy_residual(), 0.0);
        // excitation number of ψ1..ψ4 is 2, 1, 1, 0
        let n = [2, 1, 1, 0];
        for op in &ops.raising {
            for r in 0..4 {
                for c in 0..4 {
                    if n[r] != n[c] + 1 {
                        assert_eq!(op[(r, c)], ZERO);
                    }
                }
            }
        }
        assert!(build_eigen_operators(-1.0).is_err());
    }

    #[test]
    fn bohr_phases_match_direct_heisenberg_evolution() {
        let j = 0.7;
        let ops = build_eigen_operators(j).unwrap();
        let h = hamiltonian_matrix(j);
        let v = eigenvector_matrix();
        for q in [Qubit::First, Qubit::Second] {
            for tau in [0.0, 0.3, 1.1, 4.0, -2.5] {
                let u = expm(&h.scale(C64::new(0.0, tau)));
                let direct = u * on_qubit(&sigma_minus(), q) * u.adjoint();
                let rebuilt = v * ops.heisenberg_lowering(q, tau) * v.adjoint();
                assert!((direct - rebuilt).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_matches_quadrature() {
        let h_of = |p: &ModelParams| hamiltonian_matrix(p.j);
        for p in params() {
            let h = h_of(&p);
            let v = eigenvector_matrix();
            for q in [Qubit::First, Qubit::Second] {
                for t in [0.0, 0.05, 0.7, 3.0] {
                    let k = memory_kernel(t, &p, q).unwrap();
                    if t == 0.0 {
                        assert_eq!(k.max_abs(), 0.0);
                        continue;
                    }
                    let sm = on_qubit(&sigma_minus(), q);
                    // σ⁻(−s) from the matrix exponential, rotated to the ψ basis
                    let entry = |r: usize, c: usize, part: fn(C64) -> f64| {
                        integrate(
                            |s| {
                                let u = expm(&h.scale(C64::new(0.0, -s)));
                                let back = v.adjoint() * (u * sm * u.adjoint()) * v;
                                let phi = 0.5 * p.gamma_m * p.lambda * (-p.lambda * s).exp();
                                part(back[(r, c)] * phi)
                            },
                            0.0,
                            t,
                            QuadOptions::abs(1e-12),
                        )
                        .unwrap()
                        .value
                    };
                    for r in 0..4 {
                        for c in 0..4 {
                            let re = entry(r, c, |z| z.re);
                            let im = entry(r, c, |z| z.im);
                            assert!(
                                (k[(r, c)] - C64::new(re, im)).norm() < 1e-10,
                                "{r}{c} t={t}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_limits() {
        let p = ModelParams::new(0.0, 3.0, 1.0).unwrap();
        let k = memory_kernel(2.0, &p, Qubit::First).unwrap();
        let ops = build_eigen_operators(0.0).unwrap();
        let expect = ops.lowering[0].scale_re(0.5 * (1.0 - (-6f64).exp()));
        assert!((k - expect).max_abs() < 1e-15);

        let p = ModelParams::new(0.8, 0.5, 1.0).unwrap();
        let ops = build_eigen_operators(0.8).unwrap();
        let far = memory_kernel(200.0, &p, Qubit::Second).unwrap();
        let limit =
            Mat4::from_fn(|r, c| ops.lowering[1][(r, c)] * 0.25 / C64::new(0.5, ops.bohr[r][c]));
        assert!((far - limit).max_abs() < 1e-14);
        assert!(memory_kernel(-1.0, &p, Qubit::First).is_err());
    }

    #[test]
    fn rhs_at_time_zero_is_unitary() {
        let p = params()[0];
        let rho = *density_matrix(&make_pure_xstate(0.4).unwrap())
            .unwrap()
            .matrix();
        let d = master_rhs(0.0, &rho, &p).unwrap();
        let expect = Mat4::commutator(&hamiltonian_matrix(p.j), &rho).scale(C64::new(0.0, -1.0));
        assert_eq!(d, expect);
        let mut bad = rho;
        bad.0[0][1] = ONE;
        assert!(matches!(
            master_rhs(0.0, &bad, &p),
            Err(Error::NotHermitian { .. })
        ));
    }

    fn hermitian_strategy() -> impl Strategy<Value = Mat4> {
        prop::array::uniform32(-1.0f64..1.0).prop_map(|x| {
            let m = Mat4::from_fn(|r, c| C64::new(x[4 * r + c], x[16 + 4 * r + c]));
            hermitian_part(&m)
        })
    }

    proptest! {
        #[test]
        fn rhs_is_hermitian_and_traceless(rho in hermitian_strategy(), t in 0.0f64..5.0, k in 0usize..4) {
            let d = master_rhs(t, &rho, &params()[k]).unwrap();
            prop_assert!(d.hermiticity_residual() < 1e-13);
            prop_assert!(d.trace().norm() < 1e-13);
        }
    }

    #[test]
    fn independent_qubit_vacuum_decay() {
        // J = 0, λ ≫ Γ_M: |10⟩ relaxes at the bare rate Γ_M
        let p = ModelParams::new(0.0, 200.0, 1.0).unwrap();
        let rho0 = density_matrix(&XStateStandard {
            u: 0.0,
            x1: 0.0,
            x2: 1.0,
            v: 0.0,
            w: ZERO,
            y: ZERO,
        })
        .unwrap();
        let grid = [0.5, 1.0, 2.0, 4.0];
        let tr = integrate_master(&rho0, &p, &grid).unwrap();
        for (t, rho) in grid.iter().zip(&tr.states) {
            let excited = rho[(2, 2)].re;
            // second-order decay exponent Γ_M (t − (1 − e^{−λt})/λ)
            let exact = (-(t - (1.0 - (-200.0 * t).exp()) / 200.0)).exp();
            assert!((excited - exact).abs() < 1e-9, "t={t} {excited}");
            assert!((excited / (-t).exp() - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn health_over_long_runs() {
        let grid: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        for p in params() {
            for theta in [0.0, 1.0, std::f64::consts::PI] {
                let rho0 = density_matrix(&make_pure_xstate(theta).unwrap()).unwrap();
                let w = integrate_master(&rho0, &p, &grid).unwrap().worst();
                assert!(
                    w.trace_drift < 1e-7 && w.hermiticity < 1e-12 && w.leakage < 1e-9,
                    "{w:?}"
                );
            }
        }
    }

    #[test]
    fn step_guard() {
        let p = params()[0];
        let rho0 = density_matrix(&make_pure_xstate(1.0).unwrap()).unwrap();
        assert!(matches!(
            integrate_master_with_step(&rho0, &p, &[1.0], Some(1.0)),
            Err(Error::StepTooCoarse { .. })
        ));
        assert!(integrate_master(&rho0, &p, &[1.0, 0.5]).is_err());
    }
}
