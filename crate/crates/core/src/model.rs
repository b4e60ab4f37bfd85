//! States, parameters, and the analytic spectrum of the isotropic Heisenberg
//! pair `H = J[σ1⁺σ2⁻ + σ1⁻σ2⁺ + σ1ᶻσ2ᶻ]`.
//!
//! Product basis order is `|00>, |01>, |10>, |11>` with `|0> = |↑>`. The
//! eigenbasis is
//!
//! | index | energy | vector                 |
//! |-------|--------|------------------------|
//! | ψ1    | J      | \|00>                  |
//! | ψ2    | 0      | (\|01> + \|10>)/√2     |
//! | ψ3    | -2J    | (\|01> - \|10>)/√2     |
//! | ψ4    | J      | \|11>                  |
//!
//! X states keep this block structure for all times, so they are carried
//! around either as the six standard-basis parameters [`XStateStandard`] or as
//! the six eigenbasis parameters [`EigenbasisState`].

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};
use crate::linalg::{Mat2, Mat4, ONE, ZERO};

/// Tolerance used for states built by this crate.
pub const STRICT_TOL: f64 = 1e-12;

/// Standard-basis X state:
///
/// ```text
/// [ u   0   0   w ]
/// [ 0   x1  y   0 ]
/// [ 0   y*  x2  0 ]
/// [ w*  0   0   v ]
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateStandard {
    pub u: f64,
    pub x1: f64,
    pub x2: f64,
    pub v: f64,
    pub w: C64,
    pub y: C64,
}

/// X state expanded on the Hamiltonian eigenbasis: populations `a, b, e, d`
/// of ψ1..ψ4 and coherences `c = <ψ1|ρ|ψ4>`, `h = <ψ2|ρ|ψ3>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenbasisState {
    pub a: f64,
    pub b: f64,
    pub e: f64,
    pub d: f64,
    pub c: C64,
    pub h: C64,
}

/// A 4×4 density matrix in the product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4(Mat4);

/// Coupling `J`, bath width `lambda` and Markovian rate `gamma_m`, all in
/// inverse time units (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub lambda: f64,
    pub gamma_m: f64,
}

/// `Q = J/λ` and `R = λ/Γ_M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams {
    pub q: f64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpectrum {
    pub energies: [f64; 4],
    pub eigenvectors: [[C64; 4]; 4],
}

fn check_nonneg(constraint: &'static str, value: f64, tol: f64) -> Result<()> {
    if value < -tol || !value.is_finite() {
        return Err(Error::StateViolation {
            constraint,
            residual: -value,
        });
    }
    Ok(())
}

impl XStateStandard {
    pub fn trace(&self) -> f64 {
        self.u + self.x1 + self.x2 + self.v
    }
}

/// Checks normalization and positivity within `tol`, reporting the first
/// violated constraint.
pub fn validate_xstate_with(s: &XStateStandard, tol: f64) -> Result<()> {
    let finite = [s.u, s.x1, s.x2, s.v, s.w.re, s.w.im, s.y.re, s.y.im]
        .iter()
        .all(|x| x.is_finite());
    if !finite {
        return Err(Error::StateViolation {
            constraint: "finite entries",
            residual: f64::NAN,
        });
    }
    for p in [s.u, s.x1, s.x2, s.v] {
        check_nonneg("nonnegative populations", p, tol)?;
    }
    let trace_res = s.trace() - 1.0;
    if trace_res.abs() > tol {
        return Err(Error::StateViolation {
            constraint: "trace",
            residual: trace_res,
        });
    }
    let uv = (s.u.max(0.0) * s.v.max(0.0)).sqrt();
    check_nonneg("sqrt(uv) >= |w|", uv - s.w.norm(), tol)?;
    let xx = (s.x1.max(0.0) * s.x2.max(0.0)).sqrt();
    check_nonneg("sqrt(x1 x2) >= |y|", xx - s.y.norm(), tol)?;
    Ok(())
}

pub fn validate_xstate(s: &XStateStandard) -> Result<()> {
    validate_xstate_with(s, STRICT_TOL)
}

impl EigenbasisState {
    pub fn trace(&self) -> f64 {
        self.a + self.b + self.e + self.d
    }

    pub fn validate_with(&self, tol: f64) -> Result<()> {
        let finite = [
            self.a, self.b, self.e, self.d, self.c.re, self.c.im, self.h.re, self.h.im,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::StateViolation {
                constraint: "finite entries",
                residual: f64::NAN,
            });
        }
        for p in [self.a, self.b, self.e, self.d] {
            check_nonneg("nonnegative populations", p, tol)?;
        }
        let trace_res = self.trace() - 1.0;
        if trace_res.abs() > tol {
            return Err(Error::StateViolation {
                constraint: "trace",
                residual: trace_res,
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(STRICT_TOL)
    }

    /// Largest modulus difference over the six parameters.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.a - other.a).abs(),
            (self.b - other.b).abs(),
            (self.e - other.e).abs(),
            (self.d - other.d).abs(),
            (self.c - other.c).norm(),
            (self.h - other.h).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `cos(θ/2)|01> + sin(θ/2)|10>`, whose concurrence is `|sin θ|`.
pub fn make_pure_xstate(theta: f64) -> Result<XStateStandard> {
    if !(0.0..=TAU).contains(&theta) {
        return Err(domain(format!("theta = {theta} outside [0, 2π]")));
    }
    let (s, c) = (0.5 * theta).sin_cos();
    Ok(XStateStandard {
        u: 0.0,
        x1: c * c,
        x2: s * s,
        v: 0.0,
        w: ZERO,
        y: C64::new(c * s, 0.0),
    })
}

/// Map without validation; used where the caller already vouched for `s`.
pub(crate) fn eigen_from_standard_unchecked(s: &XStateStandard) -> EigenbasisState {
    let sum = s.x1 + s.x2;
    let two_re_y = 2.0 * s.y.re;
    EigenbasisState {
        a: s.u,
        b: 0.5 * (sum + two_re_y),
        e: 0.5 * (sum - two_re_y),
        d: s.v,
        c: s.w,
        // (x1 - x2 - y + y*)/2
        h: C64::new(0.5 * (s.x1 - s.x2), -s.y.im),
    }
}

pub(crate) fn standard_from_eigen_unchecked(e: &EigenbasisState) -> XStateStandard {
    let two_re_h = 2.0 * e.h.re;
    XStateStandard {
        u: e.a,
        x1: 0.5 * (e.b + two_re_h + e.e),
        x2: 0.5 * (e.b - two_re_h + e.e),
        v: e.d,
        w: e.c,
        // (b - h + h* - e)/2
        y: C64::new(0.5 * (e.b - e.e), -e.h.im),
    }
}

pub fn eigen_from_standard(s: &XStateStandard) -> Result<EigenbasisState> {
    validate_xstate(s)?;
    Ok(eigen_from_standard_unchecked(s))
}

pub fn standard_from_eigen(e: &EigenbasisState) -> Result<XStateStandard> {
    e.validate()?;
    Ok(standard_from_eigen_unchecked(e))
}

pub(crate) fn x_matrix(s: &XStateStandard) -> Mat4 {
    let mut m = Mat4::from_real_diag([s.u, s.x1, s.x2, s.v]);
    m[(0, 3)] = s.w;
    m[(3, 0)] = s.w.conj();
    m[(1, 2)] = s.y;
    m[(2, 1)] = s.y.conj();
    m
}

pub fn density_matrix(s: &XStateStandard) -> Result<DensityMatrix4> {
    validate_xstate(s)?;
    Ok(DensityMatrix4(x_matrix(s)))
}

impl DensityMatrix4 {
    /// Wraps a matrix after checking Hermiticity and unit trace within `tol`.
    pub fn new(m: Mat4, tol: f64) -> Result<Self> {
        let herm = m.hermiticity_residual();
        if herm > tol || !m.is_finite() {
            return Err(Error::NotHermitian { residual: herm });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::StateViolation {
                constraint: "trace",
                residual: tr.re - 1.0,
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Mat4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.0.hermiticity_residual()
    }

    /// Largest modulus among entries off the diagonal and anti-diagonal.
    pub fn off_x_leakage(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(self.0[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Reads the X-state parameters, ignoring any off-X entries.
    pub fn x_part(&self) -> XStateStandard {
        let m = &self.0;
        XStateStandard {
            u: m[(0, 0)].re,
            x1: m[(1, 1)].re,
            x2: m[(2, 2)].re,
            v: m[(3, 3)].re,
            w: m[(0, 3)],
            y: m[(1, 2)],
        }
    }

    /// Matrix elements `<ψi|ρ|ψj>` on the Hamiltonian eigenbasis.
    pub fn in_eigenbasis(&self) -> Mat4 {
        let v = eigenvector_matrix();
        v.adjoint() * self.0 * v
    }
}

/// Columns are ψ1..ψ4 in the product basis.
pub fn eigenvector_matrix() -> Mat4 {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut v = Mat4::zeros();
    v[(0, 0)] = ONE;
    v[(1, 1)] = s;
    v[(2, 1)] = s;
    v[(1, 2)] = s;
    v[(2, 2)] = -s;
    v[(3, 3)] = ONE;
    v
}

pub(crate) fn sigma_plus() -> Mat2 {
    [[ZERO, ONE], [ZERO, ZERO]]
}

pub(crate) fn sigma_minus() -> Mat2 {
    [[ZERO, ZERO], [ONE, ZERO]]
}

pub(crate) fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// Single-qubit operator lifted onto qubit 1 or 2.
pub(crate) fn on_qubit(op: &Mat2, qubit: Qubit) -> Mat4 {
    match qubit {
        Qubit::First => Mat4::kron(op, &identity2()),
        Qubit::Second => Mat4::kron(&identity2(), op),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    First,
    Second,
}

/// The 4×4 Hamiltonian assembled term by term from Pauli products.
pub fn hamiltonian_matrix(j: f64) -> Mat4 {
    let sz: Mat2 = [[ONE, ZERO], [ZERO, -ONE]];
    let sp = sigma_plus();
    let sm = sigma_minus();
    let flip = Mat4::kron(&sp, &sm) + Mat4::kron(&sm, &sp);
    let zz = Mat4::kron(&sz, &sz);
    (flip + zz).scale_re(j)
}

impl HamiltonianSpectrum {
    pub fn new(j: f64) -> Self {
        let v = eigenvector_matrix();
        let mut eigenvectors = [[ZERO; 4]; 4];
        for (k, vec) in eigenvectors.iter_mut().enumerate() {
            for (i, x) in vec.iter_mut().enumerate() {
                *x = v[(i, k)];
            }
        }
        Self {
            energies: [j, 0.0, -2.0 * j, j],
            eigenvectors,
        }
    }

    /// `max_i |H ψi - εi ψi|` against the assembled Hamiltonian.
    pub fn residual(&self, j: f64) -> f64 {
        let h = hamiltonian_matrix(j);
        let mut worst: f64 = 0.0;
        for (psi, &eps) in self.eigenvectors.iter().zip(&self.energies) {
            let hp = h.apply(psi);
            for i in 0..4 {
                worst = worst.max((hp[i] - psi[i] * eps).norm());
            }
        }
        worst
    }

    /// `max |<ψi|ψj> - δij|`
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let ip: C64 = (0..4)
                    .map(|k| self.eigenvectors[i][k].conj() * self.eigenvectors[j][k])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}

impl ModelParams {
    pub fn new(j: f64, lambda: f64, gamma_m: f64) -> Result<Self> {
        let p = Self { j, lambda, gamma_m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.j >= 0.0) {
            return Err(domain(format!("J = {} must be finite and >= 0", self.j)));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(domain(format!(
                "lambda = {} must be finite and > 0",
                self.lambda
            )));
        }
        if !(self.gamma_m.is_finite() && self.gamma_m > 0.0) {
            return Err(domain(format!(
                "gamma_M = {} must be finite and > 0",
                self.gamma_m
            )));
        }
        Ok(())
    }

    pub fn dimensionless(&self) -> DimensionlessParams {
        DimensionlessParams {
            q: self.j / self.lambda,
            r: self.lambda / self.gamma_m,
        }
    }

    /// Shortest of the bath, relaxation and system timescales
    /// `min(1/λ, 1/(3J), 1/Γ_M)`.
    pub fn fastest_timescale(&self) -> f64 {
        let mut t = (1.0 / self.lambda).min(1.0 / self.gamma_m);
        if self.j > 0.0 {
            t = t.min(1.0 / (3.0 * self.j));
        }
        t
    }
}

impl DimensionlessParams {
    pub fn new(q: f64, r: f64) -> Result<Self> {
        let p = Self { q, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.q >= 0.0) {
            return Err(domain(format!("Q = {} must be finite and >= 0", self.q)));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(domain(format!("R = {} must be finite and > 0", self.r)));
        }
        Ok(())
    }

    /// Model parameters in units where `Γ_M = 1`, so that `t = τ`.
    pub fn to_model(&self) -> ModelParams {
        ModelParams {
            j: self.q * self.r,
            lambda: self.r,
            gamma_m: 1.0,
        }
    }

    /// `τ′ = τ / Q²`; undefined at `Q = 0`.
    pub fn tau_prime_from_tau(&self, tau: f64) -> Result<f64> {
        if self.q <= 0.0 {
            return Err(domain("rescaled time is undefined for Q = 0"));
        }
        Ok(tau / (self.q * self.q))
    }

    pub fn tau_from_tau_prime(&self, tau_prime: f64) -> Result<f64> {
        if self.q <= 0.0 {
            return Err(domain("rescaled time is undefined for Q = 0"));
        }
        Ok(tau_prime * self.q * self.q)
    }
}

/// `τ = Γ_M t`
pub fn tau_from_time(t: f64, p: &ModelParams) -> f64 {
    p.gamma_m * t
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn pure_state_examples() {
        let s = make_pure_xstate(0.0).unwrap();
        assert_eq!((s.u, s.x1, s.x2, s.v), (0.0, 1.0, 0.0, 0.0));
        assert_eq!(s.y, ZERO);
        let s = make_pure_xstate(FRAC_PI_2).unwrap();
        assert!(close(s.x1, 0.5) && close(s.x2, 0.5) && close(s.y.re, 0.5));
        let s = make_pure_xstate(PI).unwrap();
        assert!(close(s.x2, 1.0) && s.x1 < 1e-30 && s.y.norm() < 1e-16);
        assert!(make_pure_xstate(-0.1).is_err());
        assert!(make_pure_xstate(7.0).is_err());
    }

    #[test]
    fn validation_examples() {
        let werner = XStateStandard {
            u: 0.05,
            x1: 0.45,
            x2: 0.45,
            v: 0.05,
            w: ZERO,
            y: C64::new(0.4, 0.0),
        };
        validate_xstate(&werner).unwrap();

        let bad_w = XStateStandard {
            u: 0.0,
            x1: 0.5,
            x2: 0.5,
            v: 0.0,
            w: C64::new(0.1, 0.0),
            y: ZERO,
        };
        match validate_xstate(&bad_w) {
            Err(Error::StateViolation {
                constraint,
                residual,
            }) => {
                assert_eq!(constraint, "sqrt(uv) >= |w|");
                assert!((residual - 0.1).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }

        let short = XStateStandard {
            u: 0.2,
            x1: 0.3,
            x2: 0.3,
            v: 0.1,
            w: ZERO,
            y: ZERO,
        };
        match validate_xstate(&short) {
            Err(Error::StateViolation { constraint, .. }) => assert_eq!(constraint, "trace"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eigen_map_examples() {
        let e = eigen_from_standard(&make_pure_xstate(FRAC_PI_2).unwrap()).unwrap();
        assert!(close(e.b, 1.0) && close(e.e, 0.0) && e.a == 0.0 && e.d == 0.0);
        assert!(e.c == ZERO && e.h.norm() < 1e-15);

        let e = eigen_from_standard(&make_pure_xstate(PI).unwrap()).unwrap();
        assert!((e.b - 0.5).abs() < 1e-15 && (e.e - 0.5).abs() < 1e-15);
        assert!((e.h.re + 0.5).abs() < 1e-16 && e.h.im == 0.0);

        let bell = XStateStandard {
            u: 0.5,
            x1: 0.0,
            x2: 0.0,
            v: 0.5,
            w: C64::new(0.5, 0.0),
            y: ZERO,
        };
        let e = eigen_from_standard(&bell).unwrap();
        assert_eq!((e.a, e.b, e.e, e.d), (0.5, 0.0, 0.0, 0.5));
        assert_eq!(e.c, C64::new(0.5, 0.0));
        assert_eq!(e.h, ZERO);
    }

    #[test]
    fn inverse_map_examples() {
        let e = EigenbasisState {
            a: 0.0,
            b: 1.0,
            e: 0.0,
            d: 0.0,
            c: ZERO,
            h: ZERO,
        };
        let s = standard_from_eigen(&e).unwrap();
        assert_eq!((s.x1, s.x2, s.y), (0.5, 0.5, C64::new(0.5, 0.0)));

        let beta = 0.3;
        let e = EigenbasisState {
            a: 0.0,
            b: 0.5,
            e: 0.5,
            d: 0.0,
            c: ZERO,
            h: C64::new(0.0, beta),
        };
        let s = standard_from_eigen(&e).unwrap();
        assert_eq!((s.x1, s.x2), (0.5, 0.5));
        assert_eq!(s.y, C64::new(0.0, -beta));
    }

    #[test]
    fn density_matrix_examples() {
        let ground = XStateStandard {
            u: 1.0,
            x1: 0.0,
            x2: 0.0,
            v: 0.0,
            w: ZERO,
            y: ZERO,
        };
        let m = density_matrix(&ground).unwrap();
        assert_eq!(*m.matrix(), Mat4::from_real_diag([1.0, 0.0, 0.0, 0.0]));

        let bell = XStateStandard {
            u: 0.5,
            x1: 0.0,
            x2: 0.0,
            v: 0.5,
            w: C64::new(0.5, 0.0),
            y: ZERO,
        };
        let m = density_matrix(&bell).unwrap();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(m.matrix()[(i, j)], C64::new(0.5, 0.0));
        }
        assert_eq!(m.off_x_leakage(), 0.0);
    }

    #[test]
    fn spectrum_matches_hamiltonian() {
        for j in [0.0, 0.3, 1.0, 7.5] {
            let spec = HamiltonianSpectrum::new(j);
            assert_eq!(spec.energies, [j, 0.0, -2.0 * j, j]);
            assert!(spec.residual(j) < 1e-14);
            assert!(spec.orthonormality_residual() < 1e-14);
        }
    }

    #[test]
    fn eigenbasis_projection_of_x_matrix() {
        let s = XStateStandard {
            u: 0.1,
            x1: 0.3,
            x2: 0.2,
            v: 0.4,
            w: C64::new(0.05, 0.1),
            y: C64::new(0.1, -0.15),
        };
        let rho = density_matrix(&s).unwrap();
        let m = rho.in_eigenbasis();
        let e = eigen_from_standard(&s).unwrap();
        assert!((m[(0, 0)].re - e.a).abs() < 1e-15);
        assert!((m[(1, 1)].re - e.b).abs() < 1e-15);
        assert!((m[(2, 2)].re - e.e).abs() < 1e-15);
        assert!((m[(3, 3)].re - e.d).abs() < 1e-15);
        assert!((m[(0, 3)] - e.c).norm() < 1e-15);
        assert!((m[(1, 2)] - e.h).norm() < 1e-15);
    }

    #[test]
    fn dimensionless_conversions() {
        let p = ModelParams::new(2.0, 4.0, 0.5).unwrap();
        let d = p.dimensionless();
        assert_eq!((d.q, d.r), (0.5, 8.0));
        let back = d.to_model();
        assert_eq!((back.j, back.lambda, back.gamma_m), (4.0, 8.0, 1.0));
        assert!(DimensionlessParams::new(0.0, 1.0)
            .unwrap()
            .tau_prime_from_tau(1.0)
            .is_err());
        assert_eq!(
            DimensionlessParams::new(2.0, 1.0)
                .unwrap()
                .tau_from_tau_prime(0.5)
                .unwrap(),
            2.0
        );
        assert!(ModelParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0).is_err());
        assert!(DimensionlessParams::new(1.0, 0.0).is_err());
    }

    pub(crate) fn xstate_strategy() -> impl Strategy<Value = XStateStandard> {
        (
            prop::array::uniform4(0.0f64..1.0),
            0.0f64..1.0,
            0.0f64..1.0,
            0.0f64..TAU,
            0.0f64..TAU,
        )
            .prop_filter("nonzero weights", |(p, ..)| p.iter().sum::<f64>() > 1e-3)
            .prop_map(|(p, fw, fy, pw, py)| {
                let n: f64 = p.iter().sum();
                let [u, x1, x2, v] = p.map(|x| x / n);
                XStateStandard {
                    u,
                    x1,
                    x2,
                    v,
                    w: C64::from_polar(fw * (u * v).sqrt(), pw),
                    y: C64::from_polar(fy * (x1 * x2).sqrt(), py),
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn round_trip_is_identity(s in xstate_strategy()) {
            let e = eigen_from_standard(&s).unwrap();
            let back = standard_from_eigen(&e).unwrap();
            prop_assert!((back.u - s.u).abs() < 1e-14);
            prop_assert!((back.x1 - s.x1).abs() < 1e-14);
            prop_assert!((back.x2 - s.x2).abs() < 1e-14);
            prop_assert!((back.v - s.v).abs() < 1e-14);
            prop_assert!((back.w - s.w).norm() < 1e-14);
            prop_assert!((back.y - s.y).norm() < 1e-14);
            // affine with unit row sums
            prop_assert!((e.trace() - s.trace()).abs() < 1e-15);
        }

        #[test]
        fn density_matrix_has_unit_trace(s in xstate_strategy()) {
            let m = density_matrix(&s).unwrap();
            prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(m.trace().im.abs() < 1e-14);
            prop_assert!(m.hermiticity_residual() < 1e-14);
        }
    }
}
