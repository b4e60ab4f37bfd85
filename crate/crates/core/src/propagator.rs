//! Evolution of an X state through the reduced equations for its eigenbasis
//! parameters:
//!
//! ```text
//! c(t)  = c(0) exp(-i S₁(t) - Γ(t))
//! h(t)  = h(0) exp(-i S₂(t) - Γ(t))
//! b'    = -η b + η a
//! e'    = -Σ e + Σ a
//! d'    =  η b + Σ e
//! ```
//!
//! The upper population `a` decays as `a(0) e^{-Γ}` in
//! [`EvolutionMode::PaperLiteral`] and as `a(0) e^{-2Γ}` (rate `η + Σ`) in
//! [`EvolutionMode::TraceConserving`]. Only the latter keeps `a+b+e+d = 1`
//! when `a(0) ≠ 0`; the two coincide otherwise.
//!
//! [`evolve_eigen`] solves the linear equations with integrating factors and
//! adaptive quadrature; [`evolve_reduced_numeric`] integrates the same
//! right-hand side with fixed-step RK4 as an independent check.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{EigenbasisState, ModelParams};
use crate::ode::rk4_span;
use crate::quadrature::{integrate, QuadOptions};
use crate::rates::{
    bundle_unchecked, exponents, instantaneous, phase_rate_bound, transition_rates,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvolutionMode {
    PaperLiteral,
    TraceConserving,
}

impl EvolutionMode {
    pub const ALL: [EvolutionMode; 2] =
        [EvolutionMode::PaperLiteral, EvolutionMode::TraceConserving];

    pub fn as_str(&self) -> &'static str {
        match self {
            EvolutionMode::PaperLiteral => "paper-literal",
            EvolutionMode::TraceConserving => "trace-conserving",
        }
    }

    /// Multiplier `k` in `a(t) = a(0) e^{-kΓ(t)}`.
    fn a_exponent(&self) -> f64 {
        match self {
            EvolutionMode::PaperLiteral => 1.0,
            EvolutionMode::TraceConserving => 2.0,
        }
    }
}

impl fmt::Display for EvolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// States reported at the requested times.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<EigenbasisState>,
    pub mode: EvolutionMode,
    pub params: ModelParams,
    /// `d(0) + ∫₀ᵗ (η b + Σ e)`; equal to `states[k].d` in paper-literal mode.
    pub d_quadrature: Vec<f64>,
}

pub const TRACE_TOL: f64 = 1e-8;
pub const BOUNDS_TOL: f64 = 1e-8;

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Population bounds (and the unit trace in trace-conserving mode).
    pub fn check_invariants(&self) -> Result<()> {
        for (index, s) in self.states.iter().enumerate() {
            let wrap = |source: Error| Error::Sample {
                index,
                source: Box::new(source),
            };
            let mut bounded = vec![("b", s.b), ("e", s.e)];
            if self.mode == EvolutionMode::TraceConserving {
                let tr = s.trace() - 1.0;
                if tr.abs() >= TRACE_TOL {
                    return Err(wrap(Error::StateViolation {
                        constraint: "trace",
                        residual: tr,
                    }));
                }
                bounded.push(("d", s.d));
            }
            for (_, x) in bounded {
                if !(-BOUNDS_TOL..=1.0 + BOUNDS_TOL).contains(&x) {
                    return Err(wrap(Error::StateViolation {
                        constraint: "population in [0, 1]",
                        residual: x,
                    }));
                }
            }
        }
        Ok(())
    }

    /// Largest `|d_quadrature - d|` over the samples.
    pub fn d_residual(&self) -> f64 {
        self.states
            .iter()
            .zip(&self.d_quadrature)
            .map(|(s, dq)| (s.d - dq).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Empty("time grid"));
    }
    for (index, &t) in grid.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "grid time {t} at index {index} must be finite and >= 0"
            )));
        }
        if index > 0 && t <= grid[index - 1] {
            return Err(Error::NonMonotoneGrid { index });
        }
    }
    Ok(())
}

const QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-13,
    max_intervals: 4000,
};

struct Reduced<'a> {
    p: &'a ModelParams,
    mode: EvolutionMode,
    a0: f64,
}

impl Reduced<'_> {
    fn a_at(&self, z: f64) -> f64 {
        if self.a0 == 0.0 {
            return 0.0;
        }
        let (gm, gp) = exponents(z, self.p);
        self.a0 * (-self.mode.a_exponent() * (gm + gp)).exp()
    }

    /// Lower populations `(b, e)` at `z`, propagated from `(b_k, e_k)` at `t_k`:
    ///
    /// `b(z) = b_k e^{-2(Γ₋(z)-Γ₋(t_k))} + ∫_{t_k}^{z} η(s) a(s) e^{-2(Γ₋(z)-Γ₋(s))} ds`
    fn lower(&self, t_k: f64, (b_k, e_k): (f64, f64), z: f64) -> Result<(f64, f64)> {
        let (gm_k, gp_k) = exponents(t_k, self.p);
        let (gm_z, gp_z) = exponents(z, self.p);
        let mut b = b_k * (-2.0 * (gm_z - gm_k)).exp();
        let mut e = e_k * (-2.0 * (gp_z - gp_k)).exp();
        if self.a0 != 0.0 && z > t_k {
            b += integrate(
                |s| {
                    let (eta, _) = transition_rates(s, self.p);
                    let (gm_s, _) = exponents(s, self.p);
                    eta * self.a_at(s) * (-2.0 * (gm_z - gm_s)).exp()
                },
                t_k,
                z,
                QUAD,
            )?
            .value;
            e += integrate(
                |s| {
                    let (_, sigma) = transition_rates(s, self.p);
                    let (_, gp_s) = exponents(s, self.p);
                    sigma * self.a_at(s) * (-2.0 * (gp_z - gp_s)).exp()
                },
                t_k,
                z,
                QUAD,
            )?
            .value;
        }
        Ok((b, e))
    }

    /// `∫_{t_k}^{t_next} (η b + Σ e)`, returned with `(b, e)` at `t_next`.
    ///
    /// With `a ≡ 0` the integrand uses the closed-form `b`, `e` directly.
    /// Otherwise `η b = η a − b'` (and likewise for `e`) turns the nested
    /// integral into `∫ (η + Σ) a − Δb − Δe`.
    fn ground_gain(&self, t_k: f64, be_k: (f64, f64), t_next: f64) -> Result<(f64, (f64, f64))> {
        let be_next = self.lower(t_k, be_k, t_next)?;
        if self.a0 != 0.0 {
            let feed = integrate(
                |z| {
                    let (eta, sigma) = transition_rates(z, self.p);
                    (eta + sigma) * self.a_at(z)
                },
                t_k,
                t_next,
                QUAD,
            )?
            .value;
            let gain = feed - (be_next.0 - be_k.0) - (be_next.1 - be_k.1);
            return Ok((gain, be_next));
        }
        let value = integrate(
            |z| {
                let (gm_k, gp_k) = exponents(t_k, self.p);
                let (gm_z, gp_z) = exponents(z, self.p);
                let (eta, sigma) = transition_rates(z, self.p);
                eta * be_k.0 * (-2.0 * (gm_z - gm_k)).exp()
                    + sigma * be_k.1 * (-2.0 * (gp_z - gp_k)).exp()
            },
            t_k,
            t_next,
            QUAD,
        )?
        .value;
        Ok((value, be_next))
    }
}

/// Integrating-factor solution of the reduced equations on `grid`.
pub fn evolve_eigen(
    e0: &EigenbasisState,
    p: &ModelParams,
    grid: &[f64],
    mode: EvolutionMode,
) -> Result<Trajectory> {
    e0.validate()?;
    p.validate()?;
    check_grid(grid)?;
    let sys = Reduced { p, mode, a0: e0.a };
    // quadrature panels no wider than 1/20 of the fastest timescale
    let panel = p.fastest_timescale() / 20.0;

    let mut states = Vec::with_capacity(grid.len());
    let mut d_quadrature = Vec::with_capacity(grid.len());
    let mut t_prev = 0.0;
    let mut be = (e0.b, e0.e);
    let mut d_acc = e0.d;

    for &t in grid {
        let n = ((t - t_prev) / panel).ceil().max(1.0) as usize;
        let width = (t - t_prev) / n as f64;
        for k in 0..n {
            let t0 = t_prev + k as f64 * width;
            let t1 = if k + 1 == n { t } else { t0 + width };
            if t1 > t0 {
                let (gain, next) = sys.ground_gain(t0, be, t1)?;
                d_acc += gain;
                be = next;
            }
        }
        t_prev = t;

        let rb = bundle_unchecked(t, p);
        let a = sys.a_at(t);
        let decay = (-rb.gamma_total).exp();
        let (b, e) = be;
        let d = match mode {
            EvolutionMode::PaperLiteral => d_acc,
            EvolutionMode::TraceConserving => 1.0 - a - b - e,
        };
        let state = EigenbasisState {
            a,
            b,
            e,
            d,
            c: e0.c * C64::from_polar(decay, -rb.s1),
            h: e0.h * C64::from_polar(decay, -rb.s2),
        };
        if !state.trace().is_finite() {
            return Err(Error::NonFinite {
                t,
                what: "reduced state".into(),
            });
        }
        states.push(state);
        d_quadrature.push(d_acc);
    }

    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        mode,
        params: *p,
        d_quadrature,
    })
}

/// Default RK4 step as a fraction of [`ModelParams::fastest_timescale`].
pub const NUMERIC_STEP_FRACTION: f64 = 1e-3;

fn pack(s: &EigenbasisState) -> [f64; 8] {
    [s.a, s.b, s.e, s.d, s.c.re, s.c.im, s.h.re, s.h.im]
}

/// Fixed-step RK4 integration of the reduced equations.
///
/// `step` may not exceed `1e-3` of the fastest timescale. The default is that
/// limit, shortened further when the accumulated phases rotate faster than
/// the bare rates suggest.
pub fn evolve_reduced_numeric(
    e0: &EigenbasisState,
    p: &ModelParams,
    grid: &[f64],
    mode: EvolutionMode,
    step: Option<f64>,
) -> Result<Trajectory> {
    e0.validate()?;
    p.validate()?;
    check_grid(grid)?;
    let limit = NUMERIC_STEP_FRACTION * p.fastest_timescale();
    let step = step.unwrap_or_else(|| limit.min(NUMERIC_STEP_FRACTION / phase_rate_bound(p)));
    if !(step > 0.0 && step <= limit * (1.0 + 1e-12)) {
        return Err(Error::StepTooCoarse { step, limit });
    }

    let k_a = mode.a_exponent();
    let two_j = 2.0 * p.j;
    // RK4 visits each midpoint twice in a row
    let mut last = (f64::NAN, (0.0, 0.0, 0.0));
    let mut rhs = |t: f64, y: &[f64; 8]| -> [f64; 8] {
        if t != last.0 {
            last = (t, instantaneous(t, p));
        }
        let (eta, sigma, ds1) = last.1;
        let half = 0.5 * (eta + sigma);
        let [a, b, e, _d, cr, ci, hr, hi] = *y;
        let c = C64::new(cr, ci);
        let h = C64::new(hr, hi);
        let dc = -C64::new(half, ds1) * c;
        let dh = -C64::new(half, two_j + ds1) * h;
        [
            -k_a * half * a,
            eta * (a - b),
            sigma * (a - e),
            eta * b + sigma * e,
            dc.re,
            dc.im,
            dh.re,
            dh.im,
        ]
    };

    let mut y = pack(e0);
    let mut t_prev = 0.0;
    let mut states = Vec::with_capacity(grid.len());
    let mut d_quadrature = Vec::with_capacity(grid.len());
    for &t in grid {
        y = rk4_span(&mut rhs, t_prev, t, y, step);
        t_prev = t;
        if y.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                t,
                what: "reduced state".into(),
            });
        }
        let [a, b, e, d, cr, ci, hr, hi] = y;
        let d_reported = match mode {
            EvolutionMode::PaperLiteral => d,
            EvolutionMode::TraceConserving => 1.0 - a - b - e,
        };
        states.push(EigenbasisState {
            a,
            b,
            e,
            d: d_reported,
            c: C64::new(cr, ci),
            h: C64::new(hr, hi),
        });
        d_quadrature.push(d);
    }

    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        mode,
        params: *p,
        d_quadrature,
    })
}

/// Largest parameter deviation between two trajectories on the same grid.
pub fn max_deviation(x: &Trajectory, y: &Trajectory) -> f64 {
    x.states
        .iter()
        .zip(&y.states)
        .map(|(s, t)| s.max_abs_diff(t))
        .fold(0.0, f64::max)
}
