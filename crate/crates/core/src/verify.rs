//! The cross-check suite behind `nmqubits verify`.
//!
//! Each check returns a [`CriterionOutcome`]; a check that errors is reported
//! as failed with the error text rather than aborting the suite. The
//! oracle-vs-propagator [`adjudicate`] breakdown is informational.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::concurrence::{
    comparator_g, concurrence_x, concurrence_x_with, exact_concurrence, figure_concurrence,
    wootters, x_density, ComparatorParams, TRAJECTORY_TOL,
};
use crate::error::Result;
use crate::linalg::{Mat4, ZERO};
use crate::model::{
    density_matrix, eigen_from_standard, make_pure_xstate, standard_from_eigen, DensityMatrix4,
    DimensionlessParams, EigenbasisState, ModelParams, XStateStandard,
};
use crate::oracle::integrate_master;
use crate::propagator::{evolve_eigen, evolve_reduced_numeric, max_deviation, EvolutionMode};
use crate::quadrature::{integrate, QuadOptions};
use crate::rates::{gamma_approx, gamma_dimless, gamma_phase, memory_rates};
use crate::regimes::oscillation_metrics;
use crate::sweep::uniform_grid;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>3} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn run(
    id: &'static str,
    title: &'static str,
    check: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionOutcome {
    let start = Instant::now();
    let (passed, detail) = check().unwrap_or_else(|err| (false, format!("error: {err}")));
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn model(q: f64, r: f64) -> Result<ModelParams> {
    Ok(DimensionlessParams::new(q, r)?.to_model())
}

fn pure_eigen(theta: f64) -> Result<EigenbasisState> {
    eigen_from_standard(&make_pure_xstate(theta)?)
}

/// An X state with every eigenbasis parameter populated, so that the two
/// evolution modes differ.
pub fn mixed_reference_state() -> EigenbasisState {
    EigenbasisState {
        a: 0.4,
        b: 0.25,
        e: 0.15,
        d: 0.2,
        c: C64::new(0.2, 0.1),
        h: C64::new(0.1, -0.08),
    }
}

/// Parameter points shared by the oracle checks.
pub const ORACLE_POINTS: [(f64, f64); 5] = [
    (1.0, 1.0),
    (0.0, 100.0),
    (5.0, 0.04),
    (10.0, 0.01),
    (10.0, 1.0),
];

/// Markovian collapse of the closed-form decay.
pub fn markovian_limit() -> CriterionOutcome {
    run("1", "Markovian limit", || {
        let start = Instant::now();
        let mut worst: f64 = 0.0;
        for tau in uniform_grid(5.0, 501)? {
            let c = figure_concurrence(tau, 0.0, 100.0, FRAC_PI_2)?.value;
            worst = worst.max((c - (-0.5 * tau).exp()).abs());
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            worst <= 6e-3 && secs < 1.0,
            format!(
                "max |C - e^(-tau/2)| = {worst:.3e} (limit 6e-3), runtime {secs:.3} s (limit 1 s)"
            ),
        ))
    })
}

const RATE_Q: [f64; 3] = [0.5, 1.0, 5.0];
const RATE_R: [f64; 3] = [0.1, 1.0, 10.0];

/// Dimensional closed forms against the `(Q, R, τ)` forms, with `Γ_M ≠ 1`.
pub fn dimensional_consistency() -> CriterionOutcome {
    run("2", "dimensional vs dimensionless rates", || {
        let gamma_m = 2.5;
        let mut worst: f64 = 0.0;
        for q in RATE_Q {
            for r in RATE_R {
                let p = ModelParams::new(q * r * gamma_m, r * gamma_m, gamma_m)?;
                for k in 1..=100 {
                    let tau = 0.1 * k as f64;
                    let b = gamma_phase(tau / gamma_m, &p)?;
                    let (gm, gp) = gamma_dimless(tau, q, r)?;
                    worst = worst
                        .max((b.gamma_minus - gm).abs())
                        .max((b.gamma_plus - gp).abs());
                }
            }
        }
        Ok((
            worst < 1e-10,
            format!("max |difference| = {worst:.3e} over 9 points x 100 times (limit 1e-10)"),
        ))
    })
}

/// Closed-form exponents against quadrature of the instantaneous rates.
pub fn quadrature_oracle() -> CriterionOutcome {
    run("3", "rates vs quadrature", || {
        let opts = QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-13,
            max_intervals: 4000,
        };
        let mut worst: f64 = 0.0;
        for q in RATE_Q {
            for r in RATE_R {
                let p = model(q, r)?;
                for k in 1..=20 {
                    let t = 0.5 * k as f64;
                    let b = gamma_phase(t, &p)?;
                    let half_eta = integrate(
                        |s| 0.5 * memory_rates(s, &p).map_or(f64::NAN, |x| x.0),
                        0.0,
                        t,
                        opts,
                    )?;
                    let half_sigma = integrate(
                        |s| 0.5 * memory_rates(s, &p).map_or(f64::NAN, |x| x.1),
                        0.0,
                        t,
                        opts,
                    )?;
                    worst = worst
                        .max((b.gamma_minus - half_eta.value).abs())
                        .max((b.gamma_plus - half_sigma.value).abs());
                }
            }
        }
        Ok((
            worst < 1e-7,
            format!("max |closed form - quadrature| = {worst:.3e} (limit 1e-7)"),
        ))
    })
}

/// Integrating-factor propagator against fixed-step RK4.
pub fn propagator_cross_check() -> CriterionOutcome {
    run("4", "propagator vs numeric integration", || {
        let grid: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
        let mut cases = Vec::new();
        for q in [0.0, 1.0, 10.0] {
            for r in [0.01, 1.0, 100.0] {
                for start in [
                    pure_eigen(0.0)?,
                    pure_eigen(FRAC_PI_2)?,
                    pure_eigen(PI)?,
                    mixed_reference_state(),
                ] {
                    for mode in EvolutionMode::ALL {
                        cases.push((q, r, start, mode));
                    }
                }
            }
        }
        let devs: Vec<(f64, f64, f64)> = cases
            .par_iter()
            .map(|&(q, r, start, mode)| -> Result<(f64, f64, f64)> {
                let p = model(q, r)?;
                let an = evolve_eigen(&start, &p, &grid, mode)?;
                let nu = evolve_reduced_numeric(&start, &p, &grid, mode, None)?;
                Ok((q, r, max_deviation(&an, &nu)))
            })
            .collect::<Result<_>>()?;
        let (wq, wr, worst) = devs
            .into_iter()
            .fold((0.0, 0.0, 0.0), |a, b| if b.2 > a.2 { b } else { a });
        Ok((
            worst < 1e-8,
            format!(
                "max parameter deviation = {worst:.3e} at (Q={wq}, R={wr}) over {} runs (limit 1e-8)",
                cases.len()
            ),
        ))
    })
}

fn oracle_starts() -> Result<Vec<(String, DensityMatrix4)>> {
    let mut out = Vec::new();
    for (name, theta) in [
        ("theta=0", 0.0),
        ("theta=pi/2", FRAC_PI_2),
        ("theta=pi", PI),
    ] {
        out.push((name.to_string(), density_matrix(&make_pure_xstate(theta)?)?));
    }
    out.push((
        "mixed".to_string(),
        density_matrix(&standard_from_eigen(&mixed_reference_state())?)?,
    ));
    Ok(out)
}

/// Trace, Hermiticity and X-form preservation of the full master equation.
pub fn oracle_sanity() -> CriterionOutcome {
    run("5", "master-equation oracle sanity", || {
        let grid: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        let starts = oracle_starts()?;
        let mut cases = Vec::new();
        for &(q, r) in &ORACLE_POINTS {
            for (_, rho) in &starts {
                cases.push((q, r, *rho));
            }
        }
        let worst = cases
            .par_iter()
            .map(|(q, r, rho)| Ok(integrate_master(rho, &model(*q, *r)?, &grid)?.worst()))
            .collect::<Result<Vec<_>>>()?;
        let trace = worst.iter().map(|d| d.trace_drift).fold(0.0, f64::max);
        let herm = worst.iter().map(|d| d.hermiticity).fold(0.0, f64::max);
        let leak = worst.iter().map(|d| d.leakage).fold(0.0, f64::max);
        let min_eig = worst
            .iter()
            .map(|d| d.min_eigenvalue)
            .fold(f64::INFINITY, f64::min);
        Ok((
            trace < 1e-7 && herm < 1e-12 && leak < 1e-9,
            format!(
                "trace drift {trace:.2e} (<1e-7), hermiticity {herm:.2e} (<1e-12), off-X leakage {leak:.2e} (<1e-9); \
                 lowest eigenvalue seen {min_eig:.2e}"
            ),
        ))
    })
}

/// Oracle ψ₂ population against `b(0) e^{−2Γ₋}` for the symmetric state.
pub fn symmetric_sector_adjudication() -> CriterionOutcome {
    run("6", "oracle vs propagator, symmetric sector", || {
        let grid: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        let rho0 = density_matrix(&make_pure_xstate(FRAC_PI_2)?)?;
        let mut parts = Vec::new();
        let mut worst: f64 = 0.0;
        for (q, r) in [(1.0, 1.0), (0.0, 100.0), (5.0, 0.04)] {
            let p = model(q, r)?;
            let oracle = integrate_master(&rho0, &p, &grid)?.eigen_states();
            let mut rel: f64 = 0.0;
            for (t, s) in grid.iter().zip(&oracle) {
                let b = (-2.0 * gamma_phase(*t, &p)?.gamma_minus).exp();
                rel = rel.max((s.b - b).abs() / b);
            }
            worst = worst.max(rel);
            parts.push(format!("(Q={q}, R={r}) {rel:.2e}"));
        }
        Ok((
            worst < 1e-3,
            format!(
                "max relative |b_oracle - e^(-2 Gamma_-)|: {} (limit 1e-3)",
                parts.join(", ")
            ),
        ))
    })
}

fn max_concurrence(q: f64, r: f64, grid: &[f64]) -> Result<(f64, f64)> {
    let p = model(q, r)?;
    let start = pure_eigen(PI)?;
    let tr = evolve_eigen(&start, &p, grid, EvolutionMode::TraceConserving)?;
    let reduced = exact_concurrence(&tr)?
        .iter()
        .map(|c| c.value)
        .fold(0.0, f64::max);
    let oracle = integrate_master(&density_matrix(&make_pure_xstate(PI)?)?, &p, grid)?
        .states
        .iter()
        .map(|m| {
            concurrence_x_with(
                &DensityMatrix4::from_matrix_unchecked(*m).x_part(),
                TRAJECTORY_TOL,
            )
            .map(|c| c.value)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((reduced, oracle))
}

/// Dissipation-driven entanglement from an unentangled start.
pub fn entanglement_generation() -> CriterionOutcome {
    run("7", "entanglement generation from theta=pi", || {
        let grid = uniform_grid(20.0, 401)?;
        let (nm, nm_oracle) = max_concurrence(5.0, 0.04, &grid)?;
        let (mk, mk_oracle) = max_concurrence(0.0, 100.0, &grid)?;
        Ok((
            nm > 0.01 && mk < 1e-3,
            format!(
                "max C at (Q=5, R=0.04) = {nm:.4} (>0.01), at (Q=0, R=100) = {mk:.2e} (<1e-3); \
                 oracle gives {nm_oracle:.4} and {mk_oracle:.2e}"
            ),
        ))
    })
}

fn figure_series(q: f64, r: f64, tau_prime: &[f64]) -> Result<Vec<f64>> {
    tau_prime
        .iter()
        .map(|tp| figure_concurrence(q * q * tp, q, r, FRAC_PI_2).map(|c| c.value))
        .collect()
}

/// Turning points appear near `RQ² ∼ 1` and vanish for `RQ² ≫ 1`.
pub fn oscillation_criterion() -> CriterionOutcome {
    run("8", "oscillations near RQ^2 ~ 1", || {
        let tp = uniform_grid(20.0, 500)?;
        let strong = oscillation_metrics(&tp, &figure_series(10.0, 0.01, &tp)?)?;
        let weak = oscillation_metrics(&tp, &figure_series(10.0, 1.0, &tp)?)?;
        Ok((
            strong.extrema >= 2 && weak.extrema_after_transient == 0,
            format!(
                "extrema at (Q=10, R=0.01): {} (>=2, strength {:.3e}); after transient at (Q=10, R=1): {} (=0)",
                strong.extrema, strong.strength, weak.extrema_after_transient
            ),
        ))
    })
}

/// Large-Q decay approaches `e^{−τ′/2}` in rescaled time.
pub fn rescaled_collapse() -> CriterionOutcome {
    run("9a", "rescaled-time exponential collapse", || {
        let tp = uniform_grid(5.0, 501)?;
        let series = figure_series(10.0, 1.0, &tp)?;
        let worst = tp
            .iter()
            .zip(&series)
            .map(|(t, c)| (c - (-0.5 * t).exp()).abs())
            .fold(0.0, f64::max);
        Ok((
            worst < 0.02,
            format!("max |C - e^(-tau'/2)| at (Q=10, R=1) = {worst:.3e} (limit 0.02)"),
        ))
    })
}

/// Large-Q approximation of `Γ₋` at `Q = 20`, `RQ² = 1`, `τ′ = 1`.
pub fn large_q_approximation() -> CriterionOutcome {
    run("9b", "large-Q approximation accuracy", || {
        let q = 20.0;
        let r = 1.0 / (q * q);
        let approx = gamma_approx(1.0, q, r)?;
        let (gm, gp) = gamma_dimless(q * q, q, r)?;
        let rel_m = (approx.gamma_minus - gm).abs() / gm;
        let rel_p = (approx.gamma_plus - gp).abs() / gp;
        let mut profile = Vec::new();
        for tp in [0.5, 2.0, 3.0, 5.0] {
            let a = gamma_approx(tp, q, r)?;
            let (e, _) = gamma_dimless(q * q * tp, q, r)?;
            profile.push(format!("{tp}: {:.1e}", (a.gamma_minus - e).abs() / e));
        }
        Ok((
            rel_m < 5e-3,
            format!(
                "relative error on Gamma_- at tau'=1: {rel_m:.3e} (limit 5e-3), Gamma_+: {rel_p:.3e}; \
                 Gamma_- error at other tau': {}",
                profile.join(", ")
            ),
        ))
    })
}

/// A random valid X state: Dirichlet-like populations, coherences scaled
/// inside their positivity bounds.
pub fn random_xstate(rng: &mut impl Rng) -> XStateStandard {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let sum: f64 = raw.iter().sum();
    let [u, x1, x2, v] = raw.map(|x| x / sum);
    let w = C64::from_polar((u * v).sqrt() * rng.gen::<f64>(), rng.gen_range(-PI..PI));
    let y = C64::from_polar((x1 * x2).sqrt() * rng.gen::<f64>(), rng.gen_range(-PI..PI));
    XStateStandard { u, x1, x2, v, w, y }
}

/// Wootters concurrence against the X-state formula and reference states.
pub fn wootters_equivalence() -> CriterionOutcome {
    run("10", "Wootters vs X-state formula", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let s = random_xstate(&mut rng);
            let a = wootters(&x_density(&s))?.value;
            let b = concurrence_x(&s)?.value;
            worst = worst.max((a - b).abs());
        }
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell_vec = [h, ZERO, ZERO, h];
        let bell = wootters(&DensityMatrix4::new(
            Mat4::outer(&bell_vec, &bell_vec),
            1e-12,
        )?)?
        .value;
        let product = wootters(&DensityMatrix4::new(
            Mat4::from_real_diag([1.0, 0.0, 0.0, 0.0]),
            1e-12,
        )?)?
        .value;
        let psi = [ZERO, h, h, ZERO];
        let werner_m = Mat4::outer(&psi, &psi).scale_re(0.8) + Mat4::identity().scale_re(0.05);
        let werner = wootters(&DensityMatrix4::new(werner_m, 1e-12)?)?.value;
        let ok = worst < 1e-9
            && (bell - 1.0).abs() < 1e-9
            && product.abs() < 1e-9
            && (werner - 0.7).abs() < 1e-9;
        Ok((
            ok,
            format!(
                "max |wootters - X formula| over 200 states = {worst:.2e}; Bell {bell:.12}, product {product:.1e}, \
                 Werner(0.8) {werner:.12}"
            ),
        ))
    })
}

/// Zero crossings of `G` on `[0, t_max]`, located by bisection.
fn zero_crossings(cp: &ComparatorParams, t_max: f64, n: usize) -> Result<Vec<f64>> {
    let grid = uniform_grid(t_max, n)?;
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let mut g_lo = comparator_g(lo, cp)?;
        if g_lo.signum() == comparator_g(hi, cp)?.signum() {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let g_mid = comparator_g(mid, cp)?;
            if g_mid.signum() == g_lo.signum() {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Weak- and strong-coupling limits of the single-qubit comparator.
pub fn comparator_limits() -> CriterionOutcome {
    run("11", "comparator G(t) limits", || {
        let weak = ComparatorParams::new(0.01, 1.0)?;
        let mut worst: f64 = 0.0;
        for lt in uniform_grid(500.0, 5001)? {
            worst = worst.max((comparator_g(lt, &weak)? - (-0.005 * lt).exp()).abs());
        }
        let strong = ComparatorParams::new(100.0, 1.0)?;
        let zeros = zero_crossings(&strong, 5.0, 5001)?;
        let spacing = if zeros.len() >= 2 {
            (zeros[zeros.len() - 1] - zeros[0]) / (zeros.len() - 1) as f64
        } else {
            f64::NAN
        };
        let expect = PI / (0.5 * strong.gamma_m * strong.lambda).sqrt();
        let rel = (spacing - expect).abs() / expect;
        Ok((
            worst < 0.01 && rel < 0.05,
            format!(
                "weak: max |G - e^(-Gamma t/2)| = {worst:.3e} (<0.01); strong: spacing {spacing:.5} vs \
                 {expect:.5} over {} crossings, relative {rel:.2e} (<0.05)",
                zeros.len()
            ),
        ))
    })
}

/// Largest oracle-vs-propagator deviations for one parameter point, start and mode.
#[derive(Clone, Debug)]
pub struct AdjudicationRow {
    pub q: f64,
    pub r: f64,
    pub start: String,
    pub mode: EvolutionMode,
    /// `[a, b, e, d, |c|, |h|]`
    pub populations: [f64; 6],
    /// Phase mismatch of `c` and `h` in radians, when both are nonzero.
    pub phases: [Option<f64>; 2],
}

#[derive(Clone, Debug, Default)]
pub struct AdjudicationReport {
    pub rows: Vec<AdjudicationRow>,
}

impl fmt::Display for AdjudicationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:<11} {:<17} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "point", "start", "mode", "a", "b", "e", "d", "|c|", "|h|", "arg c", "arg h"
        )?;
        let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.2e}"));
        for row in &self.rows {
            let [a, b, e, d, c, h] = row.populations;
            writeln!(
                f,
                "{:<14} {:<11} {:<17} {a:>9.2e} {b:>9.2e} {e:>9.2e} {d:>9.2e} {c:>9.2e} {h:>9.2e} {:>9} {:>9}",
                format!("Q={} R={}", row.q, row.r),
                row.start,
                row.mode.as_str(),
                opt(row.phases[0]),
                opt(row.phases[1]),
            )?;
        }
        Ok(())
    }
}

fn phase_gap(x: C64, y: C64) -> Option<f64> {
    (x.norm() > 1e-9 && y.norm() > 1e-9).then(|| (x / y).arg().abs())
}

/// Compares every eigenbasis parameter of the oracle with both propagator
/// modes over `τ ∈ (0, 5]`.
pub fn adjudicate() -> Result<AdjudicationReport> {
    let grid: Vec<f64> = (1..=20).map(|k| 0.25 * k as f64).collect();
    let starts = [
        ("theta=pi/2", pure_eigen(FRAC_PI_2)?),
        ("theta=1", pure_eigen(1.0)?),
        ("mixed", mixed_reference_state()),
    ];
    let mut cases = Vec::new();
    for (q, r) in [(1.0, 1.0), (0.0, 100.0), (5.0, 0.04), (0.3, 2.0)] {
        for (name, start) in &starts {
            cases.push((q, r, *name, *start));
        }
    }
    let rows = cases
        .par_iter()
        .map(|&(q, r, name, start)| -> Result<Vec<AdjudicationRow>> {
            let p = model(q, r)?;
            let oracle =
                integrate_master(&density_matrix(&standard_from_eigen(&start)?)?, &p, &grid)?
                    .eigen_states();
            EvolutionMode::ALL
                .iter()
                .map(|&mode| {
                    let tr = evolve_eigen(&start, &p, &grid, mode)?;
                    let mut pops = [0.0f64; 6];
                    let mut phases = [None::<f64>; 2];
                    for (o, s) in oracle.iter().zip(&tr.states) {
                        let diffs = [
                            (o.a - s.a).abs(),
                            (o.b - s.b).abs(),
                            (o.e - s.e).abs(),
                            (o.d - s.d).abs(),
                            (o.c.norm() - s.c.norm()).abs(),
                            (o.h.norm() - s.h.norm()).abs(),
                        ];
                        for (w, x) in pops.iter_mut().zip(diffs) {
                            *w = w.max(x);
                        }
                        for (slot, gap) in phases
                            .iter_mut()
                            .zip([phase_gap(o.c, s.c), phase_gap(o.h, s.h)])
                        {
                            if let Some(g) = gap {
                                *slot = Some(slot.map_or(g, |v: f64| v.max(g)));
                            }
                        }
                    }
                    Ok(AdjudicationRow {
                        q,
                        r,
                        start: name.to_string(),
                        mode,
                        populations: pops,
                        phases,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdjudicationReport {
        rows: rows.into_iter().flatten().collect(),
    })
}

pub struct VerificationReport {
    pub outcomes: Vec<CriterionOutcome>,
    pub adjudication: Result<AdjudicationReport>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "oracle vs reduced propagator, max deviation over tau in (0, 5]:"
        )?;
        match &self.adjudication {
            Ok(report) => write!(f, "{report}")?,
            Err(err) => writeln!(f, "adjudication failed: {err}")?,
        }
        writeln!(f)?;
        let failed = self.outcomes.iter().filter(|o| !o.passed).count();
        writeln!(
            f,
            "{} of {} checks passed in {:.2} s",
            self.outcomes.len() - failed,
            self.outcomes.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

/// All checks in order.
pub fn criteria() -> Vec<fn() -> CriterionOutcome> {
    vec![
        markovian_limit,
        dimensional_consistency,
        quadrature_oracle,
        propagator_cross_check,
        oracle_sanity,
        symmetric_sector_adjudication,
        entanglement_generation,
        oscillation_criterion,
        rescaled_collapse,
        large_q_approximation,
        wootters_equivalence,
        comparator_limits,
    ]
}

pub fn run_all() -> VerificationReport {
    let start = Instant::now();
    let outcomes = criteria().into_iter().map(|check| check()).collect();
    let adjudication = adjudicate();
    VerificationReport {
        outcomes,
        adjudication,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_xstate;

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            validate_xstate(&random_xstate(&mut rng)).unwrap();
        }
    }

    #[test]
    fn mixed_reference_is_valid() {
        mixed_reference_state().validate().unwrap();
        standard_from_eigen(&mixed_reference_state()).unwrap();
    }

    #[test]
    fn cheap_checks_pass() {
        for check in [
            markovian_limit,
            oscillation_criterion,
            rescaled_collapse,
            comparator_limits,
        ] {
            let o = check();
            assert!(o.passed, "{o}");
        }
    }

    #[test]
    fn errors_become_failures() {
        let o = run("x", "broken", || Err(crate::Error::Empty("grid")));
        assert!(!o.passed && o.detail.contains("grid is empty"));
    }
}
