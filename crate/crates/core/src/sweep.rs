//! Cartesian parameter sweeps over `(Q, R, θ)` and a time grid.
//!
//! Points run in parallel; records come back in Q-major, then R, then θ,
//! then time order regardless of scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::concurrence::{exact_concurrence, figure_concurrence};
use crate::error::{Error, Result};
use crate::model::{eigen_from_standard, make_pure_xstate, DimensionlessParams};
use crate::propagator::{evolve_eigen, EvolutionMode};
use crate::regimes::{oscillation_metrics, RegimeLabel, RegimeThresholds, MIN_SERIES_LEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConcurrenceMode {
    /// Closed-form pure-state decay.
    Figure,
    /// X-state formula on the reduced solution, `a ∝ e^{−Γ}`.
    ExactPaper,
    /// X-state formula on the reduced solution, `a ∝ e^{−2Γ}`.
    ExactTrace,
}

impl ConcurrenceMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConcurrenceMode::Figure => "figure",
            ConcurrenceMode::ExactPaper => "exact-paper",
            ConcurrenceMode::ExactTrace => "exact-trace",
        }
    }
}

impl fmt::Display for ConcurrenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConcurrenceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure" => Ok(Self::Figure),
            "exact-paper" => Ok(Self::ExactPaper),
            "exact-trace" => Ok(Self::ExactTrace),
            other => Err(Error::Domain(format!(
                "unknown mode '{other}' (expected figure, exact-paper or exact-trace)"
            ))),
        }
    }
}

/// Whether sample times are `τ = Γ_M t` or `τ′ = τ/Q²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeAxis {
    Tau,
    TauPrime,
}

impl TimeAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimeAxis::Tau => "tau",
            TimeAxis::TauPrime => "tau-prime",
        }
    }
}

impl fmt::Display for TimeAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TimeAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Self::Tau),
            "tau-prime" => Ok(Self::TauPrime),
            other => Err(Error::Domain(format!(
                "unknown time axis '{other}' (expected tau or tau-prime)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub mode: ConcurrenceMode,
    pub axis: TimeAxis,
    /// Sample times on `axis`, strictly ascending.
    pub times: Vec<f64>,
    pub thresholds: RegimeThresholds,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, list) in [
            ("Q", &self.q),
            ("R", &self.r),
            ("theta", &self.theta),
            ("time", &self.times),
        ] {
            if list.is_empty() {
                return Err(Error::Empty(name));
            }
            if let Some(x) = list.iter().find(|x| !x.is_finite()) {
                return Err(Error::Domain(format!("non-finite {name} value {x}")));
            }
        }
        for &q in &self.q {
            for &r in &self.r {
                DimensionlessParams::new(q, r)?;
            }
        }
        if self.axis == TimeAxis::TauPrime && self.q.contains(&0.0) {
            return Err(Error::Domain("the tau-prime axis needs Q > 0".into()));
        }
        crate::propagator::check_grid(&self.times)
    }

    /// `τ` for each sample at a given `Q`.
    pub fn tau_grid(&self, q: f64) -> Vec<f64> {
        match self.axis {
            TimeAxis::Tau => self.times.clone(),
            TimeAxis::TauPrime => self.times.iter().map(|t| q * q * t).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    /// Sample time on the sweep's axis.
    pub time: f64,
    pub axis: TimeAxis,
    pub tau: f64,
    pub q: f64,
    pub r: f64,
    pub theta: f64,
    pub mode: ConcurrenceMode,
    pub concurrence: f64,
    pub regime: RegimeLabel,
    /// Turning points of this point's series; `None` below the minimum series length.
    pub oscillations: Option<usize>,
}

/// Concurrence series at one parameter point.
pub fn concurrence_series(
    q: f64,
    r: f64,
    theta: f64,
    mode: ConcurrenceMode,
    taus: &[f64],
) -> Result<Vec<f64>> {
    match mode {
        ConcurrenceMode::Figure => taus
            .iter()
            .map(|&tau| figure_concurrence(tau, q, r, theta).map(|c| c.value))
            .collect(),
        ConcurrenceMode::ExactPaper | ConcurrenceMode::ExactTrace => {
            let evo = if mode == ConcurrenceMode::ExactPaper {
                EvolutionMode::PaperLiteral
            } else {
                EvolutionMode::TraceConserving
            };
            let p = DimensionlessParams::new(q, r)?.to_model();
            let e0 = eigen_from_standard(&make_pure_xstate(theta)?)?;
            let tr = evolve_eigen(&e0, &p, taus, evo)?;
            Ok(exact_concurrence(&tr)?
                .into_iter()
                .map(|c| c.value)
                .collect())
        }
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let points: Vec<(f64, f64, f64)> = spec
        .q
        .iter()
        .flat_map(|&q| {
            spec.r
                .iter()
                .flat_map(move |&r| spec.theta.iter().map(move |&th| (q, r, th)))
        })
        .collect();

    let blocks: Vec<Result<Vec<SweepRecord>>> = points
        .par_iter()
        .map(|&(q, r, theta)| {
            let taus = spec.tau_grid(q);
            let values = concurrence_series(q, r, theta, spec.mode, &taus)?;
            let oscillations = if values.len() >= MIN_SERIES_LEN {
                Some(oscillation_metrics(&spec.times, &values)?.extrema)
            } else {
                None
            };
            let regime = spec.thresholds.classify(q, r);
            Ok(spec
                .times
                .iter()
                .zip(&taus)
                .zip(values)
                .map(|((&time, &tau), concurrence)| SweepRecord {
                    time,
                    axis: spec.axis,
                    tau,
                    q,
                    r,
                    theta,
                    mode: spec.mode,
                    concurrence,
                    regime,
                    oscillations,
                })
                .collect())
        })
        .collect();

    let mut out = Vec::with_capacity(points.len() * spec.times.len());
    for block in blocks {
        out.extend(block?);
    }
    Ok(out)
}

/// `n ≥ 2` evenly spaced samples over `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!("samples ≥ 2 required, got {n}")));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Domain(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    Ok((0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spec(q: Vec<f64>, r: Vec<f64>, times: Vec<f64>) -> SweepSpec {
        SweepSpec {
            q,
            r,
            theta: vec![FRAC_PI_2],
            mode: ConcurrenceMode::Figure,
            axis: TimeAxis::Tau,
            times,
            thresholds: RegimeThresholds::default(),
        }
    }

    #[test]
    fn single_point() {
        let out = run_sweep(&spec(vec![1.0], vec![1.0], vec![1.0])).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].concurrence - 0.841_465_696_332_834).abs() < 1e-12);
        assert_eq!(out[0].regime, RegimeLabel::Intermediate);
        assert_eq!(out[0].oscillations, None);
    }

    #[test]
    fn ordering_is_q_major() {
        let out = run_sweep(&spec(vec![0.5, 5.0], vec![0.1, 20.0], vec![0.0, 0.5, 1.0])).unwrap();
        assert_eq!(out.len(), 12);
        let keys: Vec<(f64, f64, f64)> = out.iter().map(|r| (r.q, r.r, r.time)).collect();
        let mut expect = Vec::new();
        for q in [0.5, 5.0] {
            for r in [0.1, 20.0] {
                for t in [0.0, 0.5, 1.0] {
                    expect.push((q, r, t));
                }
            }
        }
        assert_eq!(keys, expect);
        assert_eq!(out[3].regime, RegimeLabel::Markovian);
        assert_eq!(out[6].regime, RegimeLabel::NonMarkovian);
    }

    #[test]
    fn empty_or_bad_inputs_rejected() {
        assert!(matches!(
            run_sweep(&spec(vec![], vec![1.0], vec![1.0])),
            Err(Error::Empty("Q"))
        ));
        assert!(run_sweep(&spec(vec![1.0], vec![1.0], vec![])).is_err());
        assert!(run_sweep(&spec(vec![f64::NAN], vec![1.0], vec![1.0])).is_err());
        assert!(run_sweep(&spec(vec![1.0], vec![0.0], vec![1.0])).is_err());
        let mut s = spec(vec![0.0], vec![1.0], vec![1.0]);
        s.axis = TimeAxis::TauPrime;
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn deterministic() {
        let mut s = spec(
            vec![0.0, 1.0, 5.0, 20.0],
            vec![0.01, 1.0, 100.0],
            uniform_grid(5.0, 64).unwrap(),
        );
        s.theta = vec![0.4, FRAC_PI_2, PI];
        s.mode = ConcurrenceMode::ExactTrace;
        let a = run_sweep(&s).unwrap();
        let b = run_sweep(&s).unwrap();
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|r| r.concurrence.is_finite() && r.oscillations.is_some()));
    }

    #[test]
    fn rescaled_axis_is_a_reparametrization() {
        let tp = uniform_grid(3.0, 40).unwrap();
        for mode in [ConcurrenceMode::Figure, ConcurrenceMode::ExactTrace] {
            let mut primed = spec(vec![2.0, 10.0], vec![0.01, 1.0], tp.clone());
            primed.axis = TimeAxis::TauPrime;
            primed.mode = mode;
            let a = run_sweep(&primed).unwrap();
            for q in [2.0, 10.0] {
                let mut plain = spec(
                    vec![q],
                    vec![0.01, 1.0],
                    tp.iter().map(|t| q * q * t).collect(),
                );
                plain.mode = mode;
                let b = run_sweep(&plain).unwrap();
                for (x, y) in a.iter().filter(|x| x.q == q).zip(&b) {
                    assert_eq!(x.tau, y.time);
                    assert!((x.concurrence - y.concurrence).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn large_q_collapse() {
        let mut s = spec(vec![10.0], vec![1.0], uniform_grid(5.0, 201).unwrap());
        s.axis = TimeAxis::TauPrime;
        for rec in run_sweep(&s).unwrap() {
            assert!((rec.concurrence - (-0.5 * rec.time).exp()).abs() < 0.02);
        }
    }

    #[test]
    fn mode_and_axis_names_round_trip() {
        for m in [
            ConcurrenceMode::Figure,
            ConcurrenceMode::ExactPaper,
            ConcurrenceMode::ExactTrace,
        ] {
            assert_eq!(m.as_str().parse::<ConcurrenceMode>().unwrap(), m);
        }
        for a in [TimeAxis::Tau, TimeAxis::TauPrime] {
            assert_eq!(a.as_str().parse::<TimeAxis>().unwrap(), a);
        }
        assert!("exact".parse::<ConcurrenceMode>().is_err());
    }
}
