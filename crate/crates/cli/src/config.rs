//! Flat `key = value` run configuration.
//!
//! ```text
//! # two couplings, one bath width
//! Q = 1, 5
//! R = 0.04
//! theta = 1.5707963267948966
//! mode = exact-trace
//! ```
//!
//! Physical parameters come either as `Q`/`R` (lists allowed) or as the
//! scalar triple `J`/`lambda`/`gamma_M`, which is reduced to `Q = J/λ`,
//! `R = λ/Γ_M`. Times are always dimensionless (`τ = Γ_M t`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use nmqubits::regimes::RegimeThresholds;
use nmqubits::sweep::{uniform_grid, ConcurrenceMode, SweepSpec, TimeAxis};

/// Where a setting came from, for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag(&'static str),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag(name) => write!(f, "--{name}"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{at}: expected `key = value`")]
    Syntax { at: Origin },
    #[error("{at}: unknown key '{key}'")]
    UnknownKey { at: Origin, key: String },
    #[error("{at}: duplicate key '{key}' (first set at {first})")]
    Duplicate {
        at: Origin,
        key: String,
        first: Origin,
    },
    #[error("{at}: invalid value for {key}: {reason}")]
    Value {
        at: Origin,
        key: &'static str,
        reason: String,
    },
    #[error("{at}: overdetermined parameters: {detail}")]
    Overdetermined { at: Origin, detail: String },
    #[error("underdetermined parameters: {0}")]
    Underdetermined(String),
    #[error("{at}: samples ≥ 2 required, got {got}")]
    Samples { at: Origin, got: usize },
    #[error("{0}")]
    Sweep(String),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

const KEYS: [&str; 15] = [
    "theta",
    "Q",
    "R",
    "J",
    "lambda",
    "gamma_M",
    "mode",
    "axis",
    "t_max",
    "samples",
    "output",
    "markovian_r_min",
    "markovian_q_max",
    "non_markovian_r_max",
    "non_markovian_q_min",
];

pub const DEFAULT_THETA: f64 = std::f64::consts::FRAC_PI_2;
pub const DEFAULT_T_MAX: f64 = 5.0;
pub const DEFAULT_SAMPLES: usize = 500;

/// Raw settings keyed by canonical name, before resolution.
#[derive(Clone, Debug, Default)]
pub struct Entries {
    map: BTreeMap<&'static str, (String, Origin)>,
}

impl Entries {
    pub fn insert(&mut self, key: &str, value: &str, at: Origin) -> Result<()> {
        let canon = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                at,
                key: key.to_string(),
            })?;
        if let Some((_, first)) = self.map.get(canon) {
            return Err(ConfigError::Duplicate {
                at,
                key: key.to_string(),
                first: *first,
            });
        }
        self.map.insert(canon, (value.to_string(), at));
        Ok(())
    }

    fn get(&self, key: &'static str) -> Option<(&str, Origin)> {
        self.map.get(key).map(|(v, o)| (v.as_str(), *o))
    }
}

/// Splits a document into entries; `#` starts a comment anywhere on a line.
pub fn parse_entries(text: &str) -> Result<Entries> {
    let mut entries = Entries::default();
    for (index, raw) in text.lines().enumerate() {
        let at = Origin::Line(index + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { at })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { at });
        }
        entries.insert(key, value, at)?;
    }
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub mode: ConcurrenceMode,
    pub axis: TimeAxis,
    pub t_max: f64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub thresholds: RegimeThresholds,
    /// `(J, λ, Γ_M)` when the run was specified dimensionally.
    pub dimensional: Option<[f64; 3]>,
    /// Keys that fell back to their defaults.
    pub defaulted: Vec<&'static str>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    RunConfig::resolve(&parse_entries(text)?)
}

fn number(key: &'static str, value: &str, at: Origin) -> Result<f64> {
    // Rust float parsing is locale-independent; reject inf/nan spellings too
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ConfigError::Value {
            at,
            key,
            reason: format!("'{value}' is not a finite decimal number"),
        }),
    }
}

fn number_list(key: &'static str, value: &str, at: Origin) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| number(key, v.trim(), at))
        .collect()
}

fn check(ok: bool, key: &'static str, at: Origin, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Value {
            at,
            key,
            reason: reason.into(),
        })
    }
}

impl RunConfig {
    pub fn resolve(e: &Entries) -> Result<Self> {
        let mut defaulted = Vec::new();

        let dimless = ["Q", "R"].map(|k| e.get(k));
        let dim = ["J", "lambda", "gamma_M"].map(|k| e.get(k));
        let (q, r, dimensional) =
            match (dimless.iter().flatten().next(), dim.iter().flatten().next()) {
                (Some(_), Some(&(_, at))) => {
                    return Err(ConfigError::Overdetermined {
                        at,
                        detail: "give either Q and R or J, lambda and gamma_M, not both".into(),
                    })
                }
                (None, None) => {
                    return Err(ConfigError::Underdetermined(
                        "give Q and R, or J, lambda and gamma_M".into(),
                    ))
                }
                (Some(_), None) => {
                    let [Some((qv, qa)), Some((rv, ra))] = dimless else {
                        let missing = if dimless[0].is_none() { "Q" } else { "R" };
                        return Err(ConfigError::Underdetermined(format!(
                            "{missing} is missing"
                        )));
                    };
                    let q = number_list("Q", qv, qa)?;
                    let r = number_list("R", rv, ra)?;
                    check(q.iter().all(|&x| x >= 0.0), "Q", qa, "must be ≥ 0")?;
                    check(r.iter().all(|&x| x > 0.0), "R", ra, "must be > 0")?;
                    (q, r, None)
                }
                (None, Some(_)) => {
                    let mut vals = [0.0; 3];
                    for ((slot, entry), key) in
                        vals.iter_mut().zip(dim).zip(["J", "lambda", "gamma_M"])
                    {
                        let Some((v, at)) = entry else {
                            return Err(ConfigError::Underdetermined(format!("{key} is missing")));
                        };
                        *slot = number(key, v, at)?;
                    }
                    let [j, l, g] = vals;
                    check(j >= 0.0, "J", dim[0].unwrap().1, "must be ≥ 0")?;
                    check(l > 0.0, "lambda", dim[1].unwrap().1, "must be > 0")?;
                    check(g > 0.0, "gamma_M", dim[2].unwrap().1, "must be > 0")?;
                    (vec![j / l], vec![l / g], Some(vals))
                }
            };

        let theta = match e.get("theta") {
            Some((v, at)) => number_list("theta", v, at)?,
            None => {
                defaulted.push("theta");
                vec![DEFAULT_THETA]
            }
        };
        let mode = match e.get("mode") {
            Some((v, at)) => v
                .parse()
                .map_err(|err: nmqubits::Error| ConfigError::Value {
                    at,
                    key: "mode",
                    reason: err.to_string(),
                })?,
            None => {
                defaulted.push("mode");
                ConcurrenceMode::Figure
            }
        };
        let axis = match e.get("axis") {
            Some((v, at)) => v
                .parse()
                .map_err(|err: nmqubits::Error| ConfigError::Value {
                    at,
                    key: "axis",
                    reason: err.to_string(),
                })?,
            None => {
                defaulted.push("axis");
                TimeAxis::Tau
            }
        };
        let t_max = match e.get("t_max") {
            Some((v, at)) => {
                let t = number("t_max", v, at)?;
                check(t > 0.0, "t_max", at, "must be > 0")?;
                t
            }
            None => {
                defaulted.push("t_max");
                DEFAULT_T_MAX
            }
        };
        let samples = match e.get("samples") {
            Some((v, at)) => {
                let n: usize = v.parse().map_err(|_| ConfigError::Value {
                    at,
                    key: "samples",
                    reason: format!("'{v}' is not a non-negative integer"),
                })?;
                if n < 2 {
                    return Err(ConfigError::Samples { at, got: n });
                }
                n
            }
            None => {
                defaulted.push("samples");
                DEFAULT_SAMPLES
            }
        };
        let output = e.get("output").map(|(v, _)| PathBuf::from(v));

        let mut thresholds = RegimeThresholds::default();
        for (key, slot) in [
            ("markovian_r_min", &mut thresholds.markovian_r_min),
            ("markovian_q_max", &mut thresholds.markovian_q_max),
            ("non_markovian_r_max", &mut thresholds.non_markovian_r_max),
            ("non_markovian_q_min", &mut thresholds.non_markovian_q_min),
        ] {
            match e.get(key) {
                Some((v, at)) => {
                    let x = number(key, v, at)?;
                    check(x >= 0.0, key, at, "must be ≥ 0")?;
                    *slot = x;
                }
                None => defaulted.push(key),
            }
        }

        if axis == TimeAxis::TauPrime && q.contains(&0.0) {
            let at = e.get("axis").map(|(_, at)| at).unwrap_or(Origin::Line(0));
            return Err(ConfigError::Value {
                at,
                key: "axis",
                reason: "tau-prime needs every Q > 0".into(),
            });
        }

        Ok(RunConfig {
            q,
            r,
            theta,
            mode,
            axis,
            t_max,
            samples,
            output,
            thresholds,
            dimensional,
            defaulted,
        })
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let times = uniform_grid(self.t_max, self.samples)
            .map_err(|e| ConfigError::Sweep(e.to_string()))?;
        Ok(SweepSpec {
            q: self.q.clone(),
            r: self.r.clone(),
            theta: self.theta.clone(),
            mode: self.mode,
            axis: self.axis,
            times,
            thresholds: self.thresholds,
        })
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders the resolved configuration as a document [`parse_config`] accepts.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dimensional {
            Some([j, l, g]) => {
                writeln!(f, "J = {j:?}")?;
                writeln!(f, "lambda = {l:?}")?;
                writeln!(f, "gamma_M = {g:?}")?;
                writeln!(f, "# Q = {}, R = {}", join(&self.q), join(&self.r))?;
            }
            None => {
                writeln!(f, "Q = {}", join(&self.q))?;
                writeln!(f, "R = {}", join(&self.r))?;
            }
        }
        writeln!(f, "theta = {}", join(&self.theta))?;
        writeln!(f, "mode = {}", self.mode)?;
        writeln!(f, "axis = {}", self.axis)?;
        writeln!(f, "t_max = {:?}", self.t_max)?;
        writeln!(f, "samples = {}", self.samples)?;
        if let Some(out) = &self.output {
            writeln!(f, "output = {}", out.display())?;
        }
        let t = &self.thresholds;
        writeln!(f, "markovian_r_min = {:?}", t.markovian_r_min)?;
        writeln!(f, "markovian_q_max = {:?}", t.markovian_q_max)?;
        writeln!(f, "non_markovian_r_max = {:?}", t.non_markovian_r_max)?;
        writeln!(f, "non_markovian_q_min = {:?}", t.non_markovian_q_min)?;
        if !self.defaulted.is_empty() {
            writeln!(f, "# defaulted: {}", self.defaulted.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let c = parse_config("Q = 1\nR = 1\ntheta = 1.5707963267948966\nmode = figure").unwrap();
        assert_eq!((c.q.as_slice(), c.r.as_slice()), (&[1.0][..], &[1.0][..]));
        assert_eq!(c.theta, vec![std::f64::consts::FRAC_PI_2]);
        assert_eq!(c.mode, ConcurrenceMode::Figure);
        assert_eq!(c.samples, DEFAULT_SAMPLES);
        assert!(c.defaulted.contains(&"samples") && !c.defaulted.contains(&"theta"));
    }

    #[test]
    fn comments_and_lists() {
        let c = parse_config("# header\n\nQ = 0, 1,5 # three\nR=0.04\naxis = tau\n").unwrap();
        assert_eq!(c.q, vec![0.0, 1.0, 5.0]);
        assert_eq!(c.r, vec![0.04]);
    }

    #[test]
    fn dimensional_triple_reduces() {
        let c = parse_config("J = 2\nlambda = 4\ngamma_M = 0.5\n").unwrap();
        assert_eq!((c.q[0], c.r[0]), (0.5, 8.0));
        assert_eq!(c.dimensional, Some([2.0, 4.0, 0.5]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("Q = 1\nR = 1\nQ = 2\n").unwrap_err();
        assert!(
            matches!(
                e,
                ConfigError::Duplicate {
                    at: Origin::Line(3),
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_config("Q = 1\nR = 1\ncolour = red\n").unwrap_err();
        assert!(
            matches!(
                e,
                ConfigError::UnknownKey {
                    at: Origin::Line(3),
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_config("Q = 1\nR = -1\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: invalid value for R: must be > 0");
        let e = parse_config("Q = 1\nR = 1\nJ = 1\n").unwrap_err();
        assert!(e.to_string().contains("overdetermined parameters"), "{e}");
        assert!(e.to_string().starts_with("line 3"), "{e}");
        let e = parse_config("Q = 1\nR = 1\nsamples = 1\n").unwrap_err();
        assert!(e.to_string().contains("samples ≥ 2"), "{e}");
        assert!(e.to_string().starts_with("line 3"), "{e}");
        let e = parse_config("Q = 1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Underdetermined(_)), "{e}");
        let e = parse_config("J = 1\nlambda = 1\n").unwrap_err();
        assert_eq!(
            e.to_string(),
            "underdetermined parameters: gamma_M is missing"
        );
        let e = parse_config("Q = 1\nR = 1\nnonsense\n").unwrap_err();
        assert_eq!(
            e,
            ConfigError::Syntax {
                at: Origin::Line(3)
            }
        );
    }

    #[test]
    fn locale_style_decimals_rejected() {
        let e = parse_config("Q = 1\nR = 0,5\n");
        // "0,5" reads as the list [0, 5]; R = 0 is out of range
        assert!(e.is_err());
        let e = parse_config("Q = 1\nR = 1\nt_max = 2,5\n").unwrap_err();
        assert!(matches!(e, ConfigError::Value { key: "t_max", .. }), "{e}");
        for bad in ["inf", "NaN", "1e400"] {
            assert!(
                parse_config(&format!("Q = 1\nR = {bad}\n")).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn tau_prime_needs_positive_q() {
        let e = parse_config("Q = 0, 1\nR = 1\naxis = tau-prime\n").unwrap_err();
        assert!(e.to_string().starts_with("line 3"), "{e}");
    }

    #[test]
    fn display_round_trips() {
        let text = "Q = 0.5, 2\nR = 0.01\ntheta = 1, 2\nmode = exact-paper\naxis = tau\nt_max = 3\nsamples = 17\n\
                    non_markovian_q_min = 4\noutput = out.csv\n";
        let c = parse_config(text).unwrap();
        let again = parse_config(&c.to_string()).unwrap();
        assert_eq!(
            RunConfig {
                defaulted: vec![],
                ..again
            },
            RunConfig {
                defaulted: vec![],
                ..c.clone()
            }
        );
        let d = parse_config("J = 2\nlambda = 4\ngamma_M = 0.5\n").unwrap();
        let again = parse_config(&d.to_string()).unwrap();
        assert_eq!(again.dimensional, d.dimensional);
        assert_eq!((again.q, again.r), (d.q, d.r));
    }
}
