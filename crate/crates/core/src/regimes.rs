//! Regime labels for `(Q, R)` and oscillation measures for concurrence series.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    Markovian,
    NonMarkovian,
    Intermediate,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::Markovian => "markovian",
            RegimeLabel::NonMarkovian => "non-markovian",
            RegimeLabel::Intermediate => "intermediate",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Markovian iff `R ≥ markovian_r_min ∧ Q ≤ markovian_q_max`;
/// non-Markovian iff `R ≤ non_markovian_r_max ∧ Q ≥ non_markovian_q_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeThresholds {
    pub markovian_r_min: f64,
    pub markovian_q_max: f64,
    pub non_markovian_r_max: f64,
    pub non_markovian_q_min: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            markovian_r_min: 10.0,
            markovian_q_max: 1.0,
            non_markovian_r_max: 1.0,
            non_markovian_q_min: 5.0,
        }
    }
}

impl fmt::Display for RegimeThresholds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "markovian: R >= {} and Q <= {}; non-markovian: R <= {} and Q >= {}",
            self.markovian_r_min,
            self.markovian_q_max,
            self.non_markovian_r_max,
            self.non_markovian_q_min
        )
    }
}

impl RegimeThresholds {
    pub fn classify(&self, q: f64, r: f64) -> RegimeLabel {
        if r >= self.markovian_r_min && q <= self.markovian_q_max {
            RegimeLabel::Markovian
        } else if r <= self.non_markovian_r_max && q >= self.non_markovian_q_min {
            RegimeLabel::NonMarkovian
        } else {
            RegimeLabel::Intermediate
        }
    }
}

/// Classification under the default thresholds.
pub fn classify_regime(q: f64, r: f64) -> RegimeLabel {
    RegimeThresholds::default().classify(q, r)
}

pub const NOISE_FLOOR: f64 = 1e-6;
pub const MIN_SERIES_LEN: usize = 16;
/// Fraction of the time span treated as the initial transient.
pub const TRANSIENT_FRACTION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillationMetrics {
    /// Interior turning points whose swing exceeds the noise floor.
    pub extrema: usize,
    /// Those lying in `[t₀ + 0.1(T − t₀), T]`.
    pub extrema_after_transient: usize,
    /// Half of (total variation − |net change|) over the post-transient
    /// window; zero for a monotone series.
    pub strength: f64,
}

/// Turning-point count with hysteresis: a candidate extremum is confirmed
/// once the series retreats from it by more than the noise floor.
pub fn oscillation_metrics(times: &[f64], values: &[f64]) -> Result<OscillationMetrics> {
    if times.len() != values.len() {
        return Err(Error::Domain(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    if values.len() < MIN_SERIES_LEN {
        return Err(Error::TooShort {
            len: values.len(),
            min: MIN_SERIES_LEN,
        });
    }
    if let Some(index) = values.iter().chain(times).position(|x| !x.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite entry at position {index}"
        )));
    }
    if let Some(index) = (1..times.len()).find(|&k| times[k] <= times[k - 1]) {
        return Err(Error::NonMonotoneGrid { index });
    }

    let t0 = times[0];
    let cut = t0 + TRANSIENT_FRACTION * (times[times.len() - 1] - t0);

    let mut turning = Vec::new();
    let mut dir = 0i8;
    let mut cand = values[0];
    let mut cand_idx = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        match dir {
            0 => {
                if (v - values[0]).abs() > NOISE_FLOOR {
                    dir = if v > values[0] { 1 } else { -1 };
                    cand = v;
                    cand_idx = k;
                }
            }
            1 if v > cand => (cand, cand_idx) = (v, k),
            -1 if v < cand => (cand, cand_idx) = (v, k),
            _ => {
                if (cand - v).abs() > NOISE_FLOOR {
                    turning.push(cand_idx);
                    dir = -dir;
                    cand = v;
                    cand_idx = k;
                }
            }
        }
    }

    let start = times.partition_point(|&t| t < cut);
    let window = &values[start..];
    let variation: f64 = window.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let net = (window[window.len() - 1] - window[0]).abs();

    Ok(OscillationMetrics {
        extrema: turning.len(),
        extrema_after_transient: turning.iter().filter(|&&k| times[k] >= cut).count(),
        strength: (0.5 * (variation - net)).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::figure_concurrence;
    use std::f64::consts::FRAC_PI_2;

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn labels() {
        assert_eq!(classify_regime(0.1, 100.0), RegimeLabel::Markovian);
        assert_eq!(classify_regime(10.0, 0.01), RegimeLabel::NonMarkovian);
        assert_eq!(classify_regime(1.0, 1.0), RegimeLabel::Intermediate);
        assert_eq!(classify_regime(1.0, 10.0), RegimeLabel::Markovian);
        assert_eq!(classify_regime(5.0, 1.0), RegimeLabel::NonMarkovian);
        let loose = RegimeThresholds {
            markovian_r_min: 1.0,
            ..Default::default()
        };
        assert_eq!(loose.classify(1.0, 1.0), RegimeLabel::Markovian);
    }

    #[test]
    fn monotone_series_is_quiet() {
        let t = grid(200, 10.0);
        let v: Vec<f64> = t.iter().map(|x| (-0.5 * x).exp()).collect();
        let m = oscillation_metrics(&t, &v).unwrap();
        assert_eq!((m.extrema, m.extrema_after_transient), (0, 0));
        assert!(m.strength < 1e-15);
    }

    #[test]
    fn counts_sinusoid_turning_points() {
        let t = grid(1001, 10.0);
        let v: Vec<f64> = t.iter().map(|x| (std::f64::consts::PI * x).sin()).collect();
        // maxima and minima at 0.5, 1.5, ..., 9.5
        let m = oscillation_metrics(&t, &v).unwrap();
        assert_eq!(m.extrema, 10);
        assert_eq!(m.extrema_after_transient, 9);
        // variation over [1, 10] is 1 + 8·2 + 1 with no net change
        assert!((m.strength - 9.0).abs() < 1e-9, "{}", m.strength);
    }

    #[test]
    fn ripples_below_noise_floor_are_ignored() {
        let t = grid(500, 5.0);
        let v: Vec<f64> = t.iter().map(|x| 1e-7 * (20.0 * x).sin()).collect();
        assert_eq!(oscillation_metrics(&t, &v).unwrap().extrema, 0);
    }

    #[test]
    fn figure_series_oscillates_near_unit_rq2() {
        let tp = grid(500, 20.0);
        let series = |q: f64, r: f64| -> Vec<f64> {
            tp.iter()
                .map(|x| {
                    figure_concurrence(q * q * x, q, r, FRAC_PI_2)
                        .unwrap()
                        .value
                })
                .collect()
        };
        let strong = oscillation_metrics(&tp, &series(10.0, 0.01)).unwrap();
        assert!(strong.extrema >= 2, "{strong:?}");
        let weak = oscillation_metrics(&tp, &series(10.0, 1.0)).unwrap();
        assert_eq!(weak.extrema_after_transient, 0, "{weak:?}");
        assert!(strong.strength > weak.strength);
    }

    #[test]
    fn rejects_bad_series() {
        let t = grid(10, 1.0);
        assert!(matches!(
            oscillation_metrics(&t, &t),
            Err(Error::TooShort { len: 10, min: 16 })
        ));
        let t = grid(20, 1.0);
        assert!(oscillation_metrics(&t, &t[..19]).is_err());
        let mut bad = t.clone();
        bad[5] = bad[4];
        assert!(oscillation_metrics(&bad, &t).is_err());
        let mut nan = t.clone();
        nan[3] = f64::NAN;
        assert!(oscillation_metrics(&t, &nan).is_err());
    }
}
