//! Presets for the four concurrence panels.

use std::fmt;

use nmqubits::regimes::RegimeThresholds;
use nmqubits::sweep::{ConcurrenceMode, TimeAxis};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Panel {
    A,
    B,
    C,
    D,
}

pub const PANEL_SAMPLES: usize = 500;

impl Panel {
    pub const ALL: [Panel; 4] = [Panel::A, Panel::B, Panel::C, Panel::D];

    pub fn letter(self) -> char {
        match self {
            Panel::A => 'a',
            Panel::B => 'b',
            Panel::C => 'c',
            Panel::D => 'd',
        }
    }

    pub fn r(self) -> f64 {
        match self {
            Panel::A => 100.0,
            Panel::B => 1.0,
            Panel::C => 0.01,
            Panel::D => 0.001,
        }
    }

    /// `τ′ = τ/Q²` is undefined at `Q = 0`, so the rescaled panels swap it for 10.
    pub fn q_values(self) -> [f64; 4] {
        match self {
            Panel::A | Panel::B => [0.0, 1.0, 5.0, 20.0],
            Panel::C | Panel::D => [1.0, 5.0, 10.0, 20.0],
        }
    }

    pub fn axis(self) -> TimeAxis {
        match self {
            Panel::A | Panel::B => TimeAxis::Tau,
            Panel::C | Panel::D => TimeAxis::TauPrime,
        }
    }

    pub fn t_max(self) -> f64 {
        match self.axis() {
            TimeAxis::Tau => 5.0,
            TimeAxis::TauPrime => 10.0,
        }
    }

    pub fn config(self) -> RunConfig {
        RunConfig {
            q: self.q_values().to_vec(),
            r: vec![self.r()],
            theta: vec![std::f64::consts::FRAC_PI_2],
            mode: ConcurrenceMode::Figure,
            axis: self.axis(),
            t_max: self.t_max(),
            samples: PANEL_SAMPLES,
            output: None,
            thresholds: RegimeThresholds::default(),
            dimensional: None,
            defaulted: Vec::new(),
        }
    }

    pub fn file_stem(self) -> String {
        format!("panel_{}", self.letter())
    }
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn presets_are_valid_configs() {
        for p in Panel::ALL {
            let c = p.config();
            let again = parse_config(&c.to_string()).unwrap();
            assert_eq!(again, c, "panel {p}");
            let spec = c.sweep_spec().unwrap();
            spec.validate().unwrap();
            assert_eq!(spec.times.len(), 500);
        }
    }
}
