//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn abs(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`. An empty interval yields exactly zero.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (v, e) = gk15(&mut f, lo, hi);
    let mut intervals = vec![(lo, hi, v, e)];
    let mut evaluations = 15;
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(Error::NonFinite {
                t: lo,
                what: "quadrature integrand".into(),
            });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadResult {
                value: sign * total,
                error: err,
                evaluations,
            });
        }
        if intervals.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                a,
                b,
                estimate: err,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (l, h, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (l + h);
        let (v1, e1) = gk15(&mut f, l, mid);
        let (v2, e2) = gk15(&mut f, mid, h);
        evaluations += 30;
        intervals.push((l, mid, v1, e1));
        intervals.push((mid, h, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x - x + 2.0, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(
            |x| (50.0 * x).sin() * (-x).exp(),
            0.0,
            10.0,
            QuadOptions::abs(1e-12),
        )
        .unwrap();
        // ∫ e^{-x} sin(ωx) = ω/(1+ω²) (1 - e^{-10}(cos 10ω + sin 10ω/ω))
        let w: f64 = 50.0;
        let exact =
            w / (1.0 + w * w) * (1.0 - (-10f64).exp() * ((10.0 * w).cos() + (10.0 * w).sin() / w));
        assert!((r.value - exact).abs() < 1e-11);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let f = |x: f64| x.exp();
        let fwd = integrate(f, 0.0, 1.0, QuadOptions::default())
            .unwrap()
            .value;
        let bwd = integrate(f, 1.0, 0.0, QuadOptions::default())
            .unwrap()
            .value;
        assert!((fwd + bwd).abs() < 1e-15);
        assert_eq!(
            integrate(f, 2.0, 2.0, QuadOptions::default())
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadOptions {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_intervals: 2,
        };
        assert!(integrate(|x| (1.0 / (x + 1e-6)).sin(), 0.0, 1.0, opts).is_err());
    }
}
