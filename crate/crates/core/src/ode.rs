//! Classical fixed-step fourth-order Runge–Kutta.

use crate::linalg::Mat4;

pub(crate) trait OdeVector: Copy {
    /// `self + s * other`
    fn add_scaled(&self, other: &Self, s: f64) -> Self;
}

impl<const N: usize> OdeVector for [f64; N] {
    fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut out = *self;
        for (o, x) in out.iter_mut().zip(other) {
            *o += s * x;
        }
        out
    }
}

impl OdeVector for Mat4 {
    fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += other.0[i][j] * s;
            }
        }
        out
    }
}

pub(crate) fn rk4_step<V: OdeVector>(f: &mut impl FnMut(f64, &V) -> V, t: f64, y: &V, h: f64) -> V {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &y.add_scaled(&k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &y.add_scaled(&k2, 0.5 * h));
    let k4 = f(t + h, &y.add_scaled(&k3, h));
    y.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
}

/// Integrates across `[t0, t1]` in equal steps no longer than `max_step`.
pub(crate) fn rk4_span<V: OdeVector>(
    f: &mut impl FnMut(f64, &V) -> V,
    t0: f64,
    t1: f64,
    y0: V,
    max_step: f64,
) -> V {
    let span = t1 - t0;
    if span <= 0.0 {
        return y0;
    }
    let n = (span / max_step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = y0;
    for k in 0..n {
        let t = t0 + k as f64 * h;
        y = rk4_step(f, t, &y, h);
    }
    y
}
