//! Dense 4×4 complex matrix arithmetic for two-qubit operators.
//!
//! Everything here is fixed-size and allocation free. Hermitian eigenproblems
//! are solved through the real-symmetric 8×8 embedding
//! `A = X + iY  ->  [[X, -Y], [Y, X]]` with a cyclic Jacobi sweep; singular
//! values use one-sided complex Jacobi rotations. Both keep absolute accuracy
//! near degenerate or vanishing eigenvalues, which the two-qubit concurrence
//! depends on. A characteristic polynomial / quartic route is kept alongside
//! as an independent cross-check for well-separated spectra.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

/// 4×4 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Default for Mat4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Mat4 {
    pub const fn zeros() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_diag([ONE; 4])
    }

    pub fn from_diag(d: [C64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, di) in d.into_iter().enumerate() {
            m.0[i][i] = di;
        }
        m
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        Self::from_diag(d.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64; 4], v: &[C64; 4]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    /// Kronecker product `a ⊗ b` of single-qubit operators.
    pub fn kron(a: &Mat2, b: &Mat2) -> Self {
        Self::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn apply(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `[a, b] = ab - ba`
    pub fn commutator(a: &Self, b: &Self) -> Self {
        *a * *b - *b * *a
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |m_ij - conj(m_ji)|`
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..4 {
            for j in i..4 {
                r = r.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        r
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Real-symmetric 8×8 embedding of a Hermitian matrix.
    fn real_embedding(&self) -> [[f64; 8]; 8] {
        let mut e = [[0.0; 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let z = self.0[i][j];
                e[i][j] = z.re;
                e[i + 4][j + 4] = z.re;
                e[i][j + 4] = -z.im;
                e[i + 4][j] = z.im;
            }
        }
        e
    }

    fn from_real_embedding(e: &[[f64; 8]; 8]) -> Self {
        // average the two copies of each block; they agree to rounding
        Self::from_fn(|i, j| {
            C64::new(
                0.5 * (e[i][j] + e[i + 4][j + 4]),
                0.5 * (e[i + 4][j] - e[i][j + 4]),
            )
        })
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for Mat4 {
    fn add_assign(&mut self, rhs: Mat4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Mat4 {
    type Output = Mat4;
    fn neg(self) -> Mat4 {
        Mat4::from_fn(|i, j| -self.0[i][j])
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Returns the eigenvalues (unsorted, matching columns of the returned
/// orthogonal matrix).
#[allow(clippy::needless_range_loop)]
fn jacobi_symmetric<const N: usize>(mut a: [[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    for _sweep in 0..64 {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-300_f64.max(scale * 1e-17) {
            break;
        }
        for p in 0..N - 1 {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut w = [0.0; N];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = a[i][i];
    }
    (w, v)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part `(m + m†)/2` is used.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let h = (*m + m.adjoint()).scale_re(0.5);
    let (mut w, _) = jacobi_symmetric(h.real_embedding());
    w.sort_by(f64::total_cmp);
    // every eigenvalue appears twice in the embedding
    [
        0.5 * (w[0] + w[1]),
        0.5 * (w[2] + w[3]),
        0.5 * (w[4] + w[5]),
        0.5 * (w[6] + w[7]),
    ]
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(D) V†`.
pub fn hermitian_function(m: &Mat4, f: impl Fn(f64) -> f64) -> Mat4 {
    let h = (*m + m.adjoint()).scale_re(0.5);
    let (w, v) = jacobi_symmetric(h.real_embedding());
    let fw = w.map(&f);
    let mut out = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            out[i][j] = (0..8).map(|k| v[i][k] * fw[k] * v[j][k]).sum();
        }
    }
    Mat4::from_real_embedding(&out)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative round-off eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &Mat4) -> Mat4 {
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

/// Singular values in descending order (one-sided Jacobi).
#[allow(clippy::needless_range_loop)]
pub fn singular_values(m: &Mat4) -> [f64; 4] {
    // work on columns
    let mut cols = [[ZERO; 4]; 4];
    for (j, col) in cols.iter_mut().enumerate() {
        for (i, c) in col.iter_mut().enumerate() {
            *c = m.0[i][j];
        }
    }
    let dot = |a: &[C64; 4], b: &[C64; 4]| -> C64 { (0..4).map(|k| a[k].conj() * b[k]).sum() };
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..3 {
            for q in p + 1..4 {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sgn / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..4 {
                    let ap = cols[p][k];
                    let aq = cols[q][k] * phase.conj();
                    cols[p][k] = ap * c - aq * s;
                    cols[q][k] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = cols.map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Coefficients `[1, c1, c2, c3, c4]` of `det(xI - m) = x^4 + c1 x^3 + ... + c4`
/// by the Faddeev–LeVerrier recursion.
pub fn charpoly(m: &Mat4) -> [C64; 5] {
    let mut coeffs = [ONE, ZERO, ZERO, ZERO, ZERO];
    let mut mk = Mat4::zeros();
    for k in 1..=4 {
        mk = *m * mk + Mat4::identity().scale(coeffs[k - 1]);
        coeffs[k] = -(*m * mk).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[C64; 5], x: C64) -> (C64, C64) {
    let mut p = coeffs[0];
    let mut dp = ZERO;
    for &c in &coeffs[1..] {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of the depressed-free cubic `m^3 + a m^2 + b m + c` (Cardano).
fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let shift = a / 3.0;
    if u3.norm() == 0.0 {
        return [-shift; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    let mut roots = [ZERO; 3];
    let mut w = ONE;
    for r in roots.iter_mut() {
        let uk = u * w;
        *r = uk - p / (3.0 * uk) - shift;
        w *= omega;
    }
    roots
}

/// All four roots of a monic quartic (Ferrari), each refined by Newton steps.
pub fn quartic_roots(coeffs: &[C64; 5]) -> [C64; 4] {
    let lead = coeffs[0];
    let [b, c, d, e] = [coeffs[1], coeffs[2], coeffs[3], coeffs[4]].map(|z| z / lead);
    // y^4 + p y^2 + q y + r with x = y - b/4
    let p = c - 3.0 * b * b / 8.0;
    let q = d - b * c / 2.0 + b * b * b / 8.0;
    let r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b * b * b * b / 256.0;
    let shift = -b / 4.0;

    let ys: [C64; 4] = if q.norm() <= 1e-300 {
        let disc = (p * p - 4.0 * r).sqrt();
        let z1 = (-p + disc) / 2.0;
        let z2 = (-p - disc) / 2.0;
        [z1.sqrt(), -z1.sqrt(), z2.sqrt(), -z2.sqrt()]
    } else {
        // 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
        let ms = cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0);
        let m = ms
            .into_iter()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or(ZERO);
        let s = (2.0 * m).sqrt();
        let mut ys = [ZERO; 4];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            // y^2 - sign*s*y + (p/2 + m + sign*s*q/(4m)) = 0
            let bb = -sign * s;
            let cc = p / 2.0 + m + sign * s * q / (4.0 * m);
            let disc = (bb * bb - 4.0 * cc).sqrt();
            ys[2 * k] = (-bb + disc) / 2.0;
            ys[2 * k + 1] = (-bb - disc) / 2.0;
        }
        ys
    };

    let monic = [ONE, b, c, d, e];
    ys.map(|y| {
        let mut x = y + shift;
        for _ in 0..2 {
            let (f, df) = horner(&monic, x);
            if df.norm() > 0.0 {
                let step = f / df;
                if step.re.is_finite() && step.im.is_finite() {
                    x -= step;
                }
            }
        }
        x
    })
}

/// Eigenvalues through the characteristic polynomial, sorted by real part.
pub fn eigenvalues_charpoly(m: &Mat4) -> [C64; 4] {
    let mut roots = quartic_roots(&charpoly(m));
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    roots
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(m: &Mat4) -> Mat4 {
    let norm = m.max_abs() * 4.0;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = m.scale_re(0.5f64.powi(squarings as i32));
    let mut term = Mat4::identity();
    let mut sum = Mat4::identity();
    for k in 1..=20 {
        term = (term * a).scale_re(1.0 / k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
