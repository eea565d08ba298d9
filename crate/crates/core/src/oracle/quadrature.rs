//! Gauss–Hermite rules and whitened tensor quadrature over `ℝⁿ`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmatrix::{pairwise_sum, sym_apply, sym_eigen, AnisotropyMatrix};
use crate::hermite1d::hg1;
use crate::{Error, Result};

/// Tail-to-peak ratio above which a quadrature result is flagged.
pub const TAIL_WARNING: f64 = 1e-10;

/// One-dimensional physicists' Gauss–Hermite rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    /// Ascending, symmetric about zero.
    pub nodes: Vec<f64>,
    /// Weights against `e^{-x²}`.
    pub weights: Vec<f64>,
    /// `w_i e^{x_i²}`, for integrands that carry their own envelope.
    pub scaled_weights: Vec<f64>,
}

/// Nodes are the roots of `H_m`, found by Newton iteration on the orthonormal
/// recurrence from asymptotic initial guesses.
pub fn gauss_hermite_rule(m: usize) -> Result<GaussHermite> {
    if !(2..=256).contains(&m) {
        return Err(Error::Domain(alloc::format!("Gauss-Hermite node count {m} outside 2..=256")));
    }
    let pim4 = 0.751_125_544_464_942_5;
    let mf = m as f64;
    let half = m.div_ceil(2);
    // The asymptotic guesses start colliding somewhere above m = 160; beyond
    // that the eigenvalues of the Jacobi matrix seed Newton instead.
    let seeds = if m > 160 { Some(jacobi_seeds(m)) } else { None };
    let mut roots: Vec<f64> = Vec::with_capacity(half);
    let mut z = 0.0f64;
    for i in 0..half {
        z = match (&seeds, i) {
            (Some(s), _) => s[i],
            (None, 0) => (2.0 * mf + 1.0).sqrt() - 1.85575 * (2.0 * mf + 1.0).powf(-1.0 / 6.0),
            (None, 1) => z - 1.14 * mf.powf(0.426) / z,
            (None, 2) => 1.86 * z - 0.86 * roots[0],
            (None, 3) => 1.91 * z - 0.91 * roots[1],
            (None, _) => 2.0 * z - roots[i - 2],
        };
        let mut converged = false;
        for _ in 0..100 {
            let (p, pp) = orthonormal(m, z, pim4);
            let dz = p / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { what: "Gauss-Hermite root", iterations: 100, residual: z });
        }
        roots.push(z);
    }
    let mut nodes = vec![0.0; m];
    for (i, &r) in roots.iter().enumerate() {
        nodes[i] = -r;
        nodes[m - 1 - i] = r;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let scaled_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let psi = hg1(m as u32 - 1, Complex64::new(x, 0.0)).re;
            1.0 / (mf * psi * psi)
        })
        .collect();
    let weights = nodes.iter().zip(&scaled_weights).map(|(&x, &w)| w * (-x * x).exp()).collect();
    Ok(GaussHermite { nodes, weights, scaled_weights })
}

/// Eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal `√(k/2)`),
/// largest first, by Sturm-sequence bisection.
fn jacobi_seeds(m: usize) -> Vec<f64> {
    let off2: Vec<f64> = (1..m).map(|k| k as f64 / 2.0).collect();
    // number of eigenvalues below x
    let count_below = |x: f64| {
        let mut d = -x;
        let mut c = usize::from(d < 0.0);
        for &b2 in &off2 {
            let prev = if d == 0.0 { f64::EPSILON } else { d };
            d = -x - b2 / prev;
            c += usize::from(d < 0.0);
        }
        c
    };
    let top = (2.0 * m as f64 + 1.0).sqrt() + 1.0;
    (0..m.div_ceil(2))
        .map(|i| {
            // the (m-1-i)-th eigenvalue in ascending order
            let k = m - 1 - i;
            let (mut lo, mut hi) = (-top, top);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-12 {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `(p̃_m(z), p̃_m'(z))` for the orthonormal Hermite polynomials.
fn orthonormal(m: usize, z: f64, p0: f64) -> (f64, f64) {
    let mut p1 = p0;
    let mut p2 = 0.0;
    for j in 1..=m {
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j as f64 - 1.0) / j as f64).sqrt() * p3;
    }
    (p1, (2.0 * m as f64).sqrt() * p2)
}

/// Result of a quadrature together with its envelope diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Largest weighted term on the outermost node shell over the largest term overall.
    pub tail_ratio: f64,
}

impl QuadResult {
    /// False when the envelope looks mismatched (tail above [`TAIL_WARNING`]).
    pub fn accurate(&self) -> bool {
        self.tail_ratio <= TAIL_WARNING
    }
}

/// Tensor Gauss–Hermite rule composed with the affine map `x = W u + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    n: usize,
    rule: GaussHermite,
    whitening: Vec<f64>,
    shift: Vec<f64>,
    jacobian: f64,
}

impl QuadratureRule {
    /// `whitening` is a row-major real `n×n` matrix and must be invertible.
    pub fn new(n: usize, m: usize, whitening: Vec<f64>, shift: Vec<f64>) -> Result<Self> {
        if whitening.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: whitening.len() });
        }
        if shift.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: shift.len() });
        }
        let jacobian = real_det(&whitening, n).abs();
        if jacobian == 0.0 || !jacobian.is_finite() {
            return Err(Error::Singular);
        }
        Ok(QuadratureRule { n, rule: gauss_hermite_rule(m)?, whitening, shift, jacobian })
    }

    /// Rule adapted to an integrand whose magnitude decays like `e^{-xᵀPx}`
    /// around `center`: `W = P^{-1/2}`.
    pub fn for_envelope(p: &[f64], n: usize, center: Vec<f64>, m: usize) -> Result<Self> {
        let (vals, _) = sym_eigen(p, n);
        if vals.first().is_some_and(|&v| v <= 0.0) {
            return Err(Error::NoConvergence { what: "quadrature envelope", iterations: 0, residual: vals[0] });
        }
        Self::new(n, m, sym_apply(p, n, |v| 1.0 / v.sqrt()), center)
    }

    /// Rule for products `f·g` of two functions living over `Θ`:
    /// the envelope is `e^{-xᵀ Re(Θ⁻¹) x}`.
    pub fn for_theta(theta: &AnisotropyMatrix, m: usize) -> Result<Self> {
        let n = theta.dim();
        Self::for_envelope(&re_inverse(theta), n, vec![0.0; n], m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.rule.nodes.len()
    }

    /// Every mapped node `x` with its weight (Jacobian included), last axis fastest.
    pub fn points(&self) -> Vec<(Vec<f64>, f64)> {
        let n = self.n;
        let m = self.rule.nodes.len();
        let total = m.pow(n as u32);
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let mut w = self.jacobian;
            let mut x = self.shift.clone();
            for (a, &i) in idx.iter().enumerate() {
                let u = self.rule.nodes[i];
                w *= self.rule.scaled_weights[i];
                for (b, xb) in x.iter_mut().enumerate() {
                    *xb += self.whitening[b * n + a] * u;
                }
            }
            out.push((x, w));
            for a in (0..n).rev() {
                idx[a] += 1;
                if idx[a] < m {
                    break;
                }
                idx[a] = 0;
            }
        }
        out
    }

    /// `∫_{ℝⁿ} f(x) dx`.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> Complex64) -> QuadResult {
        let m = self.rule.nodes.len();
        let n = self.n;
        let pts = self.points();
        let mut terms = Vec::with_capacity(pts.len());
        let mut peak = 0.0f64;
        let mut tail = 0.0f64;
        for (i, (x, w)) in pts.iter().enumerate() {
            let t = f(x) * *w;
            let a = t.norm();
            peak = peak.max(a);
            // decode the multi-index to see if this node sits on the outer shell
            let mut k = i;
            let mut edge = false;
            for _ in 0..n {
                let j = k % m;
                k /= m;
                edge |= j == 0 || j == m - 1;
            }
            if edge {
                tail = tail.max(a);
            }
            terms.push(t);
        }
        let tail_ratio = if peak > 0.0 { tail / peak } else { 0.0 };
        QuadResult { value: pairwise_sum(&terms), tail_ratio }
    }
}

/// Symmetric part of `Re(Θ⁻¹)`, row-major.
pub(crate) fn re_inverse(theta: &AnisotropyMatrix) -> Vec<f64> {
    let n = theta.dim();
    let q = theta.inv();
    (0..n * n).map(|i| 0.5 * (q[(i / n, i % n)].re + q[(i % n, i / n)].re)).collect()
}

fn real_det(a: &[f64], n: usize) -> f64 {
    let mut a = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs())).unwrap_or(c);
        if a[p * n + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            for k in c..n {
                a[r * n + k] -= f * a[c * n + k];
            }
        }
    }
    det
}

/// Real quadratic envelope: `|f(x)| ≲ poly(x)·e^{-xᵀPx}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    n: usize,
    p: Vec<f64>,
}

impl Envelope {
    /// `p` is row-major `n×n`, symmetric positive definite.
    pub fn new(p: Vec<f64>, n: usize) -> Result<Self> {
        if p.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: p.len() });
        }
        Ok(Envelope { n, p })
    }

    /// Envelope of a single mode over `Θ`: `½ Re(Θ⁻¹)`.
    pub fn of_mode(theta: &AnisotropyMatrix) -> Self {
        Envelope { n: theta.dim(), p: re_inverse(theta).into_iter().map(|x| 0.5 * x).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.p
    }

    pub fn scaled(&self, k: f64) -> Self {
        Envelope { n: self.n, p: self.p.iter().map(|x| x * k).collect() }
    }
}
