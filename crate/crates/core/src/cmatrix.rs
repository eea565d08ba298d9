//! Small dense complex linear algebra for complex-symmetric anisotropy matrices.
//!
//! Everything here is sized for `n ≤ 8`: LU with partial pivoting, a
//! branch-tracked log-determinant, the principal matrix square root via scaled
//! Denman–Beavers iteration, and cyclic Jacobi for real symmetric spectra.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::{Error, Result, MAX_DIM};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Default relative tolerance for the real-part positive-definiteness test.
pub const PD_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for j in 0..self.n {
            if j > 0 {
                f.write_str("; ")?;
            }
            for k in 0..self.n {
                if k > 0 {
                    f.write_str(", ")?;
                }
                let z = self[(j, k)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        f.write_str("]")
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (j, k): (usize, usize)) -> &Complex64 {
        &self.data[j * self.n + k]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.n + k]
    }
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, data: vec![C0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, C1)
    }

    /// `z·I`
    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            m[(j, j)] = z;
        }
        m
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (j, &z) in d.iter().enumerate() {
            m[(j, j)] = z;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                data.push(f(j, k));
            }
        }
        CMat { n, data }
    }

    /// Builds from row slices; errors unless the rows form a square grid.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        Ok(CMat { n, data: rows.iter().flatten().copied().collect() })
    }

    /// Real matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Combines separate real and imaginary row-major grids.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        let mut rows = Vec::with_capacity(n);
        for (j, r) in re.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (k, &x) in r.iter().enumerate() {
                let y = match im {
                    Some(im) => *im
                        .get(j)
                        .and_then(|row| row.get(k))
                        .ok_or(Error::DimensionMismatch { expected: n, found: im.len() })?,
                    None => 0.0,
                };
                row.push(Complex64::new(x, y));
            }
            rows.push(row);
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, found: im.len() });
            }
        }
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        CMat::from_fn(n, |j, k| (0..n).fold(C0, |acc, l| acc + self[(j, l)] * other[(l, k)]))
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        CMat { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        CMat { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, z: Complex64) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|a| a * z).collect() }
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.n, |j, k| self[(k, j)])
    }

    pub fn conj(&self) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    /// Entrywise real part, as a complex matrix.
    pub fn re(&self) -> CMat {
        CMat { n: self.n, data: self.data.iter().map(|a| Complex64::new(a.re, 0.0)).collect() }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        (0..self.n).map(|j| dot(self.row(j), v)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|j| self[(j, j)]).fold(C0, |a, b| a + b)
    }

    /// `max_{jk} |m_jk|`
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_{jk} |m_jk − m_kj|`
    pub fn asymmetry(&self) -> f64 {
        let mut a = 0.0f64;
        for j in 0..self.n {
            for k in j + 1..self.n {
                a = a.max((self[(j, k)] - self[(k, j)]).norm());
            }
        }
        a
    }

    /// `(M + Mᵀ)/2`
    pub fn symmetrize(&self) -> CMat {
        CMat::from_fn(self.n, |j, k| (self[(j, k)] + self[(k, j)]) * 0.5)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// LU factorisation with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0usize;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| a[(x, c)].norm().total_cmp(&a[(y, c)].norm()))
                .unwrap_or(c);
            let piv = a[(p, c)];
            if piv.is_zero() || !piv.re.is_finite() || !piv.im.is_finite() {
                return Err(Error::Singular);
            }
            if p != c {
                for k in 0..n {
                    a.data.swap(p * n + k, c * n + k);
                }
                perm.swap(p, c);
                swaps += 1;
            }
            for r in c + 1..n {
                let f = a[(r, c)] / piv;
                a[(r, c)] = f;
                for k in c + 1..n {
                    let t = a[(c, k)];
                    a[(r, k)] -= f * t;
                }
            }
        }
        Ok(Lu { a, perm, odd: swaps % 2 == 1 })
    }

    pub fn inverse(&self) -> Result<CMat> {
        let inv = self.lu()?.inverse();
        if inv.is_finite() {
            Ok(inv)
        } else {
            Err(Error::Singular)
        }
    }

    pub fn det(&self) -> Result<Complex64> {
        Ok(self.lu()?.det())
    }

    pub fn logdet(&self) -> Result<LogDet> {
        Ok(self.lu()?.logdet())
    }

    /// Principal square root (spectrum in the open right half-plane).
    ///
    /// Scaled Denman–Beavers iteration; requires no eigenvalue on the closed
    /// negative real axis.
    pub fn principal_sqrt(&self) -> Result<CMat> {
        let n = self.n;
        let norm = self.max_abs();
        if n == 0 || norm == 0.0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(CMat { n, data: vec![self.data[0].sqrt()] });
        }
        if self.is_diagonal() {
            return Ok(CMat::diag(&(0..n).map(|j| self[(j, j)].sqrt()).collect::<Vec<_>>()));
        }
        let mut y = self.clone();
        let mut z = CMat::identity(n);
        let mut scaling = true;
        let mut last = f64::INFINITY;
        let mut delta = f64::INFINITY;
        for it in 0..60 {
            let yi = y.inverse()?;
            let zi = z.inverse()?;
            let mu = if scaling {
                let dy = y.det()?;
                let dz = z.det()?;
                (dy * dz).norm().powf(-1.0 / (2.0 * n as f64))
            } else {
                1.0
            };
            let m = Complex64::new(mu, 0.0);
            let mi = Complex64::new(1.0 / mu, 0.0);
            let y1 = y.scale(m).add(&zi.scale(mi)).scale(Complex64::new(0.5, 0.0));
            let z1 = z.scale(m).add(&yi.scale(mi)).scale(Complex64::new(0.5, 0.0));
            delta = y1.sub(&y).max_abs();
            let scale = y1.max_abs();
            y = y1;
            z = z1;
            if delta < 1e-2 * scale {
                scaling = false;
            }
            // stop on tolerance, or when rounding noise stops further progress
            if delta <= 1e-14 * scale.max(norm) || (it > 3 && delta <= 1e-10 * scale && delta >= last) {
                let resid = y.mul(&y).sub(self).max_abs();
                if resid <= 1e-11 * norm.max(1.0) {
                    return Ok(y);
                }
                return Err(Error::NoConvergence { what: "matrix square root", iterations: it + 1, residual: resid });
            }
            last = delta;
        }
        Err(Error::NoConvergence { what: "matrix square root", iterations: 60, residual: delta })
    }

    fn is_diagonal(&self) -> bool {
        (0..self.n).all(|j| (0..self.n).all(|k| j == k || self[(j, k)].is_zero()))
    }
}

/// LU factors: unit-lower `L` below the diagonal, `U` on and above.
#[derive(Debug, Clone)]
pub struct Lu {
    a: CMat,
    perm: Vec<usize>,
    odd: bool,
}

impl Lu {
    pub fn det(&self) -> Complex64 {
        let d = (0..self.a.n).fold(C1, |acc, j| acc * self.a[(j, j)]);
        if self.odd {
            -d
        } else {
            d
        }
    }

    /// Pivot log-magnitudes and arguments summed, plus π for an odd permutation.
    pub fn logdet(&self) -> LogDet {
        let mut log_abs = 0.0;
        let mut phase = if self.odd { PI } else { 0.0 };
        for j in 0..self.a.n {
            let p = self.a[(j, j)];
            log_abs += p.norm().ln();
            phase += p.arg();
        }
        LogDet { log_abs, phase }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.a.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..n {
            for k in 0..j {
                let t = self.a[(j, k)] * x[k];
                x[j] -= t;
            }
        }
        for j in (0..n).rev() {
            for k in j + 1..n {
                let t = self.a[(j, k)] * x[k];
                x[j] -= t;
            }
            x[j] /= self.a[(j, j)];
        }
        x
    }

    pub fn inverse(&self) -> CMat {
        let n = self.a.n;
        let mut inv = CMat::zeros(n);
        let mut e = vec![C0; n];
        for k in 0..n {
            e.iter_mut().for_each(|v| *v = C0);
            e[k] = C1;
            let col = self.solve(&e);
            for j in 0..n {
                inv[(j, k)] = col[j];
            }
        }
        inv
    }
}

/// Determinant as `exp(log_abs + i·phase)` with an unreduced phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: f64,
}

impl LogDet {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    /// Phase reduced into `(−π, π]`.
    pub fn principal_phase(&self) -> f64 {
        let mut p = self.phase % (2.0 * PI);
        if p > PI {
            p -= 2.0 * PI;
        } else if p <= -PI {
            p += 2.0 * PI;
        }
        p
    }

    /// `det^p` on the principal branch of the final complex number.
    pub fn pow(&self, p: f64) -> Complex64 {
        Complex64::from_polar((p * self.log_abs).exp(), p * self.principal_phase())
    }

    pub fn mul(&self, other: &LogDet) -> LogDet {
        LogDet { log_abs: self.log_abs + other.log_abs, phase: self.phase + other.phase }
    }
}

/// `Σ_j a_j b_j` (bilinear, no conjugation).
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(C0, |acc, (x, y)| acc + x * y)
}

/// Tree summation; deterministic for a fixed input order.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => C0,
        1 => v[0],
        l if l <= 8 => v.iter().fold(C0, |a, b| a + b),
        l => {
            let (a, b) = v.split_at(l / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Real counterpart of [`pairwise_sum`].
pub fn pairwise_sum_real(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        l if l <= 8 => v.iter().sum(),
        l => {
            let (a, b) = v.split_at(l / 2);
            pairwise_sum_real(a) + pairwise_sum_real(b)
        }
    }
}

/// `rᵀMr`, pairwise-summed.
pub fn quad_form(m: &CMat, r: &[Complex64]) -> Result<Complex64> {
    if m.dim() != r.len() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: r.len() });
    }
    let n = r.len();
    let mut terms = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            terms.push(r[j] * m[(j, k)] * r[k]);
        }
    }
    Ok(pairwise_sum(&terms))
}

/// Eigen-decomposition of a real symmetric matrix (row-major) by cyclic Jacobi.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of a row-major matrix.
pub fn sym_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|j| (0..n).filter(move |&k| k != j).map(move |k| (j, k)))
            .map(|(j, k)| a[j * n + k] * a[j * n + k])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-300 || off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let vals = order.iter().map(|&j| a[j * n + j]).collect();
    let mut vecs = vec![0.0; n * n];
    for (c, &j) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + c] = v[k * n + j];
        }
    }
    (vals, vecs)
}

/// `f(S)` for real symmetric `S` through its spectrum: `V f(Λ) Vᵀ`.
pub fn sym_apply(a: &[f64], n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let (vals, vecs) = sym_eigen(a, n);
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        for k in 0..n {
            out[j * n + k] = (0..n).map(|l| vecs[j * n + l] * f(vals[l]) * vecs[k * n + l]).sum();
        }
    }
    out
}

/// Smallest eigenvalue of the symmetric part of `Re M`.
pub fn min_re_eigenvalue(m: &CMat) -> f64 {
    let n = m.dim();
    let s: Vec<f64> = (0..n * n).map(|i| 0.5 * (m[(i / n, i % n)].re + m[(i % n, i / n)].re)).collect();
    let (vals, _) = sym_eigen(&s, n);
    vals.first().copied().unwrap_or(f64::INFINITY)
}

/// True iff `sym(Re M)` has smallest eigenvalue above `tol·(1 + |tr|/n)`.
pub fn re_pd_check(m: &CMat, tol: f64) -> bool {
    let n = m.dim();
    if n == 0 {
        return true;
    }
    let scale = 1.0 + m.trace().re.abs() / n as f64;
    min_re_eigenvalue(m) > tol * scale
}

/// [`re_pd_check`] over raw rows, rejecting non-square input.
pub fn re_pd_check_rows(rows: &[Vec<Complex64>], tol: f64) -> Result<bool> {
    Ok(re_pd_check(&CMat::from_rows(rows)?, tol))
}

/// Complex symmetric matrix with positive-definite real part, plus the
/// derived quantities every evaluation needs.
///
/// `quarter_det` is `|Θ|^{1/4}` on the per-eigenvalue principal branch,
/// i.e. `det(Θ^{1/4})` with principal matrix roots.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyMatrix {
    m: CMat,
    inv: CMat,
    sqrt: CMat,
    inv_sqrt: CMat,
    quarter_det: Complex64,
}

impl AnisotropyMatrix {
    /// Validates symmetry and `Re Θ ≻ 0` with the default tolerance.
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tolerance(m, PD_TOL)
    }

    pub fn with_tolerance(m: CMat, tol: f64) -> Result<Self> {
        let m = Self::checked_symmetric(m)?;
        if !re_pd_check(&m, tol) {
            return Err(Error::NotRePositiveDefinite { matrix: "Θ", min_eigenvalue: min_re_eigenvalue(&m) });
        }
        Self::build(m)
    }

    /// Accepts any symmetric matrix with a principal square root, without the
    /// real-part test. Used for analytically continued arguments such as the
    /// imaginary eigen-anisotropies of the canonical transforms.
    pub fn analytic(m: CMat) -> Result<Self> {
        let m = Self::checked_symmetric(m)?;
        Self::build(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(CMat::from_real_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        let i = CMat::identity(n);
        AnisotropyMatrix { m: i.clone(), inv: i.clone(), sqrt: i.clone(), inv_sqrt: i, quarter_det: C1 }
    }

    fn checked_symmetric(m: CMat) -> Result<CMat> {
        let n = m.dim();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let asym = m.asymmetry();
        if asym > 1e-12 * m.max_abs().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(m.symmetrize())
    }

    fn build(m: CMat) -> Result<Self> {
        let inv = m.inverse()?.symmetrize();
        let sqrt = m.principal_sqrt()?.symmetrize();
        let inv_sqrt = sqrt.inverse()?.symmetrize();
        let quarter_det = sqrt.principal_sqrt()?.det()?;
        Ok(AnisotropyMatrix { m, inv, sqrt, inv_sqrt, quarter_det })
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// `Θ⁻¹`
    pub fn inv(&self) -> &CMat {
        &self.inv
    }

    /// `Θ^{1/2}`
    pub fn sqrt(&self) -> &CMat {
        &self.sqrt
    }

    /// `Θ^{−1/2}`
    pub fn inv_sqrt(&self) -> &CMat {
        &self.inv_sqrt
    }

    /// `|Θ|^{1/4}`
    pub fn quarter_det(&self) -> Complex64 {
        self.quarter_det
    }

    /// `|Θ|^{1/2}`
    pub fn half_det(&self) -> Complex64 {
        self.quarter_det * self.quarter_det
    }

    pub fn is_real(&self) -> bool {
        self.m.is_real()
    }

    pub fn is_re_pd(&self) -> bool {
        re_pd_check(&self.m, PD_TOL)
    }

    /// `Θ⁻¹` with its cached roots swapped in, so no iteration is repeated.
    pub fn inverse(&self) -> AnisotropyMatrix {
        AnisotropyMatrix {
            m: self.inv.clone(),
            inv: self.m.clone(),
            sqrt: self.inv_sqrt.clone(),
            inv_sqrt: self.sqrt.clone(),
            quarter_det: C1 / self.quarter_det,
        }
    }

    /// `Θ*`
    pub fn conj(&self) -> AnisotropyMatrix {
        AnisotropyMatrix {
            m: self.m.conj(),
            inv: self.inv.conj(),
            sqrt: self.sqrt.conj(),
            inv_sqrt: self.inv_sqrt.conj(),
            quarter_det: self.quarter_det.conj(),
        }
    }
}
