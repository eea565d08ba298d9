//! Derivatives of `HG^Θ_ν` through degree-lowered modes.
//!
//! With `Q = Θ⁻¹`, `φ_k = √(ν_k/2) HG_{ν−ε_k}` and
//! `Φ_jk = √(ν_j(ν_k − δ_jk)) HG_{ν−ε_j−ε_k}`:
//!
//! ```text
//! ∇HG  = Q(2φ − r HG)
//! ∇²HG = −Q HG + 2Q(Φ − rφᵀ − φrᵀ + ½ rrᵀ HG)Q
//! ΔHG  = −HG tr Q + 2 tr(Q²Φ) − 4 φᵀQ²r + HG rᵀQ²r
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::AhgMode;
use crate::cmatrix::{dot, AnisotropyMatrix, CMat};
use crate::multiindex::MultiIndex;
use crate::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// A mode together with its once- and twice-lowered companions.
#[derive(Debug, Clone)]
pub struct ModeDerivatives {
    base: AhgMode,
    /// `√(ν_k/2)`-weighted `ν − ε_k`
    once: Vec<Option<(f64, AhgMode)>>,
    /// row-major `Φ` entries with their weights
    twice: Vec<Option<(f64, AhgMode)>>,
    q: CMat,
    q2: CMat,
}

impl ModeDerivatives {
    pub fn new(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<Self> {
        let n = theta.dim();
        if nu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
        }
        let base = AhgMode::new(theta.clone(), nu.clone())?;
        let mut once = Vec::with_capacity(n);
        for k in 0..n {
            once.push(match nu.lowered(k) {
                Some(m) => Some(((nu.get(k) as f64 / 2.0).sqrt(), AhgMode::new(theta.clone(), m)?)),
                None => None,
            });
        }
        let mut twice: Vec<Option<(f64, AhgMode)>> = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let lowered = nu.lowered(j).and_then(|m| m.lowered(k));
                twice.push(match lowered {
                    Some(m) => {
                        let w = if j == k {
                            (nu.get(j) as f64 * (nu.get(j) as f64 - 1.0)).sqrt()
                        } else {
                            (nu.get(j) as f64 * nu.get(k) as f64).sqrt()
                        };
                        // Φ is symmetric; reuse the mirrored mode
                        if k < j {
                            twice[k * n + j].clone()
                        } else {
                            Some((w, AhgMode::new(theta.clone(), m)?))
                        }
                    }
                    None => None,
                });
            }
        }
        let q = theta.inv().clone();
        let q2 = q.mul(&q);
        Ok(ModeDerivatives { base, once, twice, q, q2 })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn check(&self, r: &[Complex64]) -> Result<()> {
        if r.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: r.len() });
        }
        Ok(())
    }

    pub fn value(&self, r: &[Complex64]) -> Result<Complex64> {
        self.check(r)?;
        Ok(self.base.value(r))
    }

    /// `φ_ν(r)`
    pub fn lowering_vector(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(r)?;
        Ok(self.phi(r))
    }

    fn phi(&self, r: &[Complex64]) -> Vec<Complex64> {
        self.once.iter().map(|o| o.as_ref().map_or(C0, |(w, m)| m.value(r) * *w)).collect()
    }

    /// `Φ_ν(r)`
    pub fn lowering_matrix(&self, r: &[Complex64]) -> Result<CMat> {
        self.check(r)?;
        Ok(self.big_phi(r))
    }

    fn big_phi(&self, r: &[Complex64]) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n);
        for j in 0..n {
            for k in j..n {
                let v = self.twice[j * n + k].as_ref().map_or(C0, |(w, m)| m.value(r) * *w);
                out[(j, k)] = v;
                out[(k, j)] = v;
            }
        }
        out
    }

    /// `∂HG/∂r_j = q_jᵀ(2φ − r HG)`
    pub fn partial(&self, r: &[Complex64], j: usize) -> Result<Complex64> {
        self.check(r)?;
        if j >= self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: j + 1 });
        }
        let v = self.inner(r);
        Ok(dot(self.q.row(j), &v))
    }

    fn inner(&self, r: &[Complex64]) -> Vec<Complex64> {
        let hg = self.base.value(r);
        self.phi(r).iter().zip(r).map(|(p, x)| p * 2.0 - x * hg).collect()
    }

    pub fn gradient(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(r)?;
        Ok(self.q.mul_vec(&self.inner(r)))
    }

    pub fn hessian(&self, r: &[Complex64]) -> Result<CMat> {
        self.check(r)?;
        let n = self.dim();
        let hg = self.base.value(r);
        let phi = self.phi(r);
        let big = self.big_phi(r);
        let m = CMat::from_fn(n, |j, k| big[(j, k)] - r[j] * phi[k] - phi[j] * r[k] + r[j] * r[k] * hg * 0.5);
        let h = self.q.mul(&m).mul(&self.q).scale(Complex64::new(2.0, 0.0)).sub(&self.q.scale(hg));
        Ok(h.symmetrize())
    }

    /// Evaluated directly, not as the trace of the Hessian.
    pub fn laplacian(&self, r: &[Complex64]) -> Result<Complex64> {
        self.check(r)?;
        let hg = self.base.value(r);
        let phi = self.phi(r);
        let big = self.big_phi(r);
        let q2r = self.q2.mul_vec(r);
        let tr_q2_phi = self.q2.mul(&big).trace();
        Ok(-hg * self.q.trace() + tr_q2_phi * 2.0 - dot(&phi, &q2r) * 4.0 + hg * dot(r, &q2r))
    }
}

pub fn lowering_vector(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<Vec<Complex64>> {
    ModeDerivatives::new(theta, nu)?.lowering_vector(r)
}

pub fn lowering_matrix(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<CMat> {
    ModeDerivatives::new(theta, nu)?.lowering_matrix(r)
}

pub fn partial(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64], j: usize) -> Result<Complex64> {
    ModeDerivatives::new(theta, nu)?.partial(r, j)
}

pub fn gradient(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<Vec<Complex64>> {
    ModeDerivatives::new(theta, nu)?.gradient(r)
}

pub fn hessian(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<CMat> {
    ModeDerivatives::new(theta, nu)?.hessian(r)
}

pub fn laplacian(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<Complex64> {
    ModeDerivatives::new(theta, nu)?.laplacian(r)
}
