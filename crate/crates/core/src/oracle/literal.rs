//! The defining formula, evaluated literally:
//! `HG^Θ_ν(r) = (−1/√2)^{|ν|} e^{½rᵀQr} ∂^ν e^{−rᵀQr} / (√ν! (πⁿ|Θ|)^{1/4})`.
//!
//! `∂^ν e^{−rᵀQr} = P_ν(r) e^{−rᵀQr}` with `P` built by repeated application
//! of `∂_j(P e) = (∂_j P − 2(Qr)_j P) e`. Shares nothing with the
//! decomposition path except the cached `|Θ|^{1/4}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmatrix::{quad_form, AnisotropyMatrix};
use crate::multiindex::MultiIndex;
use crate::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;

type Poly = BTreeMap<Vec<u32>, Complex64>;

/// A mode prepared for literal evaluation.
#[derive(Debug, Clone)]
pub struct LiteralMode {
    theta: AnisotropyMatrix,
    poly: Vec<(Vec<u32>, Complex64)>,
    dual: bool,
}

impl LiteralMode {
    pub fn new(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<Self> {
        Self::build(theta, nu, false)
    }

    /// Dual via `|Θ|^{-1/2} HG^{Θ⁻¹}_ν(Θ⁻¹ r)`.
    pub fn dual(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<Self> {
        Self::build(theta, nu, true)
    }

    fn build(theta: &AnisotropyMatrix, nu: &MultiIndex, dual: bool) -> Result<Self> {
        let n = theta.dim();
        if nu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
        }
        let base = if dual { theta.inverse() } else { theta.clone() };
        let q = base.inv();
        let mut p: Poly = BTreeMap::new();
        p.insert(vec![0; n], Complex64::new(1.0, 0.0));
        for (j, &times) in nu.entries().iter().enumerate() {
            for _ in 0..times {
                let mut next: Poly = BTreeMap::new();
                for (e, c) in &p {
                    if e[j] > 0 {
                        let mut d = e.clone();
                        d[j] -= 1;
                        *next.entry(d).or_default() += c * e[j] as f64;
                    }
                    for k in 0..n {
                        let qjk = q[(j, k)];
                        if qjk == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut d = e.clone();
                        d[k] += 1;
                        *next.entry(d).or_default() -= c * qjk * 2.0;
                    }
                }
                p = next;
            }
        }
        let deg = nu.degree() as f64;
        let sign = if nu.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
        let scale = sign * (-0.5 * deg * core::f64::consts::LN_2 - 0.5 * nu.factorial_log() - 0.25 * n as f64 * LN_PI).exp();
        let norm = Complex64::new(scale, 0.0) / base.quarter_det();
        let poly = p.into_iter().map(|(e, c)| (e, c * norm)).collect();
        Ok(LiteralMode { theta: base, poly, dual })
    }

    pub fn eval(&self, r: &[Complex64]) -> Result<Complex64> {
        let n = self.theta.dim();
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        // for the dual, `theta` already holds Θ⁻¹, whose inverse is Θ
        let (x, scale) = if self.dual {
            let x = self.theta.matrix().mul_vec(r);
            (x, self.theta.half_det())
        } else {
            (r.to_vec(), Complex64::new(1.0, 0.0))
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.poly {
            let mut t = *c;
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    t *= x[k].powu(p);
                }
            }
            acc += t;
        }
        let env = (-quad_form(self.theta.inv(), &x)? * 0.5).exp();
        Ok(acc * env * scale)
    }

    pub fn eval_real(&self, r: &[f64]) -> Result<Complex64> {
        let r: Vec<Complex64> = r.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval(&r)
    }
}
