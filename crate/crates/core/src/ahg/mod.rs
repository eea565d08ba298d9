//! AHG functions `HG^Θ_ν`, their duals `H̃G^Θ_ν`, and the §3 identities.
//!
//! Evaluation goes through the dimensional decomposition: with
//! `s = Θ^{-1/2} r`,
//!
//! ```text
//! HG^Θ_ν(r) = √ν! |Θ|^{-1/4} Σ_Ω (Θ^{-1/2})^Ω / Ω! · √μ! · Π_k hg_{μ_k}(s_k)
//! ```
//!
//! summed over all `Ω` with column sums `ν` (row sums `μ`). Terms sharing a
//! `μ` are merged once when a mode is built, so an evaluation costs one
//! matrix-vector product, `n` univariate tables and one pass over the merged
//! coefficients.

mod derivatives;
mod expansions;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmatrix::{quad_form, AnisotropyMatrix, CMat};
use crate::hermite1d::hg1_all;
use crate::multiindex::{enumerate_colsum_matrices, enumerate_up_to_degree, MultiIndex};
use crate::{Error, Result};

pub use derivatives::{gradient, hessian, laplacian, lowering_matrix, lowering_vector, partial, ModeDerivatives};
pub use expansions::{
    anisotropy_transform, offset_expansion, product_expansion, ModeExpansion, OffsetExpansion, ProductExpansion,
};

const LN_PI: f64 = 1.144_729_885_849_400_2;

fn real_vec(r: &[f64]) -> Vec<Complex64> {
    r.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// `Σ_Ω T^Ω/Ω! · √(ν!μ!)` keyed by the row sums `μ`, over every `Ω` with
/// column sums `ν`. Duplicates merge in enumeration order.
pub(crate) fn colsum_coefficients(t: &CMat, nu: &MultiIndex) -> Result<BTreeMap<MultiIndex, Complex64>> {
    let half_nu = 0.5 * nu.factorial_log();
    let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for omega in enumerate_colsum_matrices(nu, nu.len())? {
        let pw = omega.pow(t);
        if pw == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mu = omega.row_sums();
        let mag = (half_nu + 0.5 * mu.factorial_log() - omega.factorial_log()).exp();
        *out.entry(mu).or_default() += pw * mag;
    }
    Ok(out)
}

/// Compiled evaluation plan: `Σ_μ c_μ Π_k hg_{μ_k}((M r)_k)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Plan {
    map: CMat,
    terms: Vec<(Vec<u32>, Complex64)>,
    orders: Vec<u32>,
}

impl Plan {
    pub(crate) fn from_terms(map: CMat, terms: BTreeMap<MultiIndex, Complex64>) -> Self {
        let n = map.dim();
        let mut orders = alloc::vec![0u32; n];
        let terms: Vec<(Vec<u32>, Complex64)> = terms
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(mu, c)| {
                for (o, &m) in orders.iter_mut().zip(mu.entries()) {
                    *o = (*o).max(m);
                }
                (mu.entries().to_vec(), c)
            })
            .collect();
        Plan { map, terms, orders }
    }

    pub(crate) fn eval(&self, r: &[Complex64]) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let s = self.map.mul_vec(r);
        let tables: Vec<Vec<Complex64>> = s.iter().zip(&self.orders).map(|(&z, &o)| hg1_all(o, z)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (mu, c) in &self.terms {
            let mut p = *c;
            for (k, &m) in mu.iter().enumerate() {
                p *= tables[k][m as usize];
            }
            acc += p;
        }
        acc
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }
}

/// Decomposition coefficients of `HG^Θ_ν`, already scaled by `|Θ|^{-1/4}`.
pub(crate) fn mode_terms(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<BTreeMap<MultiIndex, Complex64>> {
    let mut terms = colsum_coefficients(theta.inv_sqrt(), nu)?;
    let inv_n = Complex64::new(1.0, 0.0) / theta.quarter_det();
    for c in terms.values_mut() {
        *c *= inv_n;
    }
    Ok(terms)
}

/// Argument map and merged coefficients for one primal or dual mode.
///
/// The dual is the literal composition `|Θ|^{-1/2} HG^{Θ⁻¹}_ν(Θ⁻¹ r)`.
pub(crate) fn plan_parts(
    theta: &AnisotropyMatrix,
    nu: &MultiIndex,
    dual: bool,
) -> Result<(CMat, BTreeMap<MultiIndex, Complex64>)> {
    if !dual {
        return Ok((theta.inv_sqrt().clone(), mode_terms(theta, nu)?));
    }
    let inv = theta.inverse();
    let mut terms = mode_terms(&inv, nu)?;
    let s = Complex64::new(1.0, 0.0) / theta.half_det();
    for c in terms.values_mut() {
        *c *= s;
    }
    Ok((inv.inv_sqrt().mul(theta.inv()), terms))
}

/// One basis function: `HG^Θ_ν`, or its dual `H̃G^Θ_ν` when `dual` is set.
///
/// A degree with a negative entry yields the canonical zero mode, which
/// evaluates to exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AhgMode {
    theta: AnisotropyMatrix,
    nu: Option<MultiIndex>,
    dual: bool,
    plan: Plan,
}

impl AhgMode {
    pub fn new(theta: AnisotropyMatrix, nu: MultiIndex) -> Result<Self> {
        Self::build(theta, Some(nu), false)
    }

    /// `H̃G^Θ_ν(r) = |Θ|^{-1/2} HG^{Θ⁻¹}_ν(Θ⁻¹r)`
    pub fn dual(theta: AnisotropyMatrix, nu: MultiIndex) -> Result<Self> {
        Self::build(theta, Some(nu), true)
    }

    /// Accepts signed degrees; any negative entry gives the zero mode.
    pub fn from_signed(theta: AnisotropyMatrix, nu: &[i64], dual: bool) -> Result<Self> {
        if nu.len() != theta.dim() {
            return Err(Error::DimensionMismatch { expected: theta.dim(), found: nu.len() });
        }
        Self::build(theta, MultiIndex::from_signed(nu), dual)
    }

    fn build(theta: AnisotropyMatrix, nu: Option<MultiIndex>, dual: bool) -> Result<Self> {
        let n = theta.dim();
        let plan = match &nu {
            None => Plan::from_terms(CMat::identity(n), BTreeMap::new()),
            Some(nu) => {
                if nu.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
                }
                let (map, terms) = plan_parts(&theta, nu, dual)?;
                Plan::from_terms(map, terms)
            }
        };
        Ok(AhgMode { theta, nu, dual, plan })
    }

    pub fn theta(&self) -> &AnisotropyMatrix {
        &self.theta
    }

    /// `None` for the zero mode.
    pub fn nu(&self) -> Option<&MultiIndex> {
        self.nu.as_ref()
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn is_zero(&self) -> bool {
        self.nu.is_none()
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    /// Number of merged decomposition terms.
    pub fn term_count(&self) -> usize {
        self.plan.len()
    }

    pub fn eval(&self, r: &[Complex64]) -> Result<Complex64> {
        if r.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: r.len() });
        }
        Ok(self.plan.eval(r))
    }

    pub fn eval_real(&self, r: &[f64]) -> Result<Complex64> {
        self.eval(&real_vec(r))
    }

    /// Unchecked evaluation for hot loops that already validated the length.
    pub(crate) fn value(&self, r: &[Complex64]) -> Complex64 {
        self.plan.eval(r)
    }
}

/// `HG^Θ_ν(r)`
pub fn eval(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<Complex64> {
    AhgMode::new(theta.clone(), nu.clone())?.eval(r)
}

/// `H̃G^Θ_ν(r)`
pub fn eval_dual(theta: &AnisotropyMatrix, nu: &MultiIndex, r: &[Complex64]) -> Result<Complex64> {
    AhgMode::dual(theta.clone(), nu.clone())?.eval(r)
}

/// `(πⁿ|Θ|)^{1/4}`
pub(crate) fn gauss_norm(theta: &AnisotropyMatrix) -> Complex64 {
    theta.quarter_det() * (0.25 * LN_PI * theta.dim() as f64).exp()
}

/// Partial sum `Σ_{|ν| ≤ max_order} √(2^{|ν|}/ν!) x^ν HG_ν(r)` of the
/// generating function.
pub fn generating_sum(theta: &AnisotropyMatrix, x: &[Complex64], r: &[Complex64], max_order: u32) -> Result<Complex64> {
    let n = theta.dim();
    for v in [x, r] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for nu in enumerate_up_to_degree(n, max_order)? {
        let w = (0.5 * (nu.degree() as f64 * core::f64::consts::LN_2 - nu.factorial_log())).exp();
        let xv = nu.pow(x);
        if xv == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += xv * w * AhgMode::new(theta.clone(), nu)?.value(r);
    }
    Ok(acc)
}

/// Closed right-hand side `e^{−½rᵀΘ⁻¹r + xᵀΘ⁻¹(2r−x)} / (πⁿ|Θ|)^{1/4}`.
pub fn generating_closed(theta: &AnisotropyMatrix, x: &[Complex64], r: &[Complex64]) -> Result<Complex64> {
    let q = theta.inv();
    let rr = quad_form(q, r)?;
    let d: Vec<Complex64> = r.iter().zip(x).map(|(a, b)| a * 2.0 - b).collect();
    let qx = q.mul_vec(x);
    let cross = qx.iter().zip(&d).fold(Complex64::new(0.0, 0.0), |s, (a, b)| s + a * b);
    Ok((-rr * 0.5 + cross).exp() / gauss_norm(theta))
}

/// `HG^Θ_ν(0)` in closed form: `√ν! (πⁿ|Θ|)^{-1/4}` times the sum over `Ω`
/// with column sums `ν` and even row sums `μ` of `(Θ^{-1/2})^Ω/Ω! · i^{|μ|} (μ−𝟙)!!`.
pub fn eval_at_zero(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<Complex64> {
    if nu.len() != theta.dim() {
        return Err(Error::DimensionMismatch { expected: theta.dim(), found: nu.len() });
    }
    let t = theta.inv_sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for omega in enumerate_colsum_matrices(nu, nu.len())? {
        let mu = omega.row_sums();
        if mu.entries().iter().any(|m| m % 2 == 1) {
            continue;
        }
        let ln_df: f64 = mu
            .entries()
            .iter()
            .map(|&m| crate::multiindex::ln_double_factorial(m as i64 - 1).unwrap_or(0.0))
            .sum();
        let phase = match mu.degree() % 4 {
            0 => Complex64::new(1.0, 0.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => unreachable!("even row sums"),
        };
        acc += omega.pow(t) * phase * (ln_df - omega.factorial_log()).exp();
    }
    Ok(acc * (0.5 * nu.factorial_log()).exp() / gauss_norm(theta))
}

#[cfg(test)]
mod tests;
