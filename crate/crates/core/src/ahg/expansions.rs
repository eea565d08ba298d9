//! Finite re-expansions of AHG functions: change of anisotropy, shifted
//! argument, and products of two modes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{colsum_coefficients, gauss_norm, plan_parts, real_vec, AhgMode, Plan};
use crate::cmatrix::{quad_form, AnisotropyMatrix, CMat};
use crate::multiindex::{enumerate_below, enumerate_product_matrices, ln_binom, MultiIndex};
use crate::{Error, Result};

/// `Σ_μ c_μ HG^Θ_μ(T r)` (or `H̃G^Θ_μ` when `dual`), over a finite key set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeExpansion {
    theta: AnisotropyMatrix,
    terms: BTreeMap<MultiIndex, Complex64>,
    argument_map: Option<CMat>,
    dual: bool,
    plan: Plan,
}

impl ModeExpansion {
    pub fn new(
        theta: AnisotropyMatrix,
        terms: BTreeMap<MultiIndex, Complex64>,
        argument_map: Option<CMat>,
    ) -> Result<Self> {
        Self::build(theta, terms, argument_map, false)
    }

    /// Expansion over the dual modes `H̃G^Θ_μ`.
    pub fn new_dual(theta: AnisotropyMatrix, terms: BTreeMap<MultiIndex, Complex64>) -> Result<Self> {
        Self::build(theta, terms, None, true)
    }

    fn build(
        theta: AnisotropyMatrix,
        terms: BTreeMap<MultiIndex, Complex64>,
        argument_map: Option<CMat>,
        dual: bool,
    ) -> Result<Self> {
        let n = theta.dim();
        if let Some(t) = &argument_map {
            if t.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: t.dim() });
            }
        }
        let mut merged: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        let mut map = None;
        for (nu, a) in &terms {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Domain(alloc::format!("non-finite coefficient for {nu}")));
            }
            if nu.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
            }
            let (m, t) = plan_parts(&theta, nu, dual)?;
            for (mu, c) in t {
                *merged.entry(mu).or_default() += c * a;
            }
            map = Some(m);
        }
        let base = match map {
            Some(m) => m,
            None => plan_parts(&theta, &MultiIndex::zeros(n), dual)?.0,
        };
        let full = match &argument_map {
            Some(t) => base.mul(t),
            None => base,
        };
        let plan = Plan::from_terms(full, merged);
        Ok(ModeExpansion { theta, terms, argument_map, dual, plan })
    }

    pub fn theta(&self) -> &AnisotropyMatrix {
        &self.theta
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    /// Absent keys mean zero.
    pub fn coefficient(&self, nu: &MultiIndex) -> Complex64 {
        self.terms.get(nu).copied().unwrap_or_default()
    }

    pub fn argument_map(&self) -> Option<&CMat> {
        self.argument_map.as_ref()
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, r: &[Complex64]) -> Result<Complex64> {
        if r.len() != self.theta.dim() {
            return Err(Error::DimensionMismatch { expected: self.theta.dim(), found: r.len() });
        }
        Ok(self.plan.eval(r))
    }

    pub fn eval_real(&self, r: &[f64]) -> Result<Complex64> {
        self.eval(&real_vec(r))
    }
}

/// Re-expands `HG^{Θ₁}_ν(r)` as `Σ_μ c_μ HG^{Θ₂}_μ(T r)` with
/// `T = Θ₂^{1/2} Θ₁^{-1/2}` and
/// `c_μ = |T|^{1/2} Σ_Ω T^Ω/Ω! · √(ν!μ!)` over `Ω` with column sums `ν`, row sums `μ`.
pub fn anisotropy_transform(
    theta1: &AnisotropyMatrix,
    theta2: &AnisotropyMatrix,
    nu: &MultiIndex,
) -> Result<ModeExpansion> {
    if theta1.dim() != theta2.dim() {
        return Err(Error::DimensionMismatch { expected: theta1.dim(), found: theta2.dim() });
    }
    if nu.len() != theta1.dim() {
        return Err(Error::DimensionMismatch { expected: theta1.dim(), found: nu.len() });
    }
    // identical anisotropies give T = I exactly, so the expansion is the mode itself
    let (t, det_half) = if theta1.matrix() == theta2.matrix() {
        (CMat::identity(theta1.dim()), Complex64::new(1.0, 0.0))
    } else {
        (theta2.sqrt().mul(theta1.inv_sqrt()), theta2.quarter_det() / theta1.quarter_det())
    };
    let mut terms = colsum_coefficients(&t, nu)?;
    for c in terms.values_mut() {
        *c *= det_half;
    }
    ModeExpansion::new(theta2.clone(), terms, Some(t))
}

/// `HG_ν(r + s)` as a finite sum in `r` with precomputed constants `HG_μ(√2 s)`.
#[derive(Debug, Clone)]
pub struct OffsetExpansion {
    theta: AnisotropyMatrix,
    s: Vec<Complex64>,
    prefactor: Complex64,
    terms: Vec<(f64, AhgMode, Complex64)>,
}

impl OffsetExpansion {
    pub fn eval(&self, r: &[Complex64]) -> Result<Complex64> {
        let n = self.theta.dim();
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        let d: Vec<Complex64> = r.iter().zip(&self.s).map(|(a, b)| a - b).collect();
        let env = (quad_form(self.theta.inv(), &d)? * 0.5).exp();
        let r2: Vec<Complex64> = r.iter().map(|x| x * core::f64::consts::SQRT_2).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, mode, c) in &self.terms {
            acc += mode.value(&r2) * c * *w;
        }
        Ok(self.prefactor * env * acc)
    }

    pub fn eval_real(&self, r: &[f64]) -> Result<Complex64> {
        self.eval(&real_vec(r))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `HG_ν(r+s) = 2^{-|ν|/2}(πⁿ|Θ|)^{1/4} e^{½(r−s)ᵀΘ⁻¹(r−s)} Σ_{μ⪯ν} √C(ν,μ) HG_{ν−μ}(√2 r) HG_μ(√2 s)`
pub fn offset_expansion(theta: &AnisotropyMatrix, nu: &MultiIndex, s: &[Complex64]) -> Result<OffsetExpansion> {
    let n = theta.dim();
    if nu.len() != n || s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if nu.len() != n { nu.len() } else { s.len() } });
    }
    let s2: Vec<Complex64> = s.iter().map(|x| x * core::f64::consts::SQRT_2).collect();
    let mut terms = Vec::new();
    for mu in enumerate_below(nu)? {
        let rest = nu.checked_sub(&mu).expect("μ ⪯ ν");
        let w = (0.5 * ln_binom(nu, &mu)).exp();
        let c = AhgMode::new(theta.clone(), mu)?.value(&s2);
        terms.push((w, AhgMode::new(theta.clone(), rest)?, c));
    }
    let prefactor = gauss_norm(theta) * (-0.5 * nu.degree() as f64 * core::f64::consts::LN_2).exp();
    Ok(OffsetExpansion { theta: theta.clone(), s: s.to_vec(), prefactor, terms })
}

/// `HG_ν · HG_μ = e^{-½rᵀΘ⁻¹r} Σ_κ c_κ HG_κ`.
#[derive(Debug, Clone)]
pub struct ProductExpansion {
    expansion: ModeExpansion,
}

impl ProductExpansion {
    /// Coefficients keyed by `κ = β + γ`.
    pub fn expansion(&self) -> &ModeExpansion {
        &self.expansion
    }

    pub fn eval(&self, r: &[Complex64]) -> Result<Complex64> {
        let w = (-quad_form(self.expansion.theta().inv(), r)? * 0.5).exp();
        Ok(w * self.expansion.eval(r)?)
    }

    pub fn eval_real(&self, r: &[f64]) -> Result<Complex64> {
        self.eval(&real_vec(r))
    }
}

/// Product of two modes over a common `Θ`: for `κ = β+γ`,
/// `c_κ = √(ν!μ!/2^{|ν|+|μ|}) (πⁿ|Θ|)^{-1/4} Σ_Ω (2Θ⁻¹)^Ω √(2^{|κ|} κ!)/(Ω! β! γ!)`.
pub fn product_expansion(theta: &AnisotropyMatrix, nu: &MultiIndex, mu: &MultiIndex) -> Result<ProductExpansion> {
    let n = theta.dim();
    for m in [nu, mu] {
        if m.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
    }
    let two_q = theta.inv().scale(Complex64::new(2.0, 0.0));
    let ln2 = core::f64::consts::LN_2;
    let base = 0.5 * (nu.factorial_log() + mu.factorial_log()) - 0.5 * (nu.degree() + mu.degree()) as f64 * ln2;
    let inv_norm = Complex64::new(1.0, 0.0) / gauss_norm(theta);
    let mut terms: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for t in enumerate_product_matrices(nu, mu)? {
        let kappa = t.beta.add(&t.gamma);
        let ln = base + 0.5 * (kappa.degree() as f64 * ln2 + kappa.factorial_log())
            - t.omega.factorial_log()
            - t.beta.factorial_log()
            - t.gamma.factorial_log();
        *terms.entry(kappa).or_default() += t.omega.pow(&two_q) * ln.exp() * inv_norm;
    }
    Ok(ProductExpansion { expansion: ModeExpansion::new(theta.clone(), terms, None)? })
}
