//! Independent numerical routes used to check every closed form.
//!
//! Nothing in here calls the decomposition-based evaluator: mode values come
//! from [`LiteralMode`], which differentiates the Gaussian symbolically.

mod fd;
mod literal;
mod quadrature;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ahg::ModeExpansion;
use crate::cmatrix::{pairwise_sum, pairwise_sum_real, AnisotropyMatrix};
use crate::multiindex::enumerate_up_to_degree;
use crate::Result;

pub use fd::{fd_gradient, fd_hessian, fd_jacobian, fd_laplacian};
pub use literal::LiteralMode;
pub use quadrature::{gauss_hermite_rule, Envelope, GaussHermite, QuadResult, QuadratureRule, TAIL_WARNING};

/// Default nodes per axis.
pub const DEFAULT_NODES: usize = 64;

/// `⟨f, g⟩ = ∫ f(x) g(x)* dx`, whitened by the envelope of `theta_hint`.
pub fn inner_product(
    f: impl Fn(&[f64]) -> Complex64,
    g: impl Fn(&[f64]) -> Complex64,
    theta_hint: &AnisotropyMatrix,
    m: usize,
) -> Result<QuadResult> {
    let rule = QuadratureRule::for_theta(theta_hint, m)?;
    Ok(rule.integrate(|x| f(x) * g(x).conj()))
}

/// `∫ f(x) g(x) dx`, the pairing without conjugation.
pub fn bilinear_product(
    f: impl Fn(&[f64]) -> Complex64,
    g: impl Fn(&[f64]) -> Complex64,
    theta_hint: &AnisotropyMatrix,
    m: usize,
) -> Result<QuadResult> {
    let rule = QuadratureRule::for_theta(theta_hint, m)?;
    Ok(rule.integrate(|x| f(x) * g(x)))
}

/// Coefficients `a_ν = ⟨f, H̃G^Θ_ν⟩` for `|ν| ≤ max_order`, plus diagnostics.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub coefficients: ModeExpansion,
    /// `‖f − Σ a_ν HG_ν‖ / ‖f‖` in `L²`, measured on the quadrature grid.
    pub residual: f64,
    /// Tail ratio of `∫|f|²` on the grid; large values mean `theta` misses `f`'s envelope.
    pub tail_ratio: f64,
}

pub fn expand(
    f: impl Fn(&[f64]) -> Complex64,
    theta: &AnisotropyMatrix,
    max_order: u32,
    m: usize,
) -> Result<Expansion> {
    let n = theta.dim();
    let rule = QuadratureRule::for_theta(theta, m)?;
    let pts = rule.points();
    let fx: Vec<Complex64> = pts.iter().map(|(x, _)| f(x)).collect();
    let degrees = enumerate_up_to_degree(n, max_order)?;
    let mut terms = BTreeMap::new();
    let mut synth = alloc::vec![Complex64::new(0.0, 0.0); pts.len()];
    for nu in degrees {
        let dual = LiteralMode::dual(theta, &nu)?;
        let primal = LiteralMode::new(theta, &nu)?;
        let mut terms_nu = Vec::with_capacity(pts.len());
        for ((x, w), fv) in pts.iter().zip(&fx) {
            terms_nu.push(fv * dual.eval_real(x)?.conj() * *w);
        }
        let a = pairwise_sum(&terms_nu);
        for ((x, _), s) in pts.iter().zip(synth.iter_mut()) {
            *s += a * primal.eval_real(x)?;
        }
        terms.insert(nu, a);
    }
    let num: Vec<f64> = pts.iter().zip(&fx).zip(&synth).map(|(((_, w), fv), s)| w * (fv - s).norm_sqr()).collect();
    let den: Vec<f64> = pts.iter().zip(&fx).map(|((_, w), fv)| w * fv.norm_sqr()).collect();
    let d = pairwise_sum_real(&den);
    let residual = if d > 0.0 { (pairwise_sum_real(&num) / d).sqrt() } else { 0.0 };
    let tail_ratio = rule.integrate(|x| f(x).norm_sqr().into()).tail_ratio;
    Ok(Expansion { coefficients: ModeExpansion::new(theta.clone(), terms, None)?, residual, tail_ratio })
}

#[cfg(test)]
mod tests;
