//! Wigner–Ville distribution of AHG modes and expansions.
//!
//! `W{f}(r, ζ) = (2π)^{−n/2} ∫ f(r − ½ξ) f*(r + ½ξ) e^{−iξ·ζ} dξ`.
//!
//! For real `Θ` the pair kernel is
//!
//! ```text
//! K_{ν,μ}(r, ζ) = (4ⁿπⁿ|Θ|)^{1/4} e^{−½ζᵀΘζ}
//!     Σ_{τ⪯ν, σ⪯μ} (−1)^{|μ−σ|} i^{|α|} √(C(ν,τ) C(μ,σ) C(α, ν−τ))
//!         HG_τ(r) HG_σ(r) H̃G^{Θ⁻¹}_α(ζ),        α = ν + μ − τ − σ
//! ```
//!
//! and `K_{μ,ν} = K_{ν,μ}*` at real phase points.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ahg::{gauss_norm, AhgMode, ModeExpansion};
use crate::cmatrix::{quad_form, AnisotropyMatrix};
use crate::multiindex::{enumerate_below, enumerate_up_to_degree, ln_binom, MultiIndex};
use crate::oracle::{Envelope, QuadResult, QuadratureRule};
use crate::{Error, Result};

/// A point `(r, ζ)` of phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    r: Vec<f64>,
    zeta: Vec<f64>,
}

impl PhasePoint {
    pub fn new(r: Vec<f64>, zeta: Vec<f64>) -> Result<Self> {
        if r.len() != zeta.len() {
            return Err(Error::DimensionMismatch { expected: r.len(), found: zeta.len() });
        }
        if r.iter().chain(&zeta).any(|x| !x.is_finite()) {
            return Err(Error::Domain("phase point has non-finite entries".to_string()));
        }
        Ok(PhasePoint { r, zeta })
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }
}

fn cvec(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Precompiled modes for evaluating pair kernels up to a fixed degree.
///
/// Holds `HG^Θ_τ` for `|τ| ≤ max_order` and `H̃G^{Θ⁻¹}_α` for `|α| ≤ 2·max_order`.
#[derive(Debug, Clone)]
pub struct WvdEngine {
    theta: AnisotropyMatrix,
    max_order: u32,
    primal: BTreeMap<MultiIndex, AhgMode>,
    dual: BTreeMap<MultiIndex, AhgMode>,
    scale: f64,
}

/// Mode values at one phase point.
struct Tables {
    hg: BTreeMap<MultiIndex, Complex64>,
    dual: BTreeMap<MultiIndex, Complex64>,
    envelope: Complex64,
}

impl WvdEngine {
    pub fn new(theta: &AnisotropyMatrix, max_order: u32) -> Result<Self> {
        if !theta.is_real() {
            return Err(Error::Unsupported("Wigner-Ville closed form needs a real Θ".to_string()));
        }
        if !theta.is_re_pd() {
            return Err(Error::NotRePositiveDefinite {
                matrix: "Θ",
                min_eigenvalue: crate::cmatrix::min_re_eigenvalue(theta.matrix()),
            });
        }
        let n = theta.dim();
        let inv = theta.inverse();
        let mut primal = BTreeMap::new();
        for nu in enumerate_up_to_degree(n, max_order)? {
            primal.insert(nu.clone(), AhgMode::new(theta.clone(), nu)?);
        }
        let mut dual = BTreeMap::new();
        for a in enumerate_up_to_degree(n, 2 * max_order)? {
            dual.insert(a.clone(), AhgMode::dual(inv.clone(), a)?);
        }
        let scale = 2f64.powf(n as f64 / 2.0) * gauss_norm(theta).re;
        Ok(WvdEngine { theta: theta.clone(), max_order, primal, dual, scale })
    }

    pub fn theta(&self) -> &AnisotropyMatrix {
        &self.theta
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    fn tables(&self, p: &PhasePoint) -> Result<Tables> {
        let n = self.theta.dim();
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
        let r = cvec(p.r());
        let z = cvec(p.zeta());
        let hg = self.primal.iter().map(|(k, m)| (k.clone(), m.value(&r))).collect();
        let dual = self.dual.iter().map(|(k, m)| (k.clone(), m.value(&z))).collect();
        let envelope = (-quad_form(self.theta.matrix(), &z)? * 0.5).exp() * self.scale;
        Ok(Tables { hg, dual, envelope })
    }

    fn check(&self, nu: &MultiIndex) -> Result<()> {
        if nu.len() != self.theta.dim() {
            return Err(Error::DimensionMismatch { expected: self.theta.dim(), found: nu.len() });
        }
        if nu.degree() > self.max_order {
            return Err(Error::Domain(alloc::format!(
                "degree {} exceeds the engine's maximum {}",
                nu.degree(),
                self.max_order
            )));
        }
        Ok(())
    }

    fn kernel_at(&self, t: &Tables, nu: &MultiIndex, mu: &MultiIndex) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for tau in enumerate_below(nu)? {
            let nt = nu.checked_sub(&tau).unwrap_or_else(|| MultiIndex::zeros(nu.len()));
            let h_tau = t.hg[&tau];
            for sigma in enumerate_below(mu)? {
                let ms = mu.checked_sub(&sigma).unwrap_or_else(|| MultiIndex::zeros(mu.len()));
                let alpha = nt.add(&ms);
                let w = (0.5 * (ln_binom(nu, &tau) + ln_binom(mu, &sigma) + ln_binom(&alpha, &nt))).exp();
                let sign = if ms.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
                let phase = Complex64::new(0.0, 1.0).powu(alpha.degree());
                acc += phase * (sign * w) * h_tau * t.hg[&sigma] * t.dual[&alpha];
            }
        }
        Ok(acc * t.envelope)
    }

    /// `W{HG_ν, HG_μ}(r, ζ)`, the cross term `F{HG_ν(r−½ξ) HG_μ(r+½ξ)}(ζ)`.
    pub fn pair(&self, nu: &MultiIndex, mu: &MultiIndex, p: &PhasePoint) -> Result<Complex64> {
        self.check(nu)?;
        self.check(mu)?;
        let t = self.tables(p)?;
        self.kernel_at(&t, nu, mu)
    }

    /// `Σ_{ν,μ} a_ν a_μ* K_{ν,μ}`, visiting each unordered pair once.
    ///
    /// The diagonal keeps whatever imaginary part rounding leaves, so the
    /// output's realness is an honest check rather than a truncation.
    pub fn expansion(&self, coeffs: &ModeExpansion, p: &PhasePoint) -> Result<Complex64> {
        if coeffs.is_dual() || coeffs.argument_map().is_some() {
            return Err(Error::Unsupported("WVD needs a plain primal expansion".to_string()));
        }
        if coeffs.theta().matrix() != self.theta.matrix() {
            return Err(Error::Domain("expansion Θ differs from the engine's Θ".to_string()));
        }
        let terms: Vec<(&MultiIndex, &Complex64)> = coeffs.terms().iter().collect();
        for (nu, _) in &terms {
            self.check(nu)?;
        }
        let t = self.tables(p)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (nu, a)) in terms.iter().enumerate() {
            acc += a.norm_sqr() * self.kernel_at(&t, nu, nu)?;
            for (mu, b) in &terms[i + 1..] {
                let k = **a * b.conj() * self.kernel_at(&t, nu, mu)?;
                acc += 2.0 * k.re;
            }
        }
        Ok(acc)
    }
}

/// Pair kernel for a single `(ν, μ)`; builds a throwaway engine.
pub fn wvd_pair(theta: &AnisotropyMatrix, nu: &MultiIndex, mu: &MultiIndex, p: &PhasePoint) -> Result<Complex64> {
    WvdEngine::new(theta, nu.degree().max(mu.degree()))?.pair(nu, mu, p)
}

/// WVD of `Σ a_ν HG^Θ_ν`.
pub fn wvd_expansion(coeffs: &ModeExpansion, p: &PhasePoint) -> Result<Complex64> {
    let max = coeffs.terms().keys().map(MultiIndex::degree).max().unwrap_or(0);
    WvdEngine::new(coeffs.theta(), max)?.expansion(coeffs, p)
}

/// Quadrature WVD. `envelope` describes `|f|`; the `ξ`-integrand then decays
/// like `e^{−½ξᵀPξ}`.
pub fn wvd_numeric(f: impl Fn(&[f64]) -> Complex64, envelope: &Envelope, p: &PhasePoint, m: usize) -> Result<QuadResult> {
    wvd_cross_numeric(&f, &f, envelope, p, m)
}

/// Quadrature cross-distribution
/// `(2π)^{−n/2} ∫ f(r − ½ξ) g*(r + ½ξ) e^{−iξ·ζ} dξ`.
pub fn wvd_cross_numeric(
    f: impl Fn(&[f64]) -> Complex64,
    g: impl Fn(&[f64]) -> Complex64,
    envelope: &Envelope,
    p: &PhasePoint,
    m: usize,
) -> Result<QuadResult> {
    let n = envelope.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let rule = QuadratureRule::for_envelope(envelope.scaled(0.5).matrix(), n, alloc::vec![0.0; n], m)?;
    let r = p.r();
    let z = p.zeta();
    let q = rule.integrate(|xi| {
        let lo: Vec<f64> = r.iter().zip(xi).map(|(a, b)| a - 0.5 * b).collect();
        let hi: Vec<f64> = r.iter().zip(xi).map(|(a, b)| a + 0.5 * b).collect();
        let ph: f64 = xi.iter().zip(z).map(|(a, b)| a * b).sum();
        f(&lo) * g(&hi).conj() * Complex64::from_polar(1.0, -ph)
    });
    Ok(QuadResult { value: q.value * (2.0 * PI).powf(-(n as f64) / 2.0), tail_ratio: q.tail_ratio })
}
