//! Linear canonical transforms of AHG modes.
//!
//! For `A = [a b; c d]` with `ad − bc = 1` and `b ≠ 0`,
//!
//! ```text
//! LCT_A{HG^Θ_ν}(ζ) = (1/(ib))^{|ν|+n/2} |Ξ|^{1/4} / (|Σ|^{1/2}|Θ|^{1/4})
//!                    · e^{−½ξᵀCξ} H̃G^Ξ_ν(ξ)
//! Σ = Θ⁻¹ − i(a/b)I        Ξ = b²[2(ΘΣΘ)⁻¹ − Θ⁻¹]
//! C = b⁻¹Θ(b⁻¹Σ − idΣ²)Θ − Ξ⁻¹        ξ = Σ⁻¹Θ⁻¹ζ
//! ```
//!
//! The LCT itself uses the unitary angular-frequency kernel
//! `(1/(2πib))^{n/2} e^{i(d/2b)ζ²} ∫ f(r) e^{−(i/2b) r·(2ζ − a r)} dr`.
//! Fractional powers of determinants are taken per eigenvalue on the
//! principal branch (`|M|^{1/2} = det M^{1/2}` with the principal matrix root).

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ahg::AhgMode;
use crate::cmatrix::{dot, min_re_eigenvalue, quad_form, re_pd_check, sym_apply, AnisotropyMatrix, CMat, PD_TOL};
use crate::multiindex::MultiIndex;
use crate::oracle::{Envelope, QuadResult, QuadratureRule};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `z^{k/2}` on the principal branch, as `(√z)^k`.
fn half_power(z: Complex64, k: usize) -> Complex64 {
    z.sqrt().powu(k as u32)
}

/// Unit-determinant LCT parameter matrix `[a b; c d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LctParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl LctParams {
    /// Fails unless `|ad − bc − 1| ≤ 1e-12`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - ONE).norm() > 1e-12 {
            return Err(Error::Domain(alloc::format!("LCT matrix determinant is {det}, expected 1")));
        }
        Ok(LctParams { a, b, c, d })
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0), Complex64::new(d, 0.0))
    }

    /// `[0 1; −1 0]`
    pub fn fourier() -> Self {
        LctParams { a: c(0.0), b: c(1.0), c: c(-1.0), d: c(0.0) }
    }

    /// `[cos γ, sin γ; −sin γ, cos γ]`
    pub fn frft(gamma: f64) -> Self {
        let (s, co) = gamma.sin_cos();
        LctParams { a: c(co), b: c(s), c: c(-s), d: c(co) }
    }

    /// `[0 i; i 0]`
    pub fn laplace() -> Self {
        LctParams { a: c(0.0), b: I, c: I, d: c(0.0) }
    }

    pub fn is_real(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.im == 0.0)
    }
}

/// How strictly the `Re Σ ≻ 0`, `Re Ξ ≻ 0` hypotheses are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PdCheck {
    /// Both must hold; violations are errors naming the matrix.
    #[default]
    Strict,
    /// Only invertibility and principal roots are required. The closed form
    /// is then the analytic continuation of the strict case.
    Relaxed,
}

/// Whether to pin the overall phase against the numeric transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Calibration {
    /// On when `Θ` or `A` is complex, off otherwise.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LctOptions {
    pub pd_check: PdCheck,
    pub calibration: Calibration,
}

impl LctOptions {
    pub fn relaxed() -> Self {
        LctOptions { pd_check: PdCheck::Relaxed, calibration: Calibration::Off }
    }
}

/// Outcome of the phase calibration.
#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationStatus {
    NotRequested,
    /// `factor` (an 8th root of unity) was multiplied into the prefactor;
    /// `ratio` is the raw numeric/closed ratio it was snapped from.
    Applied { factor: Complex64, ratio: Complex64 },
    Unavailable(String),
}

/// Closed-form transform of one mode:
/// `value(ζ) = prefactor · e^{−½ξᵀCξ} · H̃G^Ξ_ν(ξ)`, `ξ = arg_map · ζ`.
#[derive(Debug, Clone)]
pub struct TransformedMode {
    prefactor: Complex64,
    quad_matrix: CMat,
    arg_map: CMat,
    sigma: Option<CMat>,
    xi: AnisotropyMatrix,
    mode: AhgMode,
    calibration: CalibrationStatus,
}

impl TransformedMode {
    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    /// `C`
    pub fn quad_matrix(&self) -> &CMat {
        &self.quad_matrix
    }

    /// The map `ζ ↦ ξ`.
    pub fn arg_map(&self) -> &CMat {
        &self.arg_map
    }

    /// `Σ`, when the transform went through the general closed form.
    pub fn sigma(&self) -> Option<&CMat> {
        self.sigma.as_ref()
    }

    /// `Ξ`
    pub fn xi(&self) -> &AnisotropyMatrix {
        &self.xi
    }

    /// The dual mode `H̃G^Ξ_ν`.
    pub fn mode(&self) -> &AhgMode {
        &self.mode
    }

    pub fn calibration(&self) -> &CalibrationStatus {
        &self.calibration
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn eval(&self, zeta: &[Complex64]) -> Result<Complex64> {
        let n = self.dim();
        if zeta.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: zeta.len() });
        }
        let x = self.arg_map.mul_vec(zeta);
        let q = quad_form(&self.quad_matrix, &x)?;
        Ok(self.prefactor * (-q * 0.5).exp() * self.mode.value(&x))
    }

    pub fn eval_real(&self, zeta: &[f64]) -> Result<Complex64> {
        let z: Vec<Complex64> = zeta.iter().map(|&x| c(x)).collect();
        self.eval(&z)
    }

    fn scaled(mut self, k: Complex64) -> Self {
        self.prefactor *= k;
        self
    }
}

/// General closed form of `LCT_A{HG^Θ_ν}`.
pub fn lct_closed(a: &LctParams, theta: &AnisotropyMatrix, nu: &MultiIndex, opts: LctOptions) -> Result<TransformedMode> {
    let n = theta.dim();
    if nu.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
    }
    if a.b.norm() == 0.0 {
        return Err(Error::Unsupported("LCT with b = 0 has no closed form here".to_string()));
    }
    let b = a.b;
    let th = theta.matrix();
    let sigma = theta.inv().sub(&CMat::scalar(n, I * a.a / b)).symmetrize();
    let tst = th.mul(&sigma).mul(th);
    let xi = tst.inverse()?.scale(c(2.0)).sub(theta.inv()).scale(b * b).symmetrize();
    if opts.pd_check == PdCheck::Strict {
        for (name, m) in [("Σ", &sigma), ("Ξ", &xi)] {
            if !re_pd_check(m, PD_TOL) {
                return Err(Error::NotRePositiveDefinite { matrix: name, min_eigenvalue: min_re_eigenvalue(m) });
            }
        }
    }
    let sigma_a = AnisotropyMatrix::analytic(sigma.clone())?;
    let xi_a = AnisotropyMatrix::analytic(xi.clone())?;
    let inner = sigma_a.matrix().scale(ONE / b).sub(&sigma.mul(&sigma).scale(I * a.d));
    let quad_matrix = th.mul(&inner).mul(th).scale(ONE / b).sub(xi_a.inv()).symmetrize();
    let arg_map = sigma_a.inv().mul(theta.inv());
    let k = nu.degree() as i32;
    let ib_inv = ONE / (I * b);
    let prefactor =
        ib_inv.powi(k) * half_power(ib_inv, n) * xi_a.quarter_det() / (sigma_a.half_det() * theta.quarter_det());
    let mode = AhgMode::dual(xi_a.clone(), nu.clone())?;
    let out = TransformedMode {
        prefactor,
        quad_matrix,
        arg_map,
        sigma: Some(sigma),
        xi: xi_a,
        mode,
        calibration: CalibrationStatus::NotRequested,
    };
    let wanted = match opts.calibration {
        Calibration::On => true,
        Calibration::Off => false,
        Calibration::Auto => !theta.is_real() || !a.is_real(),
    };
    if !wanted {
        return Ok(out);
    }
    calibrate(out, a, theta, nu)
}

/// Multiplies the prefactor by the 8th root of unity nearest to
/// `numeric(ζ₀)/closed(ζ₀)`, with `ζ₀` the probe point of largest `|closed|`.
fn calibrate(mut t: TransformedMode, a: &LctParams, theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<TransformedMode> {
    let n = theta.dim();
    let probes = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut best = (vec![0.0; n], c(0.0));
    let mut idx = vec![0usize; n];
    loop {
        let z: Vec<f64> = idx.iter().map(|&i| probes[i]).collect();
        let v = t.eval_real(&z)?;
        if v.norm() > best.1.norm() {
            best = (z, v);
        }
        let mut k = n;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < probes.len() {
                break;
            }
            idx[k] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    let mode = AhgMode::new(theta.clone(), nu.clone())?;
    let f = |x: &[f64]| mode.eval_real(x).unwrap_or_default();
    let numeric = match lct_numeric(a, f, &Envelope::of_mode(theta), &best.0, calibration_nodes(n)) {
        Ok(q) if q.accurate() && best.1.norm() > 0.0 => q.value,
        Ok(_) => {
            t.calibration = CalibrationStatus::Unavailable("numeric transform inaccurate at probe".to_string());
            return Ok(t);
        }
        Err(e) => {
            t.calibration = CalibrationStatus::Unavailable(alloc::format!("{e}"));
            return Ok(t);
        }
    };
    let ratio = numeric / best.1;
    let k = (ratio.arg() / (PI / 4.0)).round();
    let factor = Complex64::from_polar(1.0, k * PI / 4.0);
    t.prefactor *= factor;
    t.calibration = CalibrationStatus::Applied { factor, ratio };
    Ok(t)
}

/// Chirps `e^{i(a/2b)r²}` converge slowly under Gauss–Hermite, so the probe
/// uses as many nodes as the dimension allows.
fn calibration_nodes(n: usize) -> usize {
    match n {
        1 | 2 => 120,
        3 => 48,
        _ => 24,
    }
}

/// `∫ f(r) e^{(ia/2b) r² − (i/b) r·ζ} dr` by whitened tensor quadrature.
///
/// Real parts of the kernel exponent are folded into the envelope and its
/// center, which is what makes complex parameters such as `[0 i; i 0]` work.
pub fn lct_integral(
    a: &LctParams,
    f: impl Fn(&[f64]) -> Complex64,
    envelope: &Envelope,
    zeta: &[f64],
    m: usize,
) -> Result<QuadResult> {
    let n = envelope.dim();
    if zeta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: zeta.len() });
    }
    if a.b.norm() == 0.0 {
        return Err(Error::Unsupported("LCT with b = 0".to_string()));
    }
    let quad = I * a.a / (a.b * 2.0);
    let lin = -I / a.b;
    let mut p = envelope.matrix().to_vec();
    for j in 0..n {
        p[j * n + j] -= quad.re;
    }
    let ell: Vec<f64> = zeta.iter().map(|&z| lin.re * z).collect();
    let pinv = sym_apply(&p, n, |v| 1.0 / v);
    let center: Vec<f64> = (0..n).map(|j| 0.5 * (0..n).map(|k| pinv[j * n + k] * ell[k]).sum::<f64>()).collect();
    let rule = QuadratureRule::for_envelope(&p, n, center, m).map_err(|_| Error::NoConvergence {
        what: "LCT integrand envelope",
        iterations: 0,
        residual: f64::NAN,
    })?;
    let zc: Vec<Complex64> = zeta.iter().map(|&z| c(z)).collect();
    Ok(rule.integrate(|r| {
        let rc: Vec<Complex64> = r.iter().map(|&x| c(x)).collect();
        let r2 = dot(&rc, &rc);
        f(r) * (quad * r2 + lin * dot(&rc, &zc)).exp()
    }))
}

/// `LCT_A{f}(ζ)` by quadrature, with the full `(1/(2πib))^{n/2} e^{i(d/2b)ζ²}` constant.
pub fn lct_numeric(
    a: &LctParams,
    f: impl Fn(&[f64]) -> Complex64,
    envelope: &Envelope,
    zeta: &[f64],
    m: usize,
) -> Result<QuadResult> {
    let n = envelope.dim();
    let q = lct_integral(a, f, envelope, zeta, m)?;
    let z2: f64 = zeta.iter().map(|z| z * z).sum();
    let k = half_power(ONE / (I * a.b * (2.0 * PI)), n) * (I * a.d / (a.b * 2.0) * z2).exp();
    Ok(QuadResult { value: q.value * k, tail_ratio: q.tail_ratio })
}

/// Unitary angular-frequency Fourier transform `(2π)^{−n/2} ∫ f(r) e^{−ir·ζ} dr`.
pub fn fourier_numeric(f: impl Fn(&[f64]) -> Complex64, envelope: &Envelope, zeta: &[f64], m: usize) -> Result<QuadResult> {
    let n = envelope.dim();
    let q = lct_integral(&LctParams::fourier(), f, envelope, zeta, m)?;
    Ok(QuadResult { value: q.value * (2.0 * PI).powf(-(n as f64) / 2.0), tail_ratio: q.tail_ratio })
}

/// Two-sided Laplace transform `∫ f(r) e^{−r·ζ} dr` for real `ζ`.
///
/// This is `(−2π)^{n/2} LCT_{[0 i; i 0]}` with the constants multiplied
/// before any fractional power is taken, so the product is exactly 1.
pub fn laplace_numeric(f: impl Fn(&[f64]) -> Complex64, envelope: &Envelope, zeta: &[f64], m: usize) -> Result<QuadResult> {
    lct_integral(&LctParams::laplace(), f, envelope, zeta, m)
}

/// `F{HG^Θ_ν}(ζ) = (−i)^{|ν|} |Θ|^{1/2} HG^Θ_ν(Θζ)`, i.e. `i^{n/2} LCT_{A_FT}`.
pub fn fourier_closed(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<TransformedMode> {
    let n = theta.dim();
    let t = lct_closed(&LctParams::fourier(), theta, nu, LctOptions::relaxed())?;
    Ok(t.scaled(half_power(I, n)))
}

/// `FrFT_γ = e^{i(n/2)γ} LCT_{A_FrFT(γ)}`; undefined for `γ ≡ 0 mod π`.
pub fn frft_closed(gamma: f64, theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<TransformedMode> {
    if gamma.sin().abs() < 1e-12 {
        return Err(Error::Unsupported(alloc::format!(
            "fractional order {gamma} is a multiple of π (identity or parity), not covered by the closed form"
        )));
    }
    let n = theta.dim();
    let t = lct_closed(&LctParams::frft(gamma), theta, nu, LctOptions::relaxed())?;
    Ok(t.scaled(Complex64::from_polar(1.0, 0.5 * n as f64 * gamma)))
}

/// Two-sided Laplace transform
/// `L{HG^Θ_ν}(ζ) = (2π)^{n/2} i^{|ν|} |Θ|^{1/2} HG^Θ_ν(iΘζ) = (2π)^{n/2} i^{|ν|} H̃G^{Θ⁻¹}_ν(iζ)`.
pub fn laplace_closed(theta: &AnisotropyMatrix, nu: &MultiIndex) -> Result<TransformedMode> {
    let n = theta.dim();
    if nu.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: nu.len() });
    }
    let xi = theta.inverse();
    let prefactor = c((2.0 * PI).powf(n as f64 / 2.0)) * I.powu(nu.degree());
    Ok(TransformedMode {
        prefactor,
        quad_matrix: CMat::zeros(n),
        arg_map: CMat::scalar(n, I),
        sigma: None,
        mode: AhgMode::dual(xi.clone(), nu.clone())?,
        xi,
        calibration: CalibrationStatus::NotRequested,
    })
}

/// Eigen-anisotropy of an LCT with `a = d`: `LCT_A{HG^{βI}_ν} = λ_ν HG^{βI}_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LctEigen {
    pub alpha: Complex64,
    pub beta: Complex64,
    b: Complex64,
    /// Whether `βI` has a positive-definite real part. When it does not,
    /// the relation holds between analytic continuations only.
    pub re_pd: bool,
}

impl LctEigen {
    /// `Θ = βI`
    pub fn theta(&self, n: usize) -> Result<AnisotropyMatrix> {
        AnisotropyMatrix::analytic(CMat::scalar(n, self.beta))
    }

    /// `λ = (1/(ib))^{|ν|+n/2} α^{|ν|} (√α)ⁿ`
    pub fn eigenvalue(&self, degree: u32, n: usize) -> Complex64 {
        let ib_inv = ONE / (I * self.b);
        ib_inv.powu(degree) * half_power(ib_inv, n) * self.alpha.powu(degree) * half_power(self.alpha, n)
    }
}

/// `α = i b²/(√((a²−1)b²) + ab)`, `β = i b²/√((a²−1)b²)` (principal root).
pub fn lct_eigenmode(a: &LctParams) -> Result<LctEigen> {
    if (a.a - a.d).norm() > 1e-12 {
        return Err(Error::Domain("eigenmodes need a = d".to_string()));
    }
    if (a.a * a.a - ONE).norm() < 1e-12 {
        return Err(Error::Domain("eigenmodes need a² ≠ 1".to_string()));
    }
    // adding +0 turns a −0 imaginary part into +0, so a negative real
    // radicand lands on the principal side of the cut
    let root = ((a.a * a.a - ONE) * a.b * a.b + Complex64::new(0.0, 0.0)).sqrt();
    if (root + a.a * a.b).norm() < 1e-12 * (1.0 + root.norm()) {
        return Err(Error::Domain("eigenmodes need √((a²−1)b²) ≠ −ab".to_string()));
    }
    let alpha = I * a.b * a.b / (root + a.a * a.b);
    let beta = I * a.b * a.b / root;
    Ok(LctEigen { alpha, beta, b: a.b, re_pd: beta.re > 0.0 })
}
