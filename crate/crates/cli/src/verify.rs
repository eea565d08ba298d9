//! Verification suites: every closed form is measured against an independent
//! numerical route (quadrature, finite differences, literal products) and
//! reported as `error < tolerance`.
//!
//! Suite defaults reproduce the acceptance criteria. `--n` and
//! `--max-order` narrow or widen them; `--tol` replaces every numeric
//! tolerance (runtime limits stay fixed).

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use ahg_core::ahg::{
    anisotropy_transform, eval, eval_at_zero, generating_closed, generating_sum, offset_expansion, product_expansion,
    ModeDerivatives,
};
use ahg_core::cmatrix::quad_form;
use ahg_core::hermite1d::hg1;
use ahg_core::multiindex::enumerate_up_to_degree;
use ahg_core::oracle::{fd_gradient, fd_hessian, fd_laplacian, Envelope, QuadratureRule};
use ahg_core::transforms::{
    fourier_closed, fourier_numeric, frft_closed, laplace_closed, laplace_numeric, lct_closed, lct_eigenmode,
    lct_numeric, Calibration, LctOptions, PdCheck,
};
use ahg_core::wigner::{wvd_cross_numeric, wvd_numeric, WvdEngine};
use ahg_core::{AhgMode, AnisotropyMatrix, CMat, Complex64, Error, LctParams, ModeExpansion, MultiIndex, PhasePoint};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Orthogonality,
    Decomposition,
    Generating,
    Derivatives,
    Anisotropy,
    Offset,
    Product,
    Zero,
    Fourier,
    Lct,
    Eigen,
    Frft,
    Laplace,
    Wvd,
    All,
}

impl Suite {
    pub const EACH: [Suite; 14] = [
        Suite::Orthogonality,
        Suite::Decomposition,
        Suite::Generating,
        Suite::Derivatives,
        Suite::Anisotropy,
        Suite::Offset,
        Suite::Product,
        Suite::Zero,
        Suite::Fourier,
        Suite::Lct,
        Suite::Eigen,
        Suite::Frft,
        Suite::Laplace,
        Suite::Wvd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Decomposition => "decomposition",
            Suite::Generating => "generating",
            Suite::Derivatives => "derivatives",
            Suite::Anisotropy => "anisotropy",
            Suite::Offset => "offset",
            Suite::Product => "product",
            Suite::Zero => "zero",
            Suite::Fourier => "fourier",
            Suite::Lct => "lct",
            Suite::Eigen => "eigen",
            Suite::Frft => "frft",
            Suite::Laplace => "laplace",
            Suite::Wvd => "wvd",
            Suite::All => "all",
        }
    }
}

/// One measured quantity. It passes when `error < tol`, so a zero tolerance
/// always fails and a NaN error never passes.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error < self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<13} {:<64} err {:<10.3e} tol {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.error,
            self.tol
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub max_order: Option<u32>,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { n: None, max_order: None, tol: None, seed: 20240601 }
    }
}

/// Largest dimension the suites accept; quadrature cost grows as `mⁿ`.
pub const MAX_VERIFY_DIM: usize = 3;

impl VerifyConfig {
    fn validate(&self) -> CliResult<()> {
        if let Some(n) = self.n {
            if !(1..=MAX_VERIFY_DIM).contains(&n) {
                return Err(CliError::usage(format!("--n must be between 1 and {MAX_VERIFY_DIM}")));
            }
        }
        if let Some(t) = self.tol {
            if t.is_nan() || t < 0.0 {
                return Err(CliError::usage("--tol must be non-negative"));
            }
        }
        if let Some(k) = self.max_order {
            if k > 12 {
                return Err(CliError::usage("--max-order above 12 is outside the suites' budget"));
            }
        }
        Ok(())
    }

    fn dims(&self, default: &[usize]) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => default.to_vec(),
        }
    }

    fn order(&self, default: u32) -> u32 {
        self.max_order.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Runs one suite (or all of them, in a fixed order).
pub fn run(suite: Suite, cfg: &VerifyConfig) -> CliResult<Vec<Check>> {
    cfg.validate()?;
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(run(s, cfg)?);
        }
        return Ok(out);
    }
    let checks = match suite {
        Suite::Orthogonality => orthogonality(cfg),
        Suite::Decomposition => decomposition(cfg),
        Suite::Generating => generating(cfg),
        Suite::Derivatives => derivatives(cfg),
        Suite::Anisotropy => anisotropy(cfg),
        Suite::Offset => offset(cfg),
        Suite::Product => product(cfg),
        Suite::Zero => zero(cfg),
        Suite::Fourier => fourier(cfg),
        Suite::Lct => lct(cfg),
        Suite::Eigen => eigen(cfg),
        Suite::Frft => frft(cfg),
        Suite::Laplace => laplace(cfg),
        Suite::Wvd => wvd(cfg),
        Suite::All => unreachable!(),
    };
    Ok(checks)
}

// ---------------------------------------------------------------- helpers

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cv(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| c(v, 0.0)).collect()
}

fn rand_vec(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

fn rand_points(rng: &mut impl Rng, n: usize, k: usize, half_width: f64) -> Vec<Vec<f64>> {
    (0..k).map(|_| rand_vec(rng, n, half_width)).collect()
}

/// The reference anisotropy: `[[1, 0.3], [0.3, 0.8]]` in two dimensions,
/// `0.7` in one (anything but 1, so modes are not FrFT eigenfunctions) and a
/// diagonally dominant analogue in three.
pub fn reference_theta(n: usize) -> AnisotropyMatrix {
    if n == 1 {
        return AnisotropyMatrix::from_real_rows(&[&[0.7]]).expect("positive");
    }
    let diag = [1.0, 0.8, 1.2];
    let off = 0.3 / (n - 1) as f64;
    let m = CMat::from_fn(n, |j, k| c(if j == k { diag[j % 3] } else { off }, 0.0));
    AnisotropyMatrix::new(m).expect("diagonally dominant")
}

/// `B Bᵀ + 0.3 I + i·S` with `S` symmetric and entries below `imag`.
pub fn random_theta(rng: &mut impl Rng, n: usize, imag: f64) -> AnisotropyMatrix {
    let b = CMat::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), 0.0));
    let re = b.mul(&b.transpose()).add(&CMat::scalar(n, c(0.3, 0.0)));
    let s = CMat::from_fn(n, |_, _| c(0.0, if imag > 0.0 { rng.gen_range(-imag..imag) } else { 0.0 }));
    AnisotropyMatrix::new(re.add(&s.symmetrize())).expect("real part is positive definite")
}

/// Collects the worst error of a measurement, turning unexpected library
/// errors into an infinite error with the message in the check name.
struct Worst {
    err: f64,
    failure: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst { err: 0.0, failure: None }
    }

    fn add(&mut self, e: f64) {
        // NaN must poison the result, which f64::max would not do
        if e.is_nan() || e > self.err {
            self.err = if e.is_nan() { f64::NAN } else { e };
        }
    }

    fn take(&mut self, r: Result<f64, Error>) {
        match r {
            Ok(e) => self.add(e),
            Err(e) => {
                self.err = f64::INFINITY;
                self.failure.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn merge(&mut self, other: Worst) {
        self.add(other.err);
        if self.failure.is_none() {
            self.failure = other.failure;
        }
    }

    fn check(self, suite: &'static str, name: String, tol: f64) -> Check {
        let name = match self.failure {
            Some(m) => format!("{name} [{m}]"),
            None => name,
        };
        Check { suite, name, error: self.err, tol }
    }
}

fn par_worst<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<f64, Error> + Sync) -> Worst {
    let parts: Vec<Result<f64, Error>> = items.par_iter().map(&f).collect();
    let mut w = Worst::new();
    for p in parts {
        w.take(p);
    }
    w
}

/// `max |a − b| / max |b|` over paired samples.
fn sup_relative(pairs: &[(Complex64, Complex64)]) -> f64 {
    let num = pairs.iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let den = pairs.iter().map(|(_, b)| b.norm()).fold(0.0, f64::max);
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

// ----------------------------------------------------------------- suites

/// Biorthonormality `⟨HG_ν, H̃G_μ⟩ = δ` by whitened Gauss–Hermite quadrature.
pub fn orthogonality_check(theta: &AnisotropyMatrix, max_order: u32, nodes: usize, tol: f64) -> Check {
    let n = theta.dim();
    let mut w = Worst::new();
    let res = (|| -> Result<usize, Error> {
        let idx = enumerate_up_to_degree(n, max_order)?;
        let rule = QuadratureRule::for_theta(theta, nodes)?;
        let pts = rule.points();
        let table = |dual: bool| -> Result<Vec<Vec<Complex64>>, Error> {
            idx.par_iter()
                .map(|nu| {
                    let m = if dual { AhgMode::dual(theta.clone(), nu.clone())? } else { AhgMode::new(theta.clone(), nu.clone())? };
                    pts.iter().map(|(x, _)| m.eval_real(x)).collect()
                })
                .collect()
        };
        let primal = table(false)?;
        let dual = table(true)?;
        let errs: Vec<f64> = (0..idx.len())
            .into_par_iter()
            .map(|i| {
                (0..idx.len())
                    .map(|j| {
                        let g: Complex64 =
                            pts.iter().enumerate().map(|(p, (_, wt))| primal[i][p] * dual[j][p].conj() * *wt).sum();
                        (g - if i == j { 1.0 } else { 0.0 }).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        errs.into_iter().for_each(|e| w.add(e));
        Ok(idx.len())
    })();
    let count = match res {
        Ok(k) => k,
        Err(e) => {
            w.take(Err(e));
            0
        }
    };
    w.check(
        "orthogonality",
        format!("n={n} |<HG_ν, dual HG_μ> − δ| over {} pairs, {nodes} nodes", count * count),
        tol,
    )
}

fn orthogonality(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for n in cfg.dims(&[2]) {
        let nodes = if n <= 2 { 80 } else { 40 };
        let start = Instant::now();
        out.push(orthogonality_check(&reference_theta(n), cfg.order(3), nodes, cfg.tol(1e-8)));
        out.push(Check {
            suite: "orthogonality",
            name: format!("n={n} wall time in seconds"),
            error: start.elapsed().as_secs_f64(),
            tol: 60.0,
        });
    }
    out
}

fn decomposition(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(2);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2, 3]) {
        let id = AnisotropyMatrix::identity(n);
        let pts = rand_points(&mut rng, n, 50, 2.5);
        let idx = enumerate_up_to_degree(n, cfg.order(6)).unwrap_or_default();
        let w = par_worst(&idx, |nu| {
            let m = AhgMode::new(id.clone(), nu.clone())?;
            let mut e: f64 = 0.0;
            for r in &pts {
                let lit: Complex64 = nu.entries().iter().zip(r).map(|(&k, &x)| hg1(k, c(x, 0.0))).product();
                e = e.max((m.eval_real(r)? - lit).norm());
            }
            Ok(e)
        });
        out.push(w.check("decomposition", format!("n={n} Θ=I |eval − ∏ hg1| at 50 points, {} degrees", idx.len()), cfg.tol(1e-12)));
    }
    out
}

fn generating(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(3);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        // the partial sum builds a plan per degree; C(order+n, n) of them
        let order = if n <= 2 { 30 } else { 18 };
        for imag in [0.0, 0.3] {
            let th = random_theta(&mut rng, n, imag);
            let cases: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..20)
                .map(|_| {
                    let dir: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                    let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    let radius = rng.gen_range(0.0..0.3);
                    let x = dir.iter().map(|z| z * (radius / norm)).collect();
                    (x, cv(&rand_vec(&mut rng, n, 1.5)))
                })
                .collect();
            let w = par_worst(&cases, |(x, r)| {
                let sum = generating_sum(&th, x, r, order)?;
                let closed = generating_closed(&th, x, r)?;
                Ok((sum - closed).norm() / closed.norm())
            });
            let kind = if imag > 0.0 { "complex" } else { "real" };
            out.push(w.check(
                "generating",
                format!("n={n} {kind} Θ, ‖x‖≤0.3, order {order} partial sum vs closed (rel)"),
                cfg.tol(1e-9),
            ));
        }
    }
    out
}

fn derivatives(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(4);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2, 3]) {
        let th = random_theta(&mut rng, n, 0.3);
        let idx = enumerate_up_to_degree(n, cfg.order(4)).unwrap_or_default();
        let cases: Vec<(MultiIndex, Vec<Vec<f64>>)> =
            idx.iter().map(|nu| (nu.clone(), rand_points(&mut rng, n, 10, 1.5))).collect();
        let per: Vec<Result<[f64; 4], Error>> = cases
            .par_iter()
            .map(|(nu, pts)| {
                let d = ModeDerivatives::new(&th, nu)?;
                let m = AhgMode::new(th.clone(), nu.clone())?;
                let f = |x: &[f64]| m.eval_real(x).unwrap_or(c(f64::NAN, f64::NAN));
                let mut e = [0.0f64; 4];
                for r in pts {
                    let rc = cv(r);
                    let g = d.gradient(&rc)?;
                    let h = d.hessian(&rc)?;
                    let l = d.laplacian(&rc)?;
                    let gs = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    let fg = fd_gradient(f, r, 1e-5);
                    let ge = g.iter().zip(&fg).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    e[0] = e[0].max(if gs > 0.0 { ge / gs } else { ge });
                    let hs = h.max_abs();
                    let fh = fd_hessian(f, r, 1e-4);
                    let he = h.sub(&fh).max_abs();
                    e[1] = e[1].max(if hs > 0.0 { he / hs } else { he });
                    let le = (l - fd_laplacian(f, r, 1e-3)).norm();
                    e[2] = e[2].max(if hs > 0.0 { le / hs } else { le });
                    e[3] = e[3].max((h.trace() - l).norm());
                }
                Ok(e)
            })
            .collect();
        let mut w: [Worst; 4] = [Worst::new(), Worst::new(), Worst::new(), Worst::new()];
        for p in per {
            match p {
                Ok(e) => (0..4).for_each(|k| w[k].add(e[k])),
                Err(e) => (0..4).for_each(|k| w[k].take(Err(e.clone()))),
            }
        }
        let [g, h, l, t] = w;
        let tag = format!("n={n} |ν|≤{} 10 points each", cfg.order(4));
        out.push(g.check("derivatives", format!("{tag}: gradient vs FD (rel)"), cfg.tol(1e-5)));
        out.push(h.check("derivatives", format!("{tag}: Hessian vs FD (rel)"), cfg.tol(1e-5)));
        out.push(l.check("derivatives", format!("{tag}: Laplacian vs FD (rel to Hessian)"), cfg.tol(1e-5)));
        out.push(t.check("derivatives", format!("{tag}: |trace(Hessian) − Laplacian|"), cfg.tol(1e-12)));
    }
    out
}

fn anisotropy(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(5);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let mut w = Worst::new();
        for _ in 0..5 {
            let t1 = random_theta(&mut rng, n, 0.2);
            let t2 = random_theta(&mut rng, n, 0.2);
            let pts = rand_points(&mut rng, n, 20, 1.5);
            let idx = enumerate_up_to_degree(n, cfg.order(5)).unwrap_or_default();
            w.merge(par_worst(&idx, |nu| {
                let e = anisotropy_transform(&t1, &t2, nu)?;
                let pairs = pts
                    .iter()
                    .map(|r| Ok((e.eval(&cv(r))?, eval(&t1, nu, &cv(r))?)))
                    .collect::<Result<Vec<_>, Error>>()?;
                Ok(sup_relative(&pairs))
            }));
        }
        out.push(w.check(
            "anisotropy",
            format!("n={n} 5 (Θ₁,Θ₂) pairs, |ν|≤{} re-expansion vs direct (rel)", cfg.order(5)),
            cfg.tol(1e-9),
        ));
    }
    out
}

fn offset(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(6);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let th = random_theta(&mut rng, n, 0.2);
        let idx = enumerate_up_to_degree(n, cfg.order(4)).unwrap_or_default();
        let cases: Vec<(MultiIndex, Vec<f64>, Vec<Vec<f64>>)> = idx
            .iter()
            .map(|nu| (nu.clone(), rand_vec(&mut rng, n, 1.0), rand_points(&mut rng, n, 20, 1.5)))
            .collect();
        let w = par_worst(&cases, |(nu, s, pts)| {
            let e = offset_expansion(&th, nu, &cv(s))?;
            let pairs = pts
                .iter()
                .map(|r| {
                    let shifted: Vec<f64> = r.iter().zip(s).map(|(a, b)| a + b).collect();
                    Ok((e.eval_real(r)?, eval(&th, nu, &cv(&shifted))?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(sup_relative(&pairs))
        });
        out.push(w.check("offset", format!("n={n} |ν|≤{} HG_ν(r+s) expansion vs direct (rel)", cfg.order(4)), cfg.tol(1e-9)));
    }
    out
}

fn product(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(7);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let th = random_theta(&mut rng, n, 0.2);
        let idx = enumerate_up_to_degree(n, cfg.order(4)).unwrap_or_default();
        let pts = rand_points(&mut rng, n, 20, 1.5);
        let pairs: Vec<(MultiIndex, MultiIndex)> =
            idx.iter().flat_map(|a| idx.iter().map(move |b| (a.clone(), b.clone()))).collect();
        let w = par_worst(&pairs, |(nu, mu)| {
            let e = product_expansion(&th, nu, mu)?;
            let samples = pts
                .iter()
                .map(|r| Ok((e.eval_real(r)?, eval(&th, nu, &cv(r))? * eval(&th, mu, &cv(r))?)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(sup_relative(&samples))
        });
        out.push(w.check(
            "product",
            format!("n={n} {} pairs |ν|,|μ|≤{} HG_ν·HG_μ expansion vs direct (rel)", pairs.len(), cfg.order(4)),
            cfg.tol(1e-9),
        ));
    }
    out
}

fn zero(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(8);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2, 3]) {
        for imag in [0.0, 0.3] {
            let th = random_theta(&mut rng, n, imag);
            let idx = enumerate_up_to_degree(n, cfg.order(8)).unwrap_or_default();
            let origin = vec![c(0.0, 0.0); n];
            let w = par_worst(&idx, |nu| Ok((eval_at_zero(&th, nu)? - eval(&th, nu, &origin)?).norm()));
            let kind = if imag > 0.0 { "complex" } else { "real" };
            out.push(w.check("zero", format!("n={n} {kind} Θ |ν|≤{} value at origin vs eval", cfg.order(8)), cfg.tol(1e-11)));
        }
    }
    out
}

fn fourier(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(9);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let k = cfg.order(4);
        let idx = enumerate_up_to_degree(n, k).unwrap_or_default();
        let nodes = if n == 1 { 64 } else { 48 };
        for (label, th) in [("reference", reference_theta(n)), ("complex", random_theta(&mut rng, n, 0.3))] {
            let zs = rand_points(&mut rng, n, 5, 1.5);
            let w = par_worst(&idx, |nu| {
                let t = fourier_closed(&th, nu)?;
                let m = AhgMode::new(th.clone(), nu.clone())?;
                let mut e: f64 = 0.0;
                for z in &zs {
                    let q = fourier_numeric(|x| m.eval_real(x).unwrap_or(c(f64::NAN, 0.0)), &Envelope::of_mode(&th), z, nodes)?;
                    e = e.max((t.eval_real(z)? - q.value).norm());
                }
                Ok(e)
            });
            out.push(w.check("fourier", format!("n={n} {label} Θ |ν|≤{k} closed vs quadrature FT"), cfg.tol(1e-7)));
        }
        let id = AnisotropyMatrix::identity(n);
        let zs = rand_points(&mut rng, n, 10, 2.0);
        let w = par_worst(&idx, |nu| {
            let t = fourier_closed(&id, nu)?;
            let lam = (-I).powu(nu.degree());
            let mut e: f64 = 0.0;
            for z in &zs {
                e = e.max((t.eval_real(z)? - lam * eval(&id, nu, &cv(z))?).norm());
            }
            Ok(e)
        });
        out.push(w.check("fourier", format!("n={n} Θ=I eigenrelation F{{HG_ν}} = (−i)^|ν| HG_ν"), cfg.tol(1e-12)));
        let th = reference_theta(n);
        let w = par_worst(&idx, |nu| {
            let t = fourier_closed(&th, nu)?;
            let even = nu.degree() % 2 == 0;
            let mut e: f64 = 0.0;
            for z in &zs {
                let v = t.eval_real(z)?;
                let neg: Vec<f64> = z.iter().map(|x| -x).collect();
                let s = if even { 1.0 } else { -1.0 };
                e = e.max((t.eval_real(&neg)? - v * s).norm());
                e = e.max(if even { v.im.abs() } else { v.re.abs() });
            }
            Ok(e)
        });
        out.push(w.check("fourier", format!("n={n} real Θ: even ν real and even, odd ν imaginary and odd"), cfg.tol(1e-12)));
    }
    out
}

/// Nodes per axis for oscillatory LCT integrands.
fn chirp_nodes(n: usize) -> usize {
    if n <= 2 {
        120
    } else {
        48
    }
}

/// Closed form against quadrature after phase calibration.
///
/// The `Re Σ ≻ 0`, `Re Ξ ≻ 0` hypotheses are checked first. `require_strict`
/// turns a violation into a failure; otherwise the violation is recorded in
/// the check name and the closed form is evaluated in relaxed mode.
pub fn lct_check(
    a: &LctParams,
    label: &str,
    theta: &AnisotropyMatrix,
    max_order: u32,
    points: &[Vec<f64>],
    require_strict: bool,
    tol: f64,
) -> Check {
    let n = theta.dim();
    let idx = enumerate_up_to_degree(n, max_order).unwrap_or_default();
    let strict = LctOptions { pd_check: PdCheck::Strict, calibration: Calibration::On };
    let zero = MultiIndex::zeros(n);
    // Σ and Ξ do not depend on ν
    let (opts, status) = match lct_closed(a, theta, &zero, strict) {
        Ok(_) => (strict, "Re Σ, Re Ξ ≻ 0 hold".to_string()),
        Err(Error::NotRePositiveDefinite { matrix, .. }) if !require_strict => (
            LctOptions { pd_check: PdCheck::Relaxed, calibration: Calibration::On },
            format!("Re {matrix} ⊁ 0, relaxed"),
        ),
        Err(e) => {
            let mut w = Worst::new();
            w.take(Err(e));
            return w.check("lct", format!("n={n} {label} strict preconditions"), tol);
        }
    };
    let w = par_worst(&idx, |nu| {
        let t = lct_closed(a, theta, nu, opts)?;
        let m = AhgMode::new(theta.clone(), nu.clone())?;
        let mut e: f64 = 0.0;
        for z in points {
            let q = lct_numeric(a, |x| m.eval_real(x).unwrap_or(c(f64::NAN, 0.0)), &Envelope::of_mode(theta), z, chirp_nodes(n))?;
            e = e.max((t.eval_real(z)? - q.value).norm());
        }
        Ok(e)
    });
    w.check("lct", format!("n={n} {label} |ν|≤{max_order} ({status}) closed vs quadrature"), tol)
}

/// The strict check must reject `Ξ` for the FrFT at a small angle on `Θ = I`.
pub fn lct_failure_path_check(tol: f64) -> Check {
    let r = lct_closed(
        &LctParams::frft(0.2),
        &AnisotropyMatrix::identity(1),
        &MultiIndex::new(vec![0]),
        LctOptions { pd_check: PdCheck::Strict, calibration: Calibration::Off },
    );
    let (error, what) = match r {
        Err(Error::NotRePositiveDefinite { matrix: "Ξ", .. }) => (0.0, "rejected naming Ξ".to_string()),
        Err(e) => (1.0, format!("unexpected error: {e}")),
        Ok(_) => (1.0, "accepted".to_string()),
    };
    Check { suite: "lct", name: format!("strict preconditions on FrFT(0.2), Θ=I: {what}"), error, tol }
}

fn lct(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(10);
    let mut out = Vec::new();
    let shear = LctParams::real(1.0, 1.0, 0.0, 1.0).expect("unit determinant");
    for n in cfg.dims(&[1, 2]) {
        let zs = rand_points(&mut rng, n, 4, 1.5);
        // Θ below tan(0.7)·I and below I satisfies both hypotheses for both matrices
        let narrow = AnisotropyMatrix::new(reference_theta(n).matrix().scale(c(0.5, 0.0))).expect("scaled PD");
        let order = cfg.order(if n <= 2 { 4 } else { 3 });
        for (a, label) in [(LctParams::frft(0.7), "FrFT(0.7)"), (shear, "shear [1 1; 0 1]")] {
            out.push(lct_check(&a, label, &narrow, order, &zs, true, cfg.tol(1e-6)));
            out.push(lct_check(&a, label, &reference_theta(n), order, &zs, false, cfg.tol(1e-6)));
        }
    }
    out.push(lct_failure_path_check(cfg.tol(0.5)));
    out
}

/// Eigenmodes of `[2 1; 3 2]`: `LCT{HG^{βI}_ν} = λ_ν HG^{βI}_ν`.
pub fn eigen_check(n: usize, max_order: u32, points: &[Vec<f64>], tol: f64) -> Check {
    let a = LctParams::real(2.0, 1.0, 3.0, 2.0).expect("unit determinant");
    let idx = enumerate_up_to_degree(n, max_order).unwrap_or_default();
    let w = match lct_eigenmode(&a).and_then(|e| Ok((e, e.theta(n)?))) {
        Ok((e, th)) => par_worst(&idx, |nu| {
            let t = lct_closed(&a, &th, nu, LctOptions::relaxed())?;
            let lam = e.eigenvalue(nu.degree(), n);
            let mut err: f64 = 0.0;
            for z in points {
                let want = lam * eval(&th, nu, &cv(z))?;
                err = err.max((t.eval_real(z)? - want).norm() / want.norm());
            }
            Ok(err)
        }),
        Err(e) => {
            let mut w = Worst::new();
            w.take(Err(e));
            w
        }
    };
    w.check("eigen", format!("n={n} a=d=2 b=1 |ν|≤{max_order} LCT{{HG^βI}} = λ HG^βI (rel)"), tol)
}

fn eigen(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(11);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let zs = rand_points(&mut rng, n, 10, 1.0);
        out.push(eigen_check(n, cfg.order(4), &zs, cfg.tol(1e-8)));
        let mut w = Worst::new();
        for gamma in [0.7, 1.9, -0.4] {
            w.take(lct_eigenmode(&LctParams::frft(gamma)).map(|e| {
                let mut err = (e.beta - 1.0).norm();
                for k in 0..=cfg.order(4) {
                    let lam = e.eigenvalue(k, n) * Complex64::from_polar(1.0, 0.5 * n as f64 * gamma);
                    err = err.max((lam - Complex64::from_polar(1.0, -gamma * k as f64)).norm());
                }
                err
            }));
        }
        out.push(w.check("eigen", format!("n={n} FrFT eigen-anisotropy β=1 and e^{{inγ/2}}λ_k = e^{{−iγk}}"), cfg.tol(1e-12)));
    }
    out
}

fn frft(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(12);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let k = cfg.order(4);
        let idx = enumerate_up_to_degree(n, k).unwrap_or_default();
        let th = reference_theta(n);
        let zs = rand_points(&mut rng, n, 8, 1.5);
        let w = par_worst(&idx, |nu| {
            let f = frft_closed(PI / 2.0, &th, nu)?;
            let g = fourier_closed(&th, nu)?;
            let mut e: f64 = 0.0;
            for z in &zs {
                e = e.max((f.eval_real(z)? - g.eval_real(z)?).norm());
            }
            Ok(e)
        });
        out.push(w.check("frft", format!("n={n} |ν|≤{k} FrFT(π/2) = FT"), cfg.tol(1e-12)));

        let id = AnisotropyMatrix::identity(n);
        let w = par_worst(&idx, |nu| {
            let z = &zs[0];
            let m = eval(&id, nu, &cv(z))?;
            let ratio = |g: f64| -> Result<Complex64, Error> { Ok(frft_closed(g, &id, nu)?.eval_real(z)? / m) };
            let mut e: f64 = 0.0;
            for (g1, g2) in [(0.6, 1.3), (0.25, 0.4), (1.1, -0.5)] {
                e = e.max((ratio(g1)? * ratio(g2)? - ratio(g1 + g2)?).norm());
            }
            Ok(e)
        });
        out.push(w.check("frft", format!("n={n} |ν|≤{k} eigenvalue additivity λ(γ₁)λ(γ₂) = λ(γ₁+γ₂)"), cfg.tol(1e-12)));

        // deviation from the identity must shrink as γ → 0
        let w = par_worst(&idx, |nu| {
            let m = AhgMode::new(th.clone(), nu.clone())?;
            let mut devs = Vec::new();
            for g in [0.2, 0.1, 0.05] {
                let t = frft_closed(g, &th, nu)?;
                let mut d: f64 = 0.0;
                for z in &zs {
                    d = d.max((t.eval_real(z)? - m.eval_real(z)?).norm());
                }
                devs.push(d);
            }
            Ok((devs[1] / devs[0]).max(devs[2] / devs[1]))
        });
        out.push(w.check(
            "frft",
            format!("n={n} |ν|≤{k} γ→0: worst ratio of successive deviations over γ=0.2,0.1,0.05"),
            cfg.tol(1.0),
        ));
    }
    out
}

/// `g(ζ) = HG^I_ν(e^{iπ/4}ζ) = z^{|ν|+n/2} HG^{−iI}_ν(ζ)`, `z = e^{−iπ/4}`, is
/// a Laplace eigenfunction with `λ = (2π)^{n/2} i^{|ν|} zⁿ`. The right side is
/// transformed in closed form, by analytic continuation in `Θ`.
pub fn laplace_eigen_check(n: usize, max_order: u32, points: &[Vec<f64>], tol: f64) -> Check {
    let id = AnisotropyMatrix::identity(n);
    let rot = Complex64::from_polar(1.0, PI / 4.0);
    let zz = Complex64::from_polar(1.0, -PI / 4.0);
    let idx = enumerate_up_to_degree(n, max_order).unwrap_or_default();
    let w = match AnisotropyMatrix::analytic(CMat::scalar(n, -I)) {
        Ok(th) => par_worst(&idx, |nu| {
            let t = laplace_closed(&th, nu)?;
            let k = nu.degree();
            let pre = zz.powu(k) * zz.sqrt().powu(n as u32);
            let lam = c((2.0 * PI).powf(n as f64 / 2.0), 0.0) * I.powu(k) * zz.powu(n as u32);
            let mut e: f64 = 0.0;
            for z in points {
                let arg: Vec<Complex64> = z.iter().map(|&v| rot * v).collect();
                let g = eval(&id, nu, &arg)?;
                e = e.max((pre * eval(&th, nu, &cv(z))? - g).norm() / g.norm());
                e = e.max((pre * t.eval_real(z)? - lam * g).norm() / (lam * g).norm());
            }
            Ok(e)
        }),
        Err(e) => {
            let mut w = Worst::new();
            w.take(Err(e));
            w
        }
    };
    w.check("laplace", format!("n={n} |ν|≤{max_order} eigenfunction HG^I_ν(e^{{iπ/4}}ζ) (rel)"), tol)
}

/// `HG^Θ_0(r) = (πⁿ|Θ|)^{−1/4} e^{−½rᵀΘ⁻¹r}`, so completing the square gives
/// `L{HG^Θ_0}(ζ) = (2π)^{n/2} π^{−n/4} |Θ|^{1/4} e^{½ζᵀΘζ}` for real `Θ`.
pub fn laplace_gaussian_check(theta: &AnisotropyMatrix, points: &[Vec<f64>], tol: f64) -> Check {
    let n = theta.dim();
    let mut w = Worst::new();
    let det = theta.matrix().det().map(|d| d.re);
    for z in points {
        w.take((|| {
            let t = laplace_closed(theta, &MultiIndex::zeros(n))?;
            let q = quad_form(theta.matrix(), &cv(z))?.re;
            let want = (2.0 * PI).powf(n as f64 / 2.0) * PI.powf(-(n as f64) / 4.0) * det.clone()?.powf(0.25) * (0.5 * q).exp();
            Ok((t.eval_real(z)? - want).norm() / want)
        })());
    }
    w.check("laplace", format!("n={n} ν=0 closed vs analytic Gaussian Laplace (rel)"), tol)
}

fn laplace(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(13);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let k = cfg.order(4);
        let zs = rand_points(&mut rng, n, 10, 1.0);
        out.push(laplace_eigen_check(n, k, &zs, cfg.tol(1e-7)));
        out.push(laplace_gaussian_check(&reference_theta(n), &zs, cfg.tol(1e-10)));
        out.push(laplace_gaussian_check(&random_theta(&mut rng, n, 0.0), &zs, cfg.tol(1e-10)));
        let th = reference_theta(n);
        let idx = enumerate_up_to_degree(n, k).unwrap_or_default();
        let pts = rand_points(&mut rng, n, 4, 0.8);
        let w = par_worst(&idx, |nu| {
            let t = laplace_closed(&th, nu)?;
            let m = AhgMode::new(th.clone(), nu.clone())?;
            let mut e: f64 = 0.0;
            for z in &pts {
                let q = laplace_numeric(|x| m.eval_real(x).unwrap_or(c(f64::NAN, 0.0)), &Envelope::of_mode(&th), z, 48)?;
                e = e.max((t.eval_real(z)? - q.value).norm());
            }
            Ok(e)
        });
        out.push(w.check("laplace", format!("n={n} |ν|≤{k} closed vs quadrature two-sided Laplace"), cfg.tol(1e-6)));
    }
    out
}

/// Closed pair kernels against quadrature, plus their symmetry and realness.
pub fn wvd_checks(theta: &AnisotropyMatrix, max_order: u32, points: &[PhasePoint], seed: u64, tol: [f64; 3]) -> Vec<Check> {
    let n = theta.dim();
    let mut out = Vec::new();
    let setup = (|| -> Result<(WvdEngine, Vec<MultiIndex>, Vec<AhgMode>), Error> {
        let e = WvdEngine::new(theta, max_order)?;
        let idx = enumerate_up_to_degree(n, max_order)?;
        let modes = idx.iter().map(|nu| AhgMode::new(theta.clone(), nu.clone())).collect::<Result<_, _>>()?;
        Ok((e, idx, modes))
    })();
    let (engine, idx, modes) = match setup {
        Ok(s) => s,
        Err(e) => {
            let mut w = Worst::new();
            w.take(Err(e));
            return vec![w.check("wvd", format!("n={n} engine setup"), tol[0])];
        }
    };
    let nodes = match n {
        1 => 48,
        2 => 40,
        _ => 24,
    };
    let env = Envelope::of_mode(theta);
    let pairs: Vec<(usize, usize)> = (0..idx.len()).flat_map(|i| (0..idx.len()).map(move |j| (i, j))).collect();
    let w = par_worst(&pairs, |&(i, j)| {
        let (f, g) = (&modes[i], &modes[j]);
        let mut e: f64 = 0.0;
        for p in points {
            let closed = engine.pair(&idx[i], &idx[j], p)?;
            let q = wvd_cross_numeric(
                |x| f.eval_real(x).unwrap_or(c(f64::NAN, 0.0)),
                |x| g.eval_real(x).unwrap_or(c(f64::NAN, 0.0)),
                &env,
                p,
                nodes,
            )?;
            e = e.max((closed - q.value).norm());
        }
        Ok(e)
    });
    out.push(w.check(
        "wvd",
        format!("n={n} {} pairs |ν|,|μ|≤{max_order} at {} points: closed vs quadrature", pairs.len(), points.len()),
        tol[0],
    ));

    let w = par_worst(&pairs, |&(i, j)| {
        let mut e: f64 = 0.0;
        for p in points {
            let a = engine.pair(&idx[i], &idx[j], p)?;
            let b = engine.pair(&idx[j], &idx[i], p)?;
            e = e.max((a - b.conj()).norm());
        }
        Ok(e)
    });
    out.push(w.check("wvd", format!("n={n} pair kernel conjugate symmetry K_νμ = K_μν*"), tol[2]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = idx.iter().map(|nu| (nu.clone(), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
    let mut w = Worst::new();
    match ModeExpansion::new(theta.clone(), terms, None) {
        Ok(f) => {
            for p in points {
                w.take(engine.expansion(&f, p).map(|v| v.im.abs()));
                for nu in &idx {
                    w.take(engine.pair(nu, nu, p).map(|v| v.im.abs()));
                }
            }
            // the quadrature WVD of the same expansion is real too
            for p in points.iter().take(3) {
                w.take(
                    wvd_numeric(|x| f.eval_real(x).unwrap_or(c(f64::NAN, 0.0)), &env, p, nodes).map(|q| q.value.im.abs()),
                );
            }
        }
        Err(e) => w.take(Err(e)),
    }
    out.push(w.check("wvd", format!("n={n} realness |Im W| of complex-coefficient expansion and diagonal kernels"), tol[1]));
    out
}

fn wvd(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = cfg.rng(14);
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        // n=3 costs pairs × points × nodes³; keep it to a smoke run
        let (order, count) = if n <= 2 { (3, 25) } else { (2, 10) };
        let points: Vec<PhasePoint> = (0..count)
            .map(|_| PhasePoint::new(rand_vec(&mut rng, n, 1.2), rand_vec(&mut rng, n, 1.2)).expect("finite"))
            .collect();
        let seed = rng.gen();
        out.extend(wvd_checks(&reference_theta(n), cfg.order(order), &points, seed, [cfg.tol(1e-6), cfg.tol(1e-10), cfg.tol(1e-12)]));
    }
    out
}

/// Formats checks one per line, followed by a summary line.
pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for ch in checks {
        s += &ch.to_string();
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    s += &format!("{} checks, {} passed, {} failed\n", checks.len(), checks.len() - failed, failed);
    s
}
