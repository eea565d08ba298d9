use super::*;
use crate::ahg::AhgMode;
use crate::cmatrix::tests::random_re_pd;
use crate::hermite1d::hg1;
use crate::multiindex::{ln_factorial, MultiIndex};
use alloc::vec;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

fn theta_a() -> AnisotropyMatrix {
    AnisotropyMatrix::from_real_rows(&[&[1.0, 0.3], &[0.3, 0.8]]).unwrap()
}

#[test]
fn two_point_rule() {
    let g = gauss_hermite_rule(2).unwrap();
    let x = core::f64::consts::FRAC_1_SQRT_2;
    assert!((g.nodes[0] + x).abs() < 1e-15 && (g.nodes[1] - x).abs() < 1e-15);
    for w in &g.weights {
        assert!((w - SQRT_PI / 2.0).abs() < 1e-15);
    }
}

#[test]
fn rule_domain() {
    assert!(gauss_hermite_rule(1).is_err());
    assert!(gauss_hermite_rule(257).is_err());
    assert!(gauss_hermite_rule(256).is_ok());
}

#[test]
fn weights_sum_and_symmetry() {
    for m in [2, 3, 5, 16, 33, 64, 80, 128, 256] {
        let g = gauss_hermite_rule(m).unwrap();
        let s = pairwise_sum_real(&g.weights);
        assert!((s - SQRT_PI).abs() < 1e-13, "m={m}: {s}");
        for i in 0..m {
            assert_eq!(g.nodes[i], -g.nodes[m - 1 - i]);
            assert!(i == 0 || g.nodes[i] > g.nodes[i - 1]);
        }
    }
}

#[test]
fn second_moment_three_nodes() {
    let g = gauss_hermite_rule(3).unwrap();
    let s: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x * x).sum();
    assert!((s - SQRT_PI / 2.0).abs() < 1e-14);
}

/// `∫ x^k e^{−x²} dx = Γ((k+1)/2)` for even `k`, zero for odd.
#[test]
fn monomial_exactness() {
    for m in [2usize, 3, 4, 8, 16, 32, 64] {
        let g = gauss_hermite_rule(m).unwrap();
        for k in 0..2 * m {
            let terms: Vec<f64> = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(k as i32)).collect();
            let got = pairwise_sum_real(&terms);
            if k % 2 == 1 {
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                assert!(got.abs() <= 1e-14 * scale, "m={m} k={k}: {got}");
            } else {
                // Γ(j + ½) = (2j)! √π / (4^j j!)
                let j = (k / 2) as u32;
                let ln = ln_factorial(2 * j) - ln_factorial(j) - (j as f64) * 4f64.ln();
                let want = ln.exp() * SQRT_PI;
                assert!((got - want).abs() <= 1e-12 * want, "m={m} k={k}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn ground_state_norm() {
    let th = AnisotropyMatrix::identity(1);
    let h0 = |x: &[f64]| hg1(0, c(x[0], 0.0));
    let q = inner_product(h0, h0, &th, 16).unwrap();
    assert!((q.value - 1.0).norm() < 1e-12);
    // the outer weights of a 16-node rule alone sit above the tail threshold
    assert!(!q.accurate());
    assert!(inner_product(h0, h0, &th, 32).unwrap().accurate());
}

#[test]
fn mismatched_envelope_is_flagged() {
    // an integrand far wider than the rule's envelope leaves mass on the outer nodes
    let th = AnisotropyMatrix::from_real_rows(&[&[0.05]]).unwrap();
    let wide = |x: &[f64]| c((-0.01 * x[0] * x[0]).exp(), 0.0);
    let q = inner_product(wide, |_| c(1.0, 0.0), &th, 16).unwrap();
    assert!(!q.accurate(), "tail {}", q.tail_ratio);
}

#[test]
fn whitening_invariance() {
    let th = theta_a();
    let f = LiteralMode::new(&th, &mi(&[2, 1])).unwrap();
    let g = LiteralMode::new(&th, &mi(&[1, 0])).unwrap();
    let h = LiteralMode::new(&th, &mi(&[2, 1])).unwrap();
    let ff = |x: &[f64]| f.eval_real(x).unwrap();
    let mut base = None;
    for k in [1.0, 1.3, 1.8] {
        let hint = AnisotropyMatrix::new(th.matrix().scale(c(k, 0.0))).unwrap();
        let a = inner_product(ff, |x| g.eval_real(x).unwrap(), &hint, 64).unwrap().value;
        let b = inner_product(ff, |x| h.eval_real(x).unwrap(), &hint, 64).unwrap().value;
        match base {
            None => base = Some((a, b)),
            Some((a0, b0)) => {
                assert!((a - a0).norm() < 1e-9 && (b - b0).norm() < 1e-9, "k={k}: {a} {b}");
            }
        }
    }
}

#[test]
fn convergence_sweep() {
    // high degree against a hint narrower than the envelope
    let th = AnisotropyMatrix::identity(1);
    let hint = AnisotropyMatrix::from_real_rows(&[&[0.5]]).unwrap();
    let f = LiteralMode::new(&th, &mi(&[14])).unwrap();
    let mut last = f64::INFINITY;
    for m in [16, 32, 64] {
        let q = inner_product(|x| f.eval_real(x).unwrap(), |x| f.eval_real(x).unwrap(), &hint, m).unwrap();
        let e = (q.value - 1.0).norm();
        assert!(e < last, "m={m}: {e} !< {last}");
        last = e;
    }
    assert!(last < 1e-10);
}

#[test]
fn expand_recovers_single_mode() {
    let th = theta_a();
    let kappa = mi(&[1, 2]);
    let f = LiteralMode::new(&th, &kappa).unwrap();
    let e = expand(|x| f.eval_real(x).unwrap(), &th, 4, 48).unwrap();
    for (nu, a) in e.coefficients.terms() {
        let want = if *nu == kappa { 1.0 } else { 0.0 };
        assert!((a - want).norm() < 1e-8, "{nu}: {a}");
    }
    assert!(e.residual < 1e-8, "residual {}", e.residual);
}

#[test]
fn expand_is_linear() {
    let th = theta_a();
    let (nu, mu) = (mi(&[1, 0]), mi(&[0, 2]));
    let p = LiteralMode::new(&th, &nu).unwrap();
    let q = LiteralMode::new(&th, &mu).unwrap();
    let f = |x: &[f64]| p.eval_real(x).unwrap() * 2.0 + q.eval_real(x).unwrap() * c(0.0, 3.0);
    let e = expand(f, &th, 3, 48).unwrap();
    assert!((e.coefficients.coefficient(&nu) - 2.0).norm() < 1e-9);
    assert!((e.coefficients.coefficient(&mu) - c(0.0, 3.0)).norm() < 1e-9);
}

#[test]
fn expand_synthesize_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let th = AnisotropyMatrix::new(random_re_pd(&mut rng, 2, 0.0)).unwrap();
    let idx = crate::multiindex::enumerate_up_to_degree(2, 3).unwrap();
    let coeffs: Vec<Complex64> = idx.iter().map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let modes: Vec<AhgMode> = idx.iter().map(|nu| AhgMode::new(th.clone(), nu.clone()).unwrap()).collect();
    let f = |x: &[f64]| modes.iter().zip(&coeffs).map(|(m, a)| m.eval_real(x).unwrap() * a).sum::<Complex64>();
    let e = expand(f, &th, 3, 40).unwrap();
    for (nu, a) in idx.iter().zip(&coeffs) {
        assert!((e.coefficients.coefficient(nu) - a).norm() < 1e-9, "{nu}");
    }
}

#[test]
fn expand_residual_decreases_with_order() {
    let th = AnisotropyMatrix::identity(2);
    let f = |x: &[f64]| c((-((x[0] - 0.4).powi(2) + (x[1] + 0.3).powi(2))).exp(), 0.0);
    let mut last = f64::INFINITY;
    for k in [0, 2, 4, 6, 8] {
        let e = expand(f, &th, k, 40).unwrap();
        assert!(e.residual < last, "order {k}: {} !< {last}", e.residual);
        last = e.residual;
    }
    assert!(last < 1e-2);
}

#[test]
fn finite_difference_examples() {
    let sq = |x: &[f64]| c(x[0] * x[0], 0.0);
    for r in [-1.0, 0.3, 2.0] {
        assert!((fd_gradient(sq, &[r], 1e-5)[0] - 2.0 * r).norm() < 1e-9);
    }
    let gauss = |x: &[f64]| c((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0);
    let r = [0.4, -0.9, 0.2];
    let rr: f64 = r.iter().map(|v| v * v).sum();
    let want = (rr - 3.0) * gauss(&r);
    assert!((fd_laplacian(gauss, &r, 1e-3) - want).norm() < 1e-6);
    let h = fd_hessian(gauss, &r, 1e-4);
    assert!((h.trace() - want).norm() < 1e-6);
    // out-of-range steps are clamped rather than trusted
    let g = fd_gradient(sq, &[1.0], 1.0)[0];
    assert!((g - 2.0).norm() < 1e-9);
}

#[test]
fn fd_matches_mode_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let th = AnisotropyMatrix::new(random_re_pd(&mut rng, 2, 0.0)).unwrap();
    let nu = mi(&[2, 1]);
    let m = AhgMode::new(th.clone(), nu.clone()).unwrap();
    for _ in 0..10 {
        let r = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let rc: Vec<Complex64> = r.iter().map(|&x| c(x, 0.0)).collect();
        let exact = crate::ahg::gradient(&th, &nu, &rc).unwrap();
        let fd = fd_gradient(|x| m.eval_real(x).unwrap(), &r, 1e-5);
        let scale = exact.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, b) in exact.iter().zip(&fd) {
            assert!((a - b).norm() < 1e-6 * scale);
        }
    }
}

#[test]
fn rule_points_follow_whitening() {
    let rule = QuadratureRule::new(2, 3, vec![2.0, 0.0, 0.0, 0.5], vec![1.0, -1.0]).unwrap();
    let pts = rule.points();
    assert_eq!(pts.len(), 9);
    let g = gauss_hermite_rule(3).unwrap();
    // last axis fastest
    assert!((pts[1].0[1] - (-1.0 + 0.5 * g.nodes[1])).abs() < 1e-15);
    assert!((pts[3].0[0] - (1.0 + 2.0 * g.nodes[1])).abs() < 1e-15);
    // ∫ e^{−|W⁻¹(x−s)|²} dx = |det W| π
    let v = rule.integrate(|x| {
        let u = [(x[0] - 1.0) / 2.0, (x[1] + 1.0) / 0.5];
        c((-(u[0] * u[0] + u[1] * u[1])).exp(), 0.0)
    });
    assert!((v.value - core::f64::consts::PI).norm() < 1e-13);
    assert!(QuadratureRule::new(2, 3, vec![1.0, 2.0, 2.0, 4.0], vec![0.0; 2]).is_err());
}

