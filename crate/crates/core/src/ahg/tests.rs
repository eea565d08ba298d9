use super::*;
use alloc::vec;
use alloc::vec::Vec;
use crate::cmatrix::tests::random_re_pd;
use crate::hermite1d::{hg1, hg1_derivative};
use crate::oracle::{fd_gradient, fd_jacobian, fd_laplacian, inner_product, LiteralMode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

fn theta_a() -> AnisotropyMatrix {
    AnisotropyMatrix::from_real_rows(&[&[1.0, 0.3], &[0.3, 0.8]]).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn rand_vec(rng: &mut impl Rng, n: usize, s: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-s..s)).collect()
}

fn rand_cvec(rng: &mut impl Rng, n: usize, s: f64) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-s..s), rng.gen_range(-s..s))).collect()
}

#[test]
fn identity_theta_is_product_of_univariate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        let th = AnisotropyMatrix::identity(n);
        for nu in enumerate_up_to_degree(n, 5).unwrap() {
            let r = rand_cvec(&mut rng, n, 1.5);
            let want = nu.entries().iter().zip(&r).fold(c(1.0, 0.0), |a, (&k, &z)| a * hg1(k, z));
            let got = eval(&th, &nu, &r).unwrap();
            assert!(close(got, want, 1e-12), "{nu}: {got} vs {want}");
            // dual equals primal for Θ = I
            assert!(close(eval_dual(&th, &nu, &r).unwrap(), want, 1e-12));
        }
    }
}

#[test]
fn negative_degree_is_zero() {
    let m = AhgMode::from_signed(theta_a(), &[2, -1], false).unwrap();
    assert!(m.is_zero());
    assert_eq!(m.eval_real(&[0.3, 0.1]).unwrap(), c(0.0, 0.0));
    let d = AhgMode::from_signed(theta_a(), &[-1, 0], true).unwrap();
    assert_eq!(d.eval_real(&[0.3, 0.1]).unwrap(), c(0.0, 0.0));
}

#[test]
fn dimension_mismatch_is_reported() {
    assert!(matches!(
        AhgMode::new(theta_a(), mi(&[1, 1, 1])),
        Err(Error::DimensionMismatch { expected: 2, found: 3 })
    ));
    let m = AhgMode::new(theta_a(), mi(&[1, 1])).unwrap();
    assert!(m.eval_real(&[0.1]).is_err());
}

/// Generating-function oracle: the coefficient of `x^ν` isolated by
/// finite differences is avoided; instead compare the full sum with the
/// closed right-hand side, then compare the single mode against an
/// independent literal evaluation.
#[test]
fn generic_example_matches_generating_and_literal() {
    let th = theta_a();
    let nu = mi(&[1, 1]);
    let r = [c(0.5, 0.0), c(-0.3, 0.0)];
    let got = eval(&th, &nu, &r).unwrap();
    let lit = LiteralMode::new(&th, &nu).unwrap().eval(&r).unwrap();
    assert!(close(got, lit, 1e-12), "{got} vs {lit}");
    let x = [c(0.05, 0.0), c(-0.04, 0.0)];
    let s = generating_sum(&th, &x, &r, 24).unwrap();
    let closed = generating_closed(&th, &x, &r).unwrap();
    assert!(close(s, closed, 1e-12), "{s} vs {closed}");
}

#[test]
fn generating_function_examples() {
    let th = theta_a();
    let r = [c(0.2, 0.0), c(0.4, 0.0)];
    let x0 = [c(0.0, 0.0); 2];
    let g0 = generating_sum(&th, &x0, &r, 10).unwrap();
    assert!(close(g0, eval(&th, &mi(&[0, 0]), &r).unwrap(), 1e-15));
    assert!(close(g0, generating_closed(&th, &x0, &r).unwrap(), 1e-13));

    let i1 = AnisotropyMatrix::identity(1);
    let g = generating_sum(&i1, &[c(0.1, 0.0)], &[c(0.7, 0.0)], 30).unwrap();
    let want = generating_closed(&i1, &[c(0.1, 0.0)], &[c(0.7, 0.0)]).unwrap();
    assert!(close(g, want, 1e-12));

    // truncation error shrinks monotonically with the order
    let x = [c(0.2, 0.1), c(-0.15, 0.0)];
    let r = [c(0.3, -0.2), c(0.5, 0.1)];
    let target = generating_closed(&th, &x, &r).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..24 {
        let e = (generating_sum(&th, &x, &r, k).unwrap() - target).norm();
        assert!(e < last || e < 1e-15, "order {k}: {e} !< {last}");
        last = e;
    }
    assert!(last < 1e-12);
}

#[test]
fn literal_definition_agrees_with_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for _ in 0..3 {
            let th = AnisotropyMatrix::new(random_re_pd(&mut rng, n, 0.5)).unwrap();
            for nu in enumerate_up_to_degree(n, 4).unwrap() {
                let r = rand_cvec(&mut rng, n, 1.0);
                let a = eval(&th, &nu, &r).unwrap();
                let b = LiteralMode::new(&th, &nu).unwrap().eval(&r).unwrap();
                assert!(close(a, b, 1e-10), "n={n} {nu}: {a} vs {b}");
                let ad = eval_dual(&th, &nu, &r).unwrap();
                let bd = LiteralMode::dual(&th, &nu).unwrap().eval(&r).unwrap();
                assert!(close(ad, bd, 1e-10), "dual n={n} {nu}: {ad} vs {bd}");
            }
        }
    }
}

#[test]
fn dual_ground_state_is_inverse_covariance_gaussian() {
    let th = theta_a();
    let q = th.inv().clone();
    let det = th.matrix().det().unwrap().re;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let r = rand_vec(&mut rng, 2, 2.0);
        let rc = real_vec(&r);
        // |Θ|^{-1/2} (π²|Θ⁻¹|)^{-1/4} e^{-½ (Θ⁻¹r)ᵀΘ(Θ⁻¹r)}
        let want = (-0.5 * quad_form(&q, &rc).unwrap()).exp() * (PI_SQ / det).powf(-0.25) / det.sqrt();
        let got = eval_dual(&th, &mi(&[0, 0]), &rc).unwrap();
        assert!(close(got, want, 1e-13), "{got} vs {want}");
    }
}

const PI_SQ: f64 = core::f64::consts::PI * core::f64::consts::PI;

#[test]
fn value_at_zero() {
    let th = theta_a();
    let z = [c(0.0, 0.0); 2];
    let d = th.matrix().det().unwrap().re;
    let g = eval_at_zero(&th, &mi(&[0, 0])).unwrap();
    assert!(close(g, c((PI_SQ * d).powf(-0.25), 0.0), 1e-14));
    assert_eq!(eval_at_zero(&AnisotropyMatrix::identity(2), &mi(&[1, 0])).unwrap(), c(0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let generic = AnisotropyMatrix::new(random_re_pd(&mut rng, 2, 0.4)).unwrap();
    for t in [th, generic] {
        for nu in enumerate_up_to_degree(2, 6).unwrap() {
            let a = eval_at_zero(&t, &nu).unwrap();
            let b = eval(&t, &nu, &z).unwrap();
            assert!((a - b).norm() < 1e-11 * b.norm().max(1.0), "{nu}: {a} vs {b}");
        }
    }
}

#[test]
fn cross_path_agreement_at_origin() {
    let th = theta_a();
    let z = [c(0.0, 0.0); 2];
    let x = [c(0.1, 0.0), c(0.05, 0.0)];
    let direct = generating_sum(&th, &x, &z, 20).unwrap();
    let mut via_zero = c(0.0, 0.0);
    for nu in enumerate_up_to_degree(2, 20).unwrap() {
        let w = (0.5 * (nu.degree() as f64 * core::f64::consts::LN_2 - nu.factorial_log())).exp();
        via_zero += nu.pow(&x) * w * eval_at_zero(&th, &nu).unwrap();
    }
    let closed = generating_closed(&th, &x, &z).unwrap();
    assert!(close(direct, closed, 1e-9));
    assert!(close(via_zero, closed, 1e-9));
    assert!(close(direct, via_zero, 1e-9));
}

#[test]
fn lowering_examples() {
    let th = theta_a();
    let r = [c(0.4, 0.0), c(-0.2, 0.0)];
    let phi = lowering_vector(&th, &mi(&[0, 0]), &r).unwrap();
    assert!(phi.iter().all(|z| *z == c(0.0, 0.0)));
    let i1 = AnisotropyMatrix::identity(1);
    let p1 = lowering_vector(&i1, &mi(&[1]), &[c(0.3, 0.0)]).unwrap();
    assert!(close(p1[0], hg1(0, c(0.3, 0.0)) / 2f64.sqrt(), 1e-15));
    let nu = mi(&[3, 2]);
    let p = lowering_vector(&th, &nu, &r).unwrap();
    assert!(close(p[0], eval(&th, &mi(&[2, 2]), &r).unwrap() * 1.5f64.sqrt(), 1e-14));
    assert!(close(p[1], eval(&th, &mi(&[3, 1]), &r).unwrap(), 1e-14));

    assert_eq!(lowering_matrix(&th, &mi(&[0, 0]), &r).unwrap().max_abs(), 0.0);
    let m11 = lowering_matrix(&th, &mi(&[1, 1]), &r).unwrap();
    let g0 = eval(&th, &mi(&[0, 0]), &r).unwrap();
    assert_eq!(m11[(0, 0)], c(0.0, 0.0));
    assert_eq!(m11[(1, 1)], c(0.0, 0.0));
    assert!(close(m11[(0, 1)], g0, 1e-15) && close(m11[(1, 0)], g0, 1e-15));
    let m = lowering_matrix(&th, &nu, &r).unwrap();
    assert!(m.asymmetry() == 0.0);
    assert!(close(m[(0, 0)], eval(&th, &mi(&[1, 2]), &r).unwrap() * 6f64.sqrt(), 1e-14));
    assert!(close(m[(0, 1)], eval(&th, &mi(&[2, 1]), &r).unwrap() * 6f64.sqrt(), 1e-14));
}

#[test]
fn derivative_closed_forms_for_ground_state() {
    let th = AnisotropyMatrix::identity(2);
    let r = [c(0.7, 0.0), c(-0.4, 0.0)];
    let g0 = eval(&th, &mi(&[0, 0]), &r).unwrap();
    let g = gradient(&th, &mi(&[0, 0]), &r).unwrap();
    assert!(close(g[0], -r[0] * g0, 1e-15) && close(g[1], -r[1] * g0, 1e-15));
    let h = hessian(&th, &mi(&[0, 0]), &r).unwrap();
    for j in 0..2 {
        for k in 0..2 {
            let d = if j == k { 1.0 } else { 0.0 };
            assert!(close(h[(j, k)], (r[j] * r[k] - d) * g0, 1e-14));
        }
    }
    let l = laplacian(&th, &mi(&[0, 0]), &r).unwrap();
    let rr = r[0] * r[0] + r[1] * r[1];
    assert!(close(l, (rr - 2.0) * g0, 1e-14));
    // univariate ν = 1 against the recurrence derivative
    let i1 = AnisotropyMatrix::identity(1);
    for x in [-1.3, 0.0, 0.4, 2.2] {
        let z = c(x, 0.0);
        let d = gradient(&i1, &mi(&[1]), &[z]).unwrap()[0];
        assert!(close(d, hg1_derivative(1, z), 1e-14));
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=3 {
        let th = AnisotropyMatrix::new(random_re_pd(&mut rng, n, 0.0)).unwrap();
        for nu in [MultiIndex::zeros(n), MultiIndex::unit(n, 0), MultiIndex::new(vec![2; n])] {
            let d = ModeDerivatives::new(&th, &nu).unwrap();
            let mode = AhgMode::new(th.clone(), nu.clone()).unwrap();
            let f = |x: &[f64]| mode.eval_real(x).unwrap();
            for _ in 0..10 {
                let r = rand_vec(&mut rng, n, 1.2);
                let rc = real_vec(&r);
                let g = d.gradient(&rc).unwrap();
                let fd = fd_gradient(f, &r, 1e-5);
                let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-3);
                for (a, b) in g.iter().zip(&fd) {
                    assert!((a - b).norm() < 1e-6 * scale, "grad {nu}: {a} vs {b}");
                }
                let h = d.hessian(&rc).unwrap();
                let fh = fd_jacobian(|x| d.gradient(&real_vec(x)).unwrap(), &r, 1e-4);
                let hs = h.max_abs().max(1e-3);
                assert!(h.sub(&fh).max_abs() < 1e-5 * hs, "hess {nu}");
                let l = d.laplacian(&rc).unwrap();
                assert!((l - h.trace()).norm() < 1e-12 * hs.max(1.0));
                let fl = fd_laplacian(f, &r, 1e-4);
                assert!((l - fl).norm() < 1e-5 * l.norm().max(1e-2), "lap {nu}: {l} vs {fl}");
                for (j, &gj) in g.iter().enumerate() {
                    assert!(close(d.partial(&rc, j).unwrap(), gj, 1e-15));
                }
            }
        }
    }
}

#[test]
fn anisotropy_transform_examples() {
    let th = theta_a();
    let same = anisotropy_transform(&th, &th, &mi(&[2, 1])).unwrap();
    assert_eq!(same.len(), 1);
    assert!(close(same.coefficient(&mi(&[2, 1])), c(1.0, 0.0), 1e-12));
    let zero = anisotropy_transform(&th, &AnisotropyMatrix::identity(2), &mi(&[0, 0])).unwrap();
    assert_eq!(zero.len(), 1);
    let t = zero.argument_map().unwrap();
    let want = t.det().unwrap().sqrt();
    assert!(close(zero.coefficient(&mi(&[0, 0])), want, 1e-13));

    let e = anisotropy_transform(&th, &AnisotropyMatrix::identity(2), &mi(&[2, 1])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let r = rand_vec(&mut rng, 2, 1.5);
        let a = e.eval_real(&r).unwrap();
        let b = eval(&th, &mi(&[2, 1]), &real_vec(&r)).unwrap();
        assert!(rel(a, b) < 1e-9 || (a - b).norm() < 1e-12, "{a} vs {b}");
    }
    // complex anisotropies in both slots
    let t1 = AnisotropyMatrix::new(random_re_pd(&mut rng, 3, 0.6)).unwrap();
    let t2 = AnisotropyMatrix::new(random_re_pd(&mut rng, 3, 0.6)).unwrap();
    let nu = mi(&[1, 2, 1]);
    let e = anisotropy_transform(&t1, &t2, &nu).unwrap();
    for _ in 0..5 {
        let r = rand_cvec(&mut rng, 3, 1.0);
        assert!(close(e.eval(&r).unwrap(), eval(&t1, &nu, &r).unwrap(), 1e-9));
    }
}

#[test]
fn offset_expansion_examples() {
    let th = theta_a();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let zero_s = offset_expansion(&th, &mi(&[2, 1]), &[c(0.0, 0.0); 2]).unwrap();
    for _ in 0..5 {
        let r = rand_vec(&mut rng, 2, 1.0);
        let b = eval(&th, &mi(&[2, 1]), &real_vec(&r)).unwrap();
        assert!((zero_s.eval_real(&r).unwrap() - b).norm() < 1e-10);
    }
    for nu in [mi(&[0, 0]), mi(&[2, 1])] {
        let s = rand_vec(&mut rng, 2, 0.8);
        let e = offset_expansion(&th, &nu, &real_vec(&s)).unwrap();
        for _ in 0..20 {
            let r = rand_vec(&mut rng, 2, 1.0);
            let rs: Vec<f64> = r.iter().zip(&s).map(|(a, b)| a + b).collect();
            let b = eval(&th, &nu, &real_vec(&rs)).unwrap();
            let a = e.eval_real(&r).unwrap();
            assert!(rel(a, b) < 1e-9 || (a - b).norm() < 1e-13, "{nu}: {a} vs {b}");
        }
    }
}

#[test]
fn product_expansion_examples() {
    let th = theta_a();
    let p0 = product_expansion(&th, &mi(&[0, 0]), &mi(&[0, 0])).unwrap();
    assert_eq!(p0.expansion().len(), 1);
    let norm = c(1.0, 0.0) / gauss_norm(&th);
    assert!(close(p0.expansion().coefficient(&mi(&[0, 0])), norm, 1e-14));

    let i1 = AnisotropyMatrix::identity(1);
    let p = product_expansion(&i1, &mi(&[1]), &mi(&[1])).unwrap();
    for x in [-2.0, -0.3, 0.0, 0.9, 1.7] {
        let h = hg1(1, c(x, 0.0));
        assert!((p.eval_real(&[x]).unwrap() - h * h).norm() < 1e-11);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let generic = AnisotropyMatrix::new(random_re_pd(&mut rng, 2, 0.0)).unwrap();
    let (nu, mu) = (mi(&[1, 1]), mi(&[2, 0]));
    let p = product_expansion(&generic, &nu, &mu).unwrap();
    for _ in 0..20 {
        let r = real_vec(&rand_vec(&mut rng, 2, 1.5));
        let b = eval(&generic, &nu, &r).unwrap() * eval(&generic, &mu, &r).unwrap();
        let a = p.eval(&r).unwrap();
        assert!(rel(a, b) < 1e-9 || (a - b).norm() < 1e-13, "{a} vs {b}");
    }
}

#[test]
fn orthonormal_against_duals() {
    let th = theta_a();
    let idx = enumerate_up_to_degree(2, 3).unwrap();
    let modes: Vec<(AhgMode, AhgMode)> = idx
        .iter()
        .map(|nu| (AhgMode::new(th.clone(), nu.clone()).unwrap(), AhgMode::dual(th.clone(), nu.clone()).unwrap()))
        .collect();
    for (i, (p, _)) in modes.iter().enumerate() {
        for (j, (_, d)) in modes.iter().enumerate() {
            let g = inner_product(|x| p.eval_real(x).unwrap(), |x| d.eval_real(x).unwrap(), &th, 40).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((g.value - want).norm() < 1e-8, "{} {}: {}", idx[i], idx[j], g.value);
        }
    }
}

#[test]
fn parity_and_realness_for_real_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=3 {
        let th = AnisotropyMatrix::new(random_re_pd(&mut rng, n, 0.0)).unwrap();
        for nu in enumerate_up_to_degree(n, 4).unwrap() {
            let r = rand_vec(&mut rng, n, 1.5);
            let neg: Vec<f64> = r.iter().map(|x| -x).collect();
            let a = eval(&th, &nu, &real_vec(&r)).unwrap();
            let b = eval(&th, &nu, &real_vec(&neg)).unwrap();
            let s = if nu.degree() % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b - a * s).norm() < 1e-12 * a.norm().max(1.0));
            assert!(a.im.abs() <= 1e-13 * a.norm().max(1e-300) || a.im == 0.0, "{nu}: {a}");
        }
    }
}

#[test]
fn per_coordinate_parity_for_identity() {
    let th = AnisotropyMatrix::identity(3);
    let nu = mi(&[1, 2, 3]);
    let r = [0.3, -0.8, 1.1];
    let base = eval(&th, &nu, &real_vec(&r)).unwrap();
    for j in 0..3 {
        let mut f = r;
        f[j] = -f[j];
        let s = if nu.get(j).is_multiple_of(2) { 1.0 } else { -1.0 };
        assert!((eval(&th, &nu, &real_vec(&f)).unwrap() - base * s).norm() < 1e-14);
    }
}

fn arb_theta(n: usize, imag: f64) -> impl Strategy<Value = AnisotropyMatrix> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AnisotropyMatrix::new(random_re_pd(&mut rng, n, imag)).unwrap()
    })
}

fn arb_c() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_symmetry(th in arb_theta(2, 0.7), a in 0u32..4, b in 0u32..4, r0 in arb_c(), r1 in arb_c()) {
        let nu = mi(&[a, b]);
        let r = [r0, r1];
        let rc = [r0.conj(), r1.conj()];
        let lhs = eval(&th, &nu, &r).unwrap().conj();
        let rhs = eval(&th.conj(), &nu, &rc).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn scaling_property(th in arb_theta(2, 0.3), a in 0u32..4, b in 0u32..4,
                        zr in 0.5f64..2.0, zi in -0.5f64..0.5, r0 in arb_c(), r1 in arb_c()) {
        let z = c(zr, zi);
        let nu = mi(&[a, b]);
        let scaled = AnisotropyMatrix::analytic(th.matrix().scale(z * z)).unwrap();
        let lhs = eval(&scaled, &nu, &[r0, r1]).unwrap();
        let rz = [r0 / z, r1 / z];
        // per-eigenvalue principal branches: |z²Θ|^{1/4} = z^{n/2}|Θ|^{1/4} for Re z > 0
        let rhs = th.quarter_det() / scaled.quarter_det() * z.powi(-(nu.degree() as i32)) * eval(&th, &nu, &rz).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn dual_definition(th in arb_theta(3, 0.5), a in 0u32..3, b in 0u32..3, d in 0u32..3,
                       r0 in arb_c(), r1 in arb_c(), r2 in arb_c()) {
        let nu = mi(&[a, b, d]);
        let r = [r0, r1, r2];
        let inv = th.inverse();
        let s = th.inv().mul_vec(&r);
        let want = eval(&inv, &nu, &s).unwrap() / th.half_det();
        prop_assert!(close(eval_dual(&th, &nu, &r).unwrap(), want, 1e-12));
    }
}
