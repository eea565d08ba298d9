//! Central finite differences. Step sizes are clamped to `[1e-7, 1e-2]`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cmatrix::CMat;

fn clamp(h: f64) -> f64 {
    h.clamp(1e-7, 1e-2)
}

fn shifted(r: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut x = r.to_vec();
    for &(k, d) in moves {
        x[k] += d;
    }
    x
}

/// `O(h²)` central-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> Complex64, r: &[f64], h: f64) -> Vec<Complex64> {
    let h = clamp(h);
    (0..r.len())
        .map(|k| (f(&shifted(r, &[(k, h)])) - f(&shifted(r, &[(k, -h)]))) / (2.0 * h))
        .collect()
}

/// `O(h²)` Hessian from second differences of `f`.
pub fn fd_hessian(f: impl Fn(&[f64]) -> Complex64, r: &[f64], h: f64) -> CMat {
    let h = clamp(h);
    let n = r.len();
    let f0 = f(r);
    let mut out = CMat::zeros(n);
    for j in 0..n {
        out[(j, j)] = (f(&shifted(r, &[(j, h)])) - f0 * 2.0 + f(&shifted(r, &[(j, -h)]))) / (h * h);
        for k in j + 1..n {
            let v = (f(&shifted(r, &[(j, h), (k, h)])) - f(&shifted(r, &[(j, h), (k, -h)]))
                - f(&shifted(r, &[(j, -h), (k, h)]))
                + f(&shifted(r, &[(j, -h), (k, -h)])))
                / (4.0 * h * h);
            out[(j, k)] = v;
            out[(k, j)] = v;
        }
    }
    out
}

/// Hessian as the `O(h²)` Jacobian of a gradient field, symmetrized.
pub fn fd_jacobian(g: impl Fn(&[f64]) -> Vec<Complex64>, r: &[f64], h: f64) -> CMat {
    let h = clamp(h);
    let n = r.len();
    let mut out = CMat::zeros(n);
    for k in 0..n {
        let up = g(&shifted(r, &[(k, h)]));
        let dn = g(&shifted(r, &[(k, -h)]));
        for j in 0..n {
            out[(j, k)] = (up[j] - dn[j]) / (2.0 * h);
        }
    }
    out.symmetrize()
}

/// `O(h⁴)` Laplacian from a 5-point stencil on each axis.
pub fn fd_laplacian(f: impl Fn(&[f64]) -> Complex64, r: &[f64], h: f64) -> Complex64 {
    let h = clamp(h);
    let f0 = f(r);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..r.len() {
        let p1 = f(&shifted(r, &[(k, h)]));
        let m1 = f(&shifted(r, &[(k, -h)]));
        let p2 = f(&shifted(r, &[(k, 2.0 * h)]));
        let m2 = f(&shifted(r, &[(k, -2.0 * h)]));
        acc += (-p2 + p1 * 16.0 - f0 * 30.0 + m1 * 16.0 - m2) / (12.0 * h * h);
    }
    acc
}
