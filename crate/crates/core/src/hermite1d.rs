//! Univariate Hermite polynomials and normalized Hermite-Gauss functions
//! `hg_k(z) = (√π 2^k k!)^{-1/2} e^{-z²/2} H_k(z)`, for complex `z`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::multiindex::{ln_double_factorial, ln_factorial};

/// Highest supported order.
pub const MAX_ORDER: u32 = 200;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const RESCALE: f64 = 1e150;

/// Physicists' Hermite polynomial `H_k(z)` by the three-term recurrence.
pub fn hermite_poly(k: u32, z: Complex64) -> Complex64 {
    let mut h0 = Complex64::new(1.0, 0.0);
    if k == 0 {
        return h0;
    }
    let mut h1 = z * 2.0;
    for j in 1..k {
        let h2 = z * h1 * 2.0 - h0 * (2.0 * j as f64);
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `hg_k(z)`.
pub fn hg1(k: u32, z: Complex64) -> Complex64 {
    let (h, s) = normalized_poly(k, z);
    h * (-z * z * 0.5 + (s - 0.25 * LN_PI)).exp()
}

/// `hg_0(z), …, hg_{kmax}(z)` in one pass.
pub fn hg1_all(kmax: u32, z: Complex64) -> Vec<Complex64> {
    let env = -z * z * 0.5 - 0.25 * LN_PI;
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut h0 = Complex64::new(1.0, 0.0);
    let mut h1 = z * core::f64::consts::SQRT_2;
    let mut s = 0.0;
    out.push(env.exp());
    if kmax == 0 {
        return out;
    }
    out.push(h1 * env.exp());
    for j in 1..kmax {
        let h2 = step(j, z, h0, h1);
        h0 = h1;
        h1 = h2;
        let m = h1.norm().max(h0.norm());
        if m > RESCALE {
            h0 /= m;
            h1 /= m;
            s += m.ln();
        }
        out.push(h1 * (env + s).exp());
    }
    out
}

/// `h_{j+1}` from `h_{j-1}, h_j` for the normalized polynomials `h_k = H_k/√(2^k k!)`.
#[inline]
fn step(j: u32, z: Complex64, h0: Complex64, h1: Complex64) -> Complex64 {
    let jf = j as f64;
    z * h1 * (2.0 / (jf + 1.0)).sqrt() - h0 * (jf / (jf + 1.0)).sqrt()
}

/// `H_k(z)/√(2^k k!)` as `(mantissa, log-scale)`.
fn normalized_poly(k: u32, z: Complex64) -> (Complex64, f64) {
    let mut h0 = Complex64::new(1.0, 0.0);
    if k == 0 {
        return (h0, 0.0);
    }
    let mut h1 = z * core::f64::consts::SQRT_2;
    let mut s = 0.0;
    for j in 1..k {
        let h2 = step(j, z, h0, h1);
        h0 = h1;
        h1 = h2;
        let m = h1.norm().max(h0.norm());
        if m > RESCALE {
            h0 /= m;
            h1 /= m;
            s += m.ln();
        }
    }
    (h1, s)
}

/// `hg_k(0)` in closed form: zero for odd `k`, else
/// `(−1)^{k/2} π^{−1/4} (k−1)!! / √(k!)`.
pub fn hg1_at_zero(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let ln_df = ln_double_factorial(k as i64 - 1).unwrap_or(0.0);
    sign * (-0.25 * LN_PI - 0.5 * ln_factorial(k) + ln_df).exp()
}

/// `hg_k'(z) = √(k/2) hg_{k−1}(z) − √((k+1)/2) hg_{k+1}(z)`.
pub fn hg1_derivative(k: u32, z: Complex64) -> Complex64 {
    let up = hg1(k + 1, z) * ((k as f64 + 1.0) / 2.0).sqrt();
    if k == 0 {
        -up
    } else {
        hg1(k - 1, z) * (k as f64 / 2.0).sqrt() - up
    }
}
