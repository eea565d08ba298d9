//! Multi-indices, multi-index matrices and the finite enumerations that the
//! re-expansion identities sum over.
//!
//! Factorial-like quantities are returned in log domain; callers combine them
//! with signs and phases separately.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmatrix::CMat;
use crate::{Error, Result, TERM_LIMIT};

/// Fixed-length tuple of naturals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `ε_k`: one at position `k`, zero elsewhere.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiIndex(e)
    }

    /// Builds a multi-index from signed entries; `None` if any entry is negative.
    pub fn from_signed(entries: &[i64]) -> Option<Self> {
        entries
            .iter()
            .map(|&e| u32::try_from(e).ok())
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    /// `|ν|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `μ ⪯ ν` componentwise.
    pub fn is_below(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `ν − ε_k`, or `None` when the entry is already zero.
    pub fn lowered(&self, k: usize) -> Option<MultiIndex> {
        let v = self.0[k].checked_sub(1)?;
        let mut e = self.0.clone();
        e[k] = v;
        Some(MultiIndex(e))
    }

    /// `ln ν!`
    pub fn factorial_log(&self) -> f64 {
        factorial_log(self)
    }

    /// `x^ν` for a complex vector.
    pub fn pow(&self, x: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(x)
            .fold(Complex64::new(1.0, 0.0), |acc, (&k, &xi)| acc * xi.powu(k))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Comma-separated naturals, e.g. `"2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty multi-index".to_string()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(alloc::format!("bad multi-index entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// `ln k!`. Exact products up to 170, log-gamma beyond.
pub fn ln_factorial(k: u32) -> f64 {
    if k < 2 {
        return 0.0;
    }
    if k <= 170 {
        let mut p = 1.0f64;
        for i in 2..=k {
            p *= i as f64;
        }
        p.ln()
    } else {
        libm::lgamma(k as f64 + 1.0)
    }
}

/// `ln ν! = Σ_j ln ν_j!`
pub fn factorial_log(nu: &MultiIndex) -> f64 {
    nu.0.iter().map(|&k| ln_factorial(k)).sum()
}

/// `ln k!!` for `k ≥ -1` (with `(-1)!! = 0!! = 1`).
pub fn ln_double_factorial(k: i64) -> Result<f64> {
    if k < -1 {
        return Err(Error::Domain(alloc::format!("double factorial of {k}")));
    }
    let mut acc = 0.0;
    let mut i = k;
    while i > 1 {
        acc += (i as f64).ln();
        i -= 2;
    }
    Ok(acc)
}

/// `ν!! = Π_j ν_j!!`. Entries of `-1` are admitted and contribute 1.
pub fn double_factorial(entries: &[i64]) -> Result<f64> {
    let mut p = 1.0f64;
    for &k in entries {
        if k < -1 {
            return Err(Error::Domain(alloc::format!("double factorial of {k}")));
        }
        let mut i = k;
        while i > 1 {
            p *= i as f64;
            i -= 2;
        }
    }
    Ok(p)
}

/// Multi-index binomial `Π_j C(ν_j, μ_j)`; zero unless `μ ⪯ ν`.
pub fn binom(nu: &MultiIndex, mu: &MultiIndex) -> Result<f64> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch { expected: nu.len(), found: mu.len() });
    }
    if !mu.is_below(nu) {
        return Ok(0.0);
    }
    Ok(ln_binom(nu, mu).exp().round())
}

/// `ln binom(ν, μ)` assuming `μ ⪯ ν`.
pub(crate) fn ln_binom(nu: &MultiIndex, mu: &MultiIndex) -> f64 {
    nu.0.iter()
        .zip(&mu.0)
        .map(|(&n, &m)| ln_factorial(n) - ln_factorial(m) - ln_factorial(n - m))
        .sum()
}

fn binom_u64(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

fn guard(count: u64) -> Result<()> {
    if count > TERM_LIMIT {
        Err(Error::TermLimit { count, limit: TERM_LIMIT })
    } else {
        Ok(())
    }
}

/// Lazy ascending-lexicographic stream of all `μ ⪯ ν`.
#[derive(Debug, Clone)]
pub struct Below {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for Below {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut k = succ.len();
        while k > 0 {
            k -= 1;
            if succ[k] < self.bound[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(MultiIndex(cur))
    }
}

/// Number of `μ ⪯ ν`: `Π_j (ν_j + 1)`.
pub fn count_below(nu: &MultiIndex) -> u64 {
    nu.0.iter().fold(1u64, |acc, &k| acc.saturating_mul(k as u64 + 1))
}

/// All `μ ⪯ ν` in ascending lexicographic order.
pub fn enumerate_below(nu: &MultiIndex) -> Result<Below> {
    guard(count_below(nu))?;
    Ok(Below { bound: nu.0.clone(), next: Some(vec![0; nu.len()]) })
}

/// All multi-indices of dimension `n` with `|ν| ≤ max_degree`, by degree and
/// then descending lexicographic order within a degree.
pub fn enumerate_up_to_degree(n: usize, max_degree: u32) -> Result<Vec<MultiIndex>> {
    let total = binom_u64(n as u64 + max_degree as u64, n as u64);
    guard(total)?;
    let mut out = Vec::with_capacity(total as usize);
    for d in 0..=max_degree {
        let mut c = Composition::first(d, n);
        while let Some(parts) = c.current() {
            out.push(MultiIndex(parts.to_vec()));
            c.advance();
        }
    }
    Ok(out)
}

/// Compositions of `total` into `parts` naturals in descending lex order,
/// starting at `(total, 0, …, 0)`.
#[derive(Debug, Clone)]
struct Composition {
    parts: Vec<u32>,
    done: bool,
}

impl Composition {
    fn first(total: u32, parts: usize) -> Self {
        let mut p = vec![0; parts];
        if parts == 0 {
            return Composition { parts: p, done: total != 0 };
        }
        p[0] = total;
        Composition { parts: p, done: false }
    }

    fn current(&self) -> Option<&[u32]> {
        (!self.done).then_some(&self.parts[..])
    }

    fn advance(&mut self) -> bool {
        let r = self.parts.len();
        if r < 2 {
            self.done = true;
            return false;
        }
        let Some(i) = (0..r - 1).rev().find(|&i| self.parts[i] > 0) else {
            self.done = true;
            return false;
        };
        let tail: u32 = self.parts[i + 1..].iter().sum();
        self.parts[i] -= 1;
        for p in &mut self.parts[i + 1..] {
            *p = 0;
        }
        self.parts[i + 1] = tail + 1;
        true
    }
}

/// `rows × cols` grid of naturals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl MultiIndexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MultiIndexMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[&[u32]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged multi-index matrix");
            entries.extend_from_slice(row);
        }
        MultiIndexMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, k: usize) -> u32 {
        self.entries[j * self.cols + k]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `Ω𝟙`
    pub fn row_sums(&self) -> MultiIndex {
        MultiIndex((0..self.rows).map(|j| self.entries[j * self.cols..(j + 1) * self.cols].iter().sum()).collect())
    }

    /// `𝟙ᵀΩ`
    pub fn col_sums(&self) -> MultiIndex {
        MultiIndex((0..self.cols).map(|k| (0..self.rows).map(|j| self.get(j, k)).sum()).collect())
    }

    /// `ln Ω! = Σ_{jk} ln ω_jk!`
    pub fn factorial_log(&self) -> f64 {
        self.entries.iter().map(|&w| ln_factorial(w)).sum()
    }

    /// `A^Ω = Π_{jk} a_jk^{ω_jk}` with `0^0 = 1`.
    pub fn pow(&self, a: &CMat) -> Complex64 {
        debug_assert_eq!(a.dim(), self.rows);
        let mut acc = Complex64::new(1.0, 0.0);
        for j in 0..self.rows {
            for k in 0..self.cols {
                let w = self.get(j, k);
                if w > 0 {
                    acc *= a[(j, k)].powu(w);
                }
            }
        }
        acc
    }
}

impl fmt::Display for MultiIndexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for j in 0..self.rows {
            if j > 0 {
                f.write_str(";")?;
            }
            for k in 0..self.cols {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(j, k))?;
            }
        }
        f.write_str("]")
    }
}

/// Number of `rows × n` matrices with column sums `ν`: `Π_j C(ν_j + rows − 1, rows − 1)`.
pub fn count_colsum_matrices(nu: &MultiIndex, rows: usize) -> u64 {
    if rows == 0 {
        return u64::from(nu.degree() == 0);
    }
    nu.0.iter().fold(1u64, |acc, &k| {
        acc.saturating_mul(binom_u64(k as u64 + rows as u64 - 1, rows as u64 - 1))
    })
}

/// Lazy stream of all matrices with prescribed column sums.
///
/// Column-major entry tuples come out in descending lexicographic order: the
/// first column varies slowest and each column starts from `(ν_k, 0, …, 0)`.
#[derive(Debug, Clone)]
pub struct ColsumMatrices {
    rows: usize,
    columns: Vec<Composition>,
    done: bool,
}

impl Iterator for ColsumMatrices {
    type Item = MultiIndexMatrix;

    fn next(&mut self) -> Option<MultiIndexMatrix> {
        if self.done {
            return None;
        }
        let cols = self.columns.len();
        let mut m = MultiIndexMatrix::zeros(self.rows, cols);
        for (k, c) in self.columns.iter().enumerate() {
            let parts = c.current().expect("live composition");
            for (j, &p) in parts.iter().enumerate() {
                m.entries[j * cols + k] = p;
            }
        }
        // odometer, last column fastest
        let mut k = cols;
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.columns[k].advance() {
                break;
            }
            let total: u32 = self.columns[k].parts.iter().sum();
            self.columns[k] = Composition::first(total, self.rows);
        }
        Some(m)
    }
}

/// Every `rows × len(ν)` multi-index matrix whose `k`-th column sums to `ν_k`.
pub fn enumerate_colsum_matrices(nu: &MultiIndex, rows: usize) -> Result<ColsumMatrices> {
    guard(count_colsum_matrices(nu, rows))?;
    if rows == 0 {
        return Ok(ColsumMatrices { rows, columns: Vec::new(), done: nu.degree() != 0 });
    }
    let columns = nu.0.iter().map(|&k| Composition::first(k, rows)).collect();
    Ok(ColsumMatrices { rows, columns, done: false })
}

/// One term of the product expansion: `β = ν − Ω𝟙`, `γ = μ − 𝟙ᵀΩ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    pub omega: MultiIndexMatrix,
    pub beta: MultiIndex,
    pub gamma: MultiIndex,
}

/// Lazy stream of all `Ω` with row sums `≤ ν` and column sums `≤ μ`,
/// ascending lexicographic in row-major entry order.
#[derive(Debug, Clone)]
pub struct ProductMatrices {
    nu: Vec<u32>,
    mu: Vec<u32>,
    entries: Option<Vec<u32>>,
}

impl ProductMatrices {
    fn advance(&self, cur: &[u32]) -> Option<Vec<u32>> {
        let n = self.nu.len();
        let mut e = cur.to_vec();
        for p in (0..e.len()).rev() {
            let (j, k) = (p / n, p % n);
            let row: u32 = (0..k).map(|kk| e[j * n + kk]).sum();
            let col: u32 = (0..j).map(|jj| e[jj * n + k]).sum();
            if row + e[p] < self.nu[j] && col + e[p] < self.mu[k] {
                e[p] += 1;
                for q in &mut e[p + 1..] {
                    *q = 0;
                }
                return Some(e);
            }
        }
        None
    }
}

impl Iterator for ProductMatrices {
    type Item = ProductTerm;

    fn next(&mut self) -> Option<ProductTerm> {
        let cur = self.entries.take()?;
        self.entries = self.advance(&cur);
        let n = self.nu.len();
        let omega = MultiIndexMatrix { rows: n, cols: n, entries: cur };
        let rs = omega.row_sums();
        let cs = omega.col_sums();
        let beta = MultiIndex(self.nu.iter().zip(rs.entries()).map(|(a, b)| a - b).collect());
        let gamma = MultiIndex(self.mu.iter().zip(cs.entries()).map(|(a, b)| a - b).collect());
        Some(ProductTerm { omega, beta, gamma })
    }
}

/// Every `Ω ∈ ℕ^{n×n}` with `ν − Ω𝟙 ≥ 0` and `μ − 𝟙ᵀΩ ≥ 0`.
pub fn enumerate_product_matrices(nu: &MultiIndex, mu: &MultiIndex) -> Result<ProductMatrices> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch { expected: nu.len(), found: mu.len() });
    }
    let n = nu.len();
    let it = ProductMatrices { nu: nu.0.clone(), mu: mu.0.clone(), entries: Some(vec![0; n * n]) };
    // Cheap upper bound first; count exactly only if it is inconclusive.
    let mut bound = 1u64;
    for j in 0..n {
        for k in 0..n {
            bound = bound.saturating_mul(nu.0[j].min(mu.0[k]) as u64 + 1);
        }
    }
    if bound > TERM_LIMIT {
        let count = it.clone().take(TERM_LIMIT as usize + 1).count() as u64;
        guard(count)?;
    }
    Ok(it)
}

/// Renders a list of matrices, one per line; used by golden tests.
pub fn render_matrices<I: IntoIterator<Item = MultiIndexMatrix>>(it: I) -> String {
    let mut s = String::new();
    for m in it {
        s.push_str(&m.to_string());
        s.push('\n');
    }
    s
}
