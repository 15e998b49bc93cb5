//! Exact linear algebra over prime fields F_p.
//!
//! Everything here is integer arithmetic on residues; there is no floating
//! point anywhere. Matrices are dense and row-major, vectors are coefficient
//! lists. Orderings (echelon enumeration, kernel bases, pivot choices) are
//! deterministic so downstream reports are byte-stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("order exceeds bound {0}")]
    BoundExceeded(u64),
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("modulus {0} is not a valid prime")]
    BadModulus(u32),
}

/// Largest prime modulus accepted anywhere: fits in u16 so products fit u32
/// and accumulations fit u64 without overflow checks.
pub const MAX_PRIME: u32 = (1 << 16) - 1;

#[inline]
pub fn addm(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn negm(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn powm(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse mod p; p must be prime and a nonzero.
pub fn invm(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero");
    powm(a, p as u64 - 2, p)
}

pub fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Vector over F_p. Residues are always reduced (`vals[i] < p`).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VecFp {
    pub p: u32,
    pub vals: Vec<u32>,
}

impl std::fmt::Debug for VecFp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VecFp(p={}, {:?})", self.p, self.vals)
    }
}

impl VecFp {
    pub fn new(p: u32, vals: Vec<u32>) -> Self {
        assert!(p >= 2 && p <= MAX_PRIME, "modulus out of range");
        let vals = vals.into_iter().map(|x| x % p).collect();
        VecFp { p, vals }
    }

    pub fn zero(p: u32, len: usize) -> Self {
        VecFp { p, vals: vec![0; len] }
    }

    pub fn unit(p: u32, len: usize, i: usize) -> Self {
        let mut v = Self::zero(p, len);
        v.vals[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &VecFp) -> VecFp {
        assert_eq!(self.p, other.p);
        assert_eq!(self.len(), other.len());
        VecFp {
            p: self.p,
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(&a, &b)| addm(a, b, self.p))
                .collect(),
        }
    }

    pub fn sub(&self, other: &VecFp) -> VecFp {
        assert_eq!(self.p, other.p);
        assert_eq!(self.len(), other.len());
        VecFp {
            p: self.p,
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(&a, &b)| subm(a, b, self.p))
                .collect(),
        }
    }

    pub fn neg(&self) -> VecFp {
        VecFp {
            p: self.p,
            vals: self.vals.iter().map(|&a| negm(a, self.p)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> VecFp {
        VecFp {
            p: self.p,
            vals: self.vals.iter().map(|&a| mulm(a, c, self.p)).collect(),
        }
    }

    /// Mixed-radix index of the vector: sum of vals[i] * p^i.
    pub fn index(&self) -> u64 {
        let mut acc = 0u64;
        for &x in self.vals.iter().rev() {
            acc = acc * self.p as u64 + x as u64;
        }
        acc
    }

    pub fn from_index(p: u32, len: usize, mut idx: u64) -> VecFp {
        let mut vals = vec![0u32; len];
        for v in vals.iter_mut() {
            *v = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        VecFp { p, vals }
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatFp {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for MatFp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatFp(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl MatFp {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        assert!(p >= 2 && p <= MAX_PRIME, "modulus out of range");
        MatFp { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = x % p;
            }
        }
        m
    }

    pub fn from_cols(p: u32, cols: &[VecFp]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zero(p, r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            assert_eq!(col.p, p);
            for i in 0..r {
                m.data[i * c + j] = col.vals[i];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> VecFp {
        VecFp { p: self.p, vals: self.data[i * self.cols..(i + 1) * self.cols].to_vec() }
    }

    pub fn col(&self, j: usize) -> VecFp {
        VecFp {
            p: self.p,
            vals: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn transpose(&self) -> MatFp {
        let mut t = MatFp::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn add(&self, other: &MatFp) -> MatFp {
        assert_eq!((self.p, self.rows, self.cols), (other.p, other.rows, other.cols));
        MatFp {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| addm(a, b, self.p))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> MatFp {
        MatFp {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| mulm(a, c, self.p)).collect(),
        }
    }

    pub fn mul(&self, other: &MatFp) -> MatFp {
        assert_eq!(self.p, other.p);
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let p64 = self.p as u64;
        let mut out = MatFp::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.data[i * other.cols + j] as u64;
                    out.data[i * other.cols + j] =
                        ((cur + a * other.get(k, j) as u64) % p64) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &VecFp) -> VecFp {
        assert_eq!(self.p, v.p);
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let p64 = self.p as u64;
        let mut out = vec![0u32; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc = (acc + self.get(i, j) as u64 * v.vals[j] as u64) % p64;
            }
            out[i] = acc as u32;
        }
        VecFp { p: self.p, vals: out }
    }

    pub fn pow(&self, mut e: u64) -> MatFp {
        assert_eq!(self.rows, self.cols);
        let mut acc = MatFp::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (MatFp, Vec<usize>) {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = invm(m.get(r, c), p);
            for j in 0..m.cols {
                m.set(r, j, mulm(m.get(r, j), inv, p));
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = subm(m.get(i, j), mulm(f, m.get(r, j), p), p);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inv(&self) -> Result<MatFp, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = MatFp::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinAlgError::Singular);
        }
        let mut out = MatFp::zero(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Basis of the right null space { v : A v = 0 }, in deterministic order
    /// (one vector per free column, ascending).
    pub fn kernel(&self) -> Vec<VecFp> {
        let (red, pivots) = self.rref();
        let piv_of_col: Vec<Option<usize>> = {
            let mut m = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                m[c] = Some(r);
            }
            m
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut v = VecFp::zero(self.p, self.cols);
            v.vals[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v.vals[c] = negm(red.get(r, free), self.p);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of A x = b, if any.
    pub fn solve(&self, b: &VecFp) -> Option<VecFp> {
        assert_eq!(self.rows, b.len(), "dimension mismatch");
        let mut aug = MatFp::zero(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b.vals[i]);
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = VecFp::zero(self.p, self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            x.vals[c] = red.get(r, self.cols);
        }
        Some(x)
    }

    /// Multiplicative order, or BoundExceeded if it is not found within
    /// `bound` multiplications.
    pub fn order(&self, bound: u64) -> Result<u64, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch("order of non-square matrix".into()));
        }
        let mut acc = self.clone();
        let mut k = 1u64;
        while !acc.is_identity() {
            if k >= bound {
                return Err(LinAlgError::BoundExceeded(bound));
            }
            acc = acc.mul(self);
            k += 1;
        }
        Ok(k)
    }
}

/// Companion matrix of a monic polynomial (low-degree-first coefficients,
/// leading coefficient 1).
pub fn companion(p: u32, poly: &[u32]) -> MatFp {
    let n = poly.len() - 1;
    assert!(n >= 1 && poly[n] == 1, "companion needs a monic polynomial");
    let mut m = MatFp::zero(p, n, n);
    for i in 1..n {
        m.set(i, i - 1, 1);
    }
    for i in 0..n {
        m.set(i, n - 1, negm(poly[i] % p, p));
    }
    m
}

// ---------------------------------------------------------------------------
// Polynomials over F_p: coefficient vectors, low degree first.
// ---------------------------------------------------------------------------

pub fn poly_trim(f: &mut Vec<u32>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

pub fn poly_deg(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn poly_is_zero(f: &[u32]) -> bool {
    poly_deg(f).is_none()
}

pub fn poly_add(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = addm(a, b, p);
    }
    poly_trim(&mut out);
    out
}

pub fn poly_sub(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = subm(a, b, p);
    }
    poly_trim(&mut out);
    out
}

pub fn poly_mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if poly_is_zero(f) || poly_is_zero(g) {
        return vec![0];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    let p64 = p as u64;
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u64 * b as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
    poly_trim(&mut out);
    out
}

/// Quotient and remainder of f by nonzero g.
pub fn poly_divmod(f: &[u32], g: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let dg = poly_deg(g).expect("division by zero polynomial");
    let lead_inv = invm(g[dg], p);
    let mut rem: Vec<u32> = f.to_vec();
    poly_trim(&mut rem);
    if poly_deg(&rem).map_or(true, |df| df < dg) {
        return (vec![0], rem);
    }
    let df = poly_deg(&rem).unwrap();
    let mut quo = vec![0u32; df - dg + 1];
    for k in (0..=df - dg).rev() {
        let c = mulm(rem[k + dg], lead_inv, p);
        quo[k] = c;
        if c != 0 {
            for (i, &gc) in g.iter().enumerate().take(dg + 1) {
                rem[k + i] = subm(rem[k + i], mulm(c, gc, p), p);
            }
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quo);
    (quo, rem)
}

pub fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    poly_divmod(f, g, p).1
}

/// Monic gcd.
pub fn poly_gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = poly_deg(&a) {
        let inv = invm(a[d], p);
        for c in a.iter_mut() {
            *c = mulm(*c, inv, p);
        }
    }
    a
}

pub fn poly_deriv(f: &[u32], p: u32) -> Vec<u32> {
    if f.len() <= 1 {
        return vec![0];
    }
    let mut out = vec![0u32; f.len() - 1];
    for i in 1..f.len() {
        out[i - 1] = mulm(f[i], (i as u64 % p as u64) as u32, p);
    }
    poly_trim(&mut out);
    out
}

/// True iff f has no repeated irreducible factor, i.e. gcd(f, f') is constant.
/// Correctly reports false when f' = 0 (f is a p-th power).
pub fn poly_is_squarefree(f: &[u32], p: u32) -> Result<bool, LinAlgError> {
    if poly_is_zero(f) {
        return Err(LinAlgError::ZeroPolynomial);
    }
    let d = poly_deriv(f, p);
    if poly_is_zero(&d) {
        return Ok(poly_deg(f) == Some(0));
    }
    let g = poly_gcd(f, &d, p);
    Ok(poly_deg(&g) == Some(0))
}

/// Complete factorization into monic irreducibles with multiplicities, by
/// trial division over monic polynomials in increasing (degree, base-p
/// encoding) order. A divisor found at the minimal remaining degree is
/// necessarily irreducible, so no separate irreducibility test is needed.
/// Deterministic; factors come out sorted by (degree, encoding). Only for
/// small coefficient fields: fails once a degree level needs more than 2^20
/// candidates.
pub fn poly_factor(f: &[u32], p: u32) -> Result<Vec<(Vec<u32>, usize)>, LinAlgError> {
    if poly_is_zero(f) {
        return Err(LinAlgError::ZeroPolynomial);
    }
    // Normalize to monic; the unit factor is dropped.
    let lead = *f.iter().rev().find(|&&c| c % p != 0).unwrap() % p;
    let li = invm(lead, p);
    let mut f: Vec<u32> = f.iter().map(|&c| mulm(c % p, li, p)).collect();
    poly_trim(&mut f);
    let mut out: Vec<(Vec<u32>, usize)> = Vec::new();
    let mut d: usize = 1;
    while poly_deg(&f) != Some(0) {
        let n = poly_deg(&f).unwrap();
        if 2 * d > n {
            out.push((f, 1));
            break;
        }
        let count = (p as u128).checked_pow(d as u32).filter(|&c| c <= 1 << 20);
        let Some(count) = count else {
            return Err(LinAlgError::BoundExceeded(1 << 20));
        };
        for k in 0..count as u64 {
            let mut g = vec![0u32; d + 1];
            g[d] = 1;
            let mut rem = k;
            for c in g.iter_mut().take(d) {
                *c = (rem % p as u64) as u32;
                rem /= p as u64;
            }
            let mut mult = 0usize;
            loop {
                let (q, r) = poly_divmod(&f, &g, p);
                if !poly_is_zero(&r) {
                    break;
                }
                f = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
            if poly_deg(&f) == Some(0) {
                break;
            }
        }
        d += 1;
    }
    Ok(out)
}

/// base^exp mod m, polynomial exponentiation.
pub fn poly_powmod(base: &[u32], mut exp: u128, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// f(A) by Horner's rule.
pub fn poly_eval_mat(f: &[u32], a: &MatFp) -> MatFp {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut acc = MatFp::zero(a.p, n, n);
    for &c in f.iter().rev() {
        acc = acc.mul(a);
        for i in 0..n {
            acc.set(i, i, addm(acc.get(i, i), c % a.p, a.p));
        }
    }
    acc
}

/// n-th cyclotomic polynomial reduced mod p, by the divisor-product recursion
/// Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d.
pub fn cyclotomic(n: u64, p: u32) -> Vec<u32> {
    assert!(n >= 1);
    let mut num = vec![0u32; n as usize + 1];
    num[0] = negm(1, p);
    num[n as usize] = 1;
    let mut den = vec![1u32];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul(&den, &cyclotomic(d, p), p);
        }
    }
    let (q, r) = poly_divmod(&num, &den, p);
    assert!(poly_is_zero(&r), "cyclotomic division must be exact");
    q
}

/// Characteristic polynomial det(xI - A), monic, low degree first.
/// Division-free (Berkowitz), so it is exact over any F_p.
pub fn charpoly(a: &MatFp) -> Vec<u32> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let p = a.p;
    if n == 0 {
        return vec![1];
    }
    // c holds coefficients of the charpoly of the leading r x r principal
    // submatrix, highest degree first.
    let mut c: Vec<u32> = vec![1];
    for r in 1..=n {
        // Toeplitz column t of length r+1.
        let mut t = vec![0u32; r + 1];
        t[0] = 1;
        t[1] = negm(a.get(r - 1, r - 1), p);
        if r >= 2 {
            // R = row r-1 restricted to 0..r-1, S = column r-1 restricted.
            let rrow: Vec<u32> = (0..r - 1).map(|j| a.get(r - 1, j)).collect();
            let mut s: Vec<u32> = (0..r - 1).map(|i| a.get(i, r - 1)).collect();
            for ti in t.iter_mut().skip(2) {
                let mut dot = 0u64;
                for (x, y) in rrow.iter().zip(&s) {
                    dot = (dot + *x as u64 * *y as u64) % p as u64;
                }
                *ti = negm(dot as u32, p);
                // s <- M s where M is the (r-1) principal submatrix.
                let mut ns = vec![0u32; r - 1];
                for (i, nsi) in ns.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for (k, sv) in s.iter().enumerate() {
                        acc = (acc + a.get(i, k) as u64 * *sv as u64) % p as u64;
                    }
                    *nsi = acc as u32;
                }
                s = ns;
            }
        }
        // c <- T * c, T lower-triangular Toeplitz (r+1) x r with column t.
        let mut nc = vec![0u32; r + 1];
        for (i, nci) in nc.iter_mut().enumerate() {
            let mut acc = 0u64;
            for j in 0..=i.min(r - 1).min(c.len() - 1) {
                if i - j <= r {
                    acc = (acc + t[i - j] as u64 * c[j] as u64) % p as u64;
                }
            }
            *nci = acc as u32;
        }
        c = nc;
    }
    c.reverse();
    c
}

// ---------------------------------------------------------------------------
// Subspaces: canonical reduced-echelon bases.
// ---------------------------------------------------------------------------

/// Subspace of F_p^n held as a reduced row echelon basis. Two subspaces are
/// equal iff their canonical bases are identical, so PartialEq is semantic.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    pub p: u32,
    pub ambient: usize,
    basis: Vec<VecFp>,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(p={}, dim {} of {}; ", self.p, self.dim(), self.ambient)?;
        for b in &self.basis {
            write!(f, "{:?} ", b.vals)?;
        }
        write!(f, ")")
    }
}

impl Subspace {
    pub fn from_gens(p: u32, ambient: usize, gens: &[VecFp]) -> Result<Self, LinAlgError> {
        for g in gens {
            if g.len() != ambient || g.p != p {
                return Err(LinAlgError::DimensionMismatch(format!(
                    "generator of length {} in ambient dimension {}",
                    g.len(),
                    ambient
                )));
            }
        }
        if gens.is_empty() {
            return Ok(Self::zero(p, ambient));
        }
        let m = MatFp::from_cols(p, gens).transpose();
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| red.row(i)).collect();
        Ok(Subspace { p, ambient, basis, pivots })
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace { p, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| VecFp::unit(p, ambient, i)).collect();
        Subspace { p, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[VecFp] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of v after eliminating all pivot coordinates. Zero iff v lies
    /// in the subspace; the map v -> reduce(v) is linear with kernel = self.
    pub fn reduce(&self, v: &VecFp) -> VecFp {
        assert_eq!(v.len(), self.ambient);
        assert_eq!(v.p, self.p);
        let mut r = v.clone();
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            let f = r.vals[c];
            if f != 0 {
                r = r.sub(&b.scale(f));
            }
        }
        r
    }

    pub fn contains(&self, v: &VecFp) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of v in the echelon basis, or None when v is outside.
    /// Because the basis is in reduced row echelon form, the coordinate of
    /// the i-th basis vector is just v's entry at the i-th pivot column.
    pub fn coords(&self, v: &VecFp) -> Option<VecFp> {
        if !self.contains(v) {
            return None;
        }
        Some(VecFp::new(self.p, self.pivots.iter().map(|&c| v.vals[c]).collect()))
    }

    /// Inverse of `coords`: the ambient vector with the given coordinates.
    pub fn from_coords(&self, coords: &VecFp) -> VecFp {
        assert_eq!(coords.len(), self.dim());
        let mut out = VecFp::zero(self.p, self.ambient);
        for (b, &c) in self.basis.iter().zip(&coords.vals) {
            out = out.add(&b.scale(c));
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(LinAlgError::DimensionMismatch("sum of incompatible subspaces".into()));
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::from_gens(self.p, self.ambient, &gens)
    }

    /// Intersection by the Zassenhaus block trick.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(LinAlgError::DimensionMismatch(
                "intersection of incompatible subspaces".into(),
            ));
        }
        let n = self.ambient;
        let rows = self.dim() + other.dim();
        if rows == 0 {
            return Ok(Self::zero(self.p, n));
        }
        let mut m = MatFp::zero(self.p, rows, 2 * n);
        for (i, b) in self.basis.iter().enumerate() {
            for j in 0..n {
                m.set(i, j, b.vals[j]);
                m.set(i, n + j, b.vals[j]);
            }
        }
        for (i, b) in other.basis.iter().enumerate() {
            for j in 0..n {
                m.set(self.dim() + i, j, b.vals[j]);
            }
        }
        let (red, pivots) = m.rref();
        // Rows whose left block is zero carry an intersection basis in the
        // right block.
        let left_rank = pivots.iter().filter(|&&c| c < n).count();
        let mut gens = Vec::new();
        for r in left_rank..pivots.len() {
            let v = VecFp {
                p: self.p,
                vals: (0..n).map(|j| red.get(r, n + j)).collect(),
            };
            gens.push(v);
        }
        Self::from_gens(self.p, n, &gens)
    }

    /// Greedy complement spanned by standard basis vectors: the first e_i
    /// that are independent from self. Deterministic.
    pub fn complement(&self) -> Subspace {
        let mut acc = self.clone();
        let mut gens = Vec::new();
        for i in 0..self.ambient {
            let e = VecFp::unit(self.p, self.ambient, i);
            if !acc.contains(&e) {
                gens.push(e.clone());
                let mut all = acc.basis.clone();
                all.push(e);
                acc = Subspace::from_gens(self.p, self.ambient, &all).unwrap();
            }
        }
        Subspace::from_gens(self.p, self.ambient, &gens).unwrap()
    }

    /// Image of the subspace under the linear map g (columns of g are the
    /// images of standard basis vectors).
    pub fn transformed(&self, g: &MatFp) -> Result<Subspace, LinAlgError> {
        if g.cols != self.ambient || g.p != self.p {
            return Err(LinAlgError::DimensionMismatch("map/subspace mismatch".into()));
        }
        let gens: Vec<VecFp> = self.basis.iter().map(|b| g.mul_vec(b)).collect();
        Self::from_gens(self.p, g.rows, &gens)
    }
}

/// Quotient space F_p^n / U with an explicit linear section: quotient
/// coordinates are the non-pivot coordinates of U's echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    sub: Subspace,
    free_cols: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(sub: Subspace) -> Self {
        let free_cols = (0..sub.ambient).filter(|c| !sub.pivots.contains(c)).collect();
        QuotientSpace { sub, free_cols }
    }

    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    /// Linear projection with kernel exactly U.
    pub fn project(&self, v: &VecFp) -> VecFp {
        let r = self.sub.reduce(v);
        VecFp {
            p: r.p,
            vals: self.free_cols.iter().map(|&c| r.vals[c]).collect(),
        }
    }

    /// Linear section: project(lift(w)) = w for all coordinate vectors w.
    pub fn lift(&self, w: &VecFp) -> VecFp {
        assert_eq!(w.len(), self.dim());
        let mut v = VecFp::zero(self.sub.p, self.sub.ambient);
        for (i, &c) in self.free_cols.iter().enumerate() {
            v.vals[c] = w.vals[i];
        }
        v
    }

    /// Matrix of the induced map on quotient coordinates, provided g maps U
    /// into U; None otherwise.
    pub fn induced_map(&self, g: &MatFp) -> Option<MatFp> {
        for b in self.sub.basis() {
            if !self.sub.contains(&g.mul_vec(b)) {
                return None;
            }
        }
        let cols: Vec<VecFp> = (0..self.dim())
            .map(|j| {
                let e = VecFp::unit(self.sub.p, self.dim(), j);
                self.project(&g.mul_vec(&self.lift(&e)))
            })
            .collect();
        Some(MatFp::from_cols(self.sub.p, &cols))
    }
}

// ---------------------------------------------------------------------------
// Canonical enumeration of k-dimensional subspaces.
// ---------------------------------------------------------------------------

/// Gaussian binomial [n choose k]_p.
pub fn gaussian_binomial(n: usize, k: usize, p: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    let pu = p as u128;
    for i in 0..k {
        num *= pu.pow((n - i) as u32) - 1;
        den *= pu.pow((i + 1) as u32) - 1;
    }
    num / den
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Deterministic enumeration of all k-dimensional subspaces of F_p^n in
/// canonical order: pivot column sets lexicographically, then free entries in
/// row-major counting order. Restartable from any index.
pub struct SubspaceIter {
    p: u32,
    n: usize,
    pivot_sets: Vec<Vec<usize>>,
    /// Free positions (row-major) and block size per pivot set.
    blocks: Vec<(Vec<(usize, usize)>, u128)>,
    idx: u128,
    count: u128,
}

impl SubspaceIter {
    pub fn new(p: u32, n: usize, k: usize) -> Self {
        let pivot_sets = combinations(n, k);
        let mut blocks = Vec::with_capacity(pivot_sets.len());
        for ps in &pivot_sets {
            let mut frees = Vec::new();
            for (i, &ci) in ps.iter().enumerate() {
                for j in ci + 1..n {
                    if !ps.contains(&j) {
                        frees.push((i, j));
                    }
                }
            }
            let size = (p as u128).pow(frees.len() as u32);
            blocks.push((frees, size));
        }
        let count = blocks.iter().map(|(_, s)| s).sum::<u128>().max(u128::from(k == 0));
        SubspaceIter { p, n, pivot_sets, blocks, idx: 0, count }
    }

    pub fn total(&self) -> u128 {
        self.count
    }

    pub fn seek(&mut self, idx: u128) {
        self.idx = idx;
    }

    /// Subspace at a given enumeration index.
    pub fn at(&self, mut idx: u128) -> Option<Subspace> {
        if idx >= self.count {
            return None;
        }
        if self.pivot_sets.is_empty() {
            // k = 0: the single zero subspace.
            return Some(Subspace::zero(self.p, self.n));
        }
        for (ps, (frees, size)) in self.pivot_sets.iter().zip(&self.blocks) {
            if idx >= *size {
                idx -= size;
                continue;
            }
            let k = ps.len();
            let mut rows = vec![vec![0u32; self.n]; k];
            for (i, &c) in ps.iter().enumerate() {
                rows[i][c] = 1;
            }
            // First free position is the most significant digit.
            let mut rem = idx;
            for t in (0..frees.len()).rev() {
                let digit = (rem % self.p as u128) as u32;
                rem /= self.p as u128;
                let (i, j) = frees[t];
                rows[i][j] = digit;
            }
            let gens: Vec<VecFp> = rows.into_iter().map(|r| VecFp::new(self.p, r)).collect();
            let s = Subspace::from_gens(self.p, self.n, &gens).unwrap();
            debug_assert_eq!(s.dim(), k);
            return Some(s);
        }
        None
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let s = self.at(self.idx)?;
        self.idx += 1;
        Some(s)
    }
}

pub fn enumerate_subspaces(p: u32, n: usize, k: usize) -> SubspaceIter {
    SubspaceIter::new(p, n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rng() -> StdRng {
        StdRng::seed_from_u64(0x5eed_1234)
    }

    fn random_mat(r: &mut StdRng, p: u32, rows: usize, cols: usize) -> MatFp {
        let data: Vec<Vec<u32>> =
            (0..rows).map(|_| (0..cols).map(|_| r.gen_range(0..p)).collect()).collect();
        MatFp::from_rows(p, &data)
    }

    #[test]
    fn modular_scalar_ops() {
        assert_eq!(addm(2, 2, 3), 1);
        assert_eq!(subm(0, 1, 5), 4);
        assert_eq!(mulm(4, 4, 5), 1);
        assert_eq!(invm(2, 5), 3);
        assert_eq!(powm(3, 4, 80_021), 81);
        assert!(is_prime_u32(65521));
        assert!(!is_prime_u32(65535));
    }

    #[test]
    fn vec_index_round_trip() {
        for idx in 0..81u64 {
            let v = VecFp::from_index(3, 4, idx);
            assert_eq!(v.index(), idx);
        }
    }

    #[test]
    fn companion_of_pinned_quartic_has_order_80() {
        // x^4 - x^3 - 1 over F_3, i.e. coefficients [2, 0, 0, 2, 1].
        let f = vec![2u32, 0, 0, 2, 1];
        let c = companion(3, &f);
        assert_eq!(c.order(100).unwrap(), 80);
        // charpoly of the companion matrix recovers the polynomial.
        assert_eq!(charpoly(&c), f);
    }

    #[test]
    fn charpoly_small_cases() {
        let a = MatFp::from_rows(5, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(charpoly(&a), vec![0, 0, 1]); // x^2
        let i = MatFp::identity(3, 2);
        assert_eq!(charpoly(&i), vec![1, 1, 1]); // (x-1)^2 = x^2 - 2x + 1 = x^2+x+1 mod 3
        assert!(!poly_is_squarefree(&charpoly(&i), 3).unwrap());
        let j = MatFp::from_rows(2, &[vec![0, 0], vec![0, 1]]);
        assert_eq!(charpoly(&j), vec![0, 1, 1]); // x^2 + x over F_2
        assert!(poly_is_squarefree(&charpoly(&j), 2).unwrap());
    }

    #[test]
    fn charpoly_matches_trace_and_det_random() {
        let mut r = rng();
        for _ in 0..50 {
            let p = *[2u32, 3, 5].iter().nth(r.gen_range(0..3)).unwrap();
            let n = r.gen_range(1..6);
            let a = random_mat(&mut r, p, n, n);
            let cp = charpoly(&a);
            assert_eq!(cp.len(), n + 1);
            assert_eq!(cp[n], 1, "monic");
            // Cayley-Hamilton: cp(A) = 0.
            let eval = poly_eval_mat(&cp, &a);
            assert_eq!(eval, MatFp::zero(p, n, n));
        }
    }

    #[test]
    fn inverse_and_solve_random() {
        let mut r = rng();
        let mut done = 0;
        while done < 40 {
            let p = *[2u32, 3, 5].iter().nth(r.gen_range(0..3)).unwrap();
            let n = r.gen_range(1..7);
            let a = random_mat(&mut r, p, n, n);
            if let Ok(inv) = a.inv() {
                assert!(a.mul(&inv).is_identity());
                let x = VecFp::new(p, (0..n).map(|_| r.gen_range(0..p)).collect());
                let b = a.mul_vec(&x);
                let sol = a.solve(&b).expect("consistent system");
                assert_eq!(a.mul_vec(&sol), b);
                done += 1;
            } else {
                assert_eq!(a.rank(), a.rref().1.len());
                assert!(a.rank() < n);
            }
        }
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let mut r = rng();
        for _ in 0..40 {
            let p = *[2u32, 3].iter().nth(r.gen_range(0..2)).unwrap();
            let rows = r.gen_range(1..5);
            let cols = r.gen_range(1..6);
            let a = random_mat(&mut r, p, rows, cols);
            let ker = a.kernel();
            assert_eq!(ker.len(), cols - a.rank());
            for v in &ker {
                assert!(a.mul_vec(v).is_zero());
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = MatFp::from_rows(3, &[vec![1, 2], vec![0, 1]]);
        assert!(a.inv().is_ok());
        let b = MatFp::from_rows(3, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(b.inv().unwrap_err(), LinAlgError::Singular);
    }

    #[test]
    fn poly_gcd_and_squarefree() {
        // (x+1)^2 over F_2 = x^2 + 1.
        assert!(!poly_is_squarefree(&[1, 0, 1], 2).unwrap());
        assert!(poly_is_squarefree(&[0, 1, 1], 2).unwrap());
        // gcd((x-1)(x-2), (x-1)) = x - 1 over F_5.
        let f = poly_mul(&[4, 1], &[3, 1], 5);
        let g = poly_gcd(&f, &[4, 1], 5);
        assert_eq!(g, vec![4, 1]);
        // x^3 over F_3 is a cube of x.
        assert!(!poly_is_squarefree(&[0, 0, 0, 1], 3).unwrap());
    }

    #[test]
    fn cyclotomic_basics() {
        assert_eq!(cyclotomic(1, 5), vec![4, 1]);
        assert_eq!(cyclotomic(2, 5), vec![1, 1]);
        assert_eq!(cyclotomic(4, 5), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6, 7), vec![1, 6, 1]);
        // Product over divisors of 12 rebuilds x^12 - 1 over F_5.
        let mut prod = vec![1u32];
        for d in [1u64, 2, 3, 4, 6, 12] {
            prod = poly_mul(&prod, &cyclotomic(d, 5), 5);
        }
        let mut expect = vec![0u32; 13];
        expect[0] = 4;
        expect[12] = 1;
        assert_eq!(prod, expect);
        // Degree of Phi_124 is phi(124) = 60.
        assert_eq!(poly_deg(&cyclotomic(124, 5)), Some(60));
    }

    #[test]
    fn factorization_rebuilds_input() {
        // (x^2 + 1)(x + 1)^2 over F_3; x^2 + 1 is irreducible mod 3.
        let f = poly_mul(&poly_mul(&[1, 0, 1], &[1, 1], 3), &[1, 1], 3);
        let fac = poly_factor(&f, 3).unwrap();
        assert_eq!(fac, vec![(vec![1, 1], 2), (vec![1, 0, 1], 1)]);
        let mut prod = vec![1u32];
        for (g, m) in &fac {
            for _ in 0..*m {
                prod = poly_mul(&prod, g, 3);
            }
        }
        assert_eq!(prod, f);
        // An irreducible quartic factors as itself.
        assert_eq!(poly_factor(&[2, 0, 0, 2, 1], 3).unwrap(), vec![(vec![2, 0, 0, 2, 1], 1)]);
        // x^6 - 1 over F_5: two linear and two quadratic cyclotomic factors.
        let mut f6 = vec![0u32; 7];
        f6[0] = 4;
        f6[6] = 1;
        let fac6 = poly_factor(&f6, 5).unwrap();
        let degs: Vec<usize> = fac6.iter().map(|(g, _)| poly_deg(g).unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2]);
        assert!(fac6.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn factorization_of_large_cyclotomic() {
        // 5 has order 3 mod 124, so Phi_124 mod 5 splits into 20 distinct
        // irreducible cubics.
        let f = cyclotomic(124, 5);
        let fac = poly_factor(&f, 5).unwrap();
        assert_eq!(fac.len(), 20);
        assert!(fac.iter().all(|(g, m)| poly_deg(g) == Some(3) && *m == 1));
    }

    #[test]
    fn rref_is_idempotent_and_span_preserving() {
        let mut r = rng();
        for _ in 0..60 {
            let p = *[2u32, 3, 5].iter().nth(r.gen_range(0..3)).unwrap();
            let rows = r.gen_range(1..5);
            let cols = r.gen_range(1..6);
            let a = random_mat(&mut r, p, rows, cols);
            let (red, pivots) = a.rref();
            let (red2, pivots2) = red.rref();
            assert_eq!(red, red2);
            assert_eq!(pivots, pivots2);
            // Every original row lies in the row space of the reduction.
            let rows_v: Vec<VecFp> = (0..pivots.len()).map(|i| red.row(i)).collect();
            let sp = Subspace::from_gens(p, cols, &rows_v).unwrap();
            for i in 0..rows {
                assert!(sp.contains(&a.row(i)));
            }
        }
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(gaussian_binomial(4, 3, 3), 40);
        assert_eq!(gaussian_binomial(4, 1, 3), 40);
        assert_eq!(gaussian_binomial(5, 2, 2), 155);
        for n in 0..=5usize {
            for p in [2u32, 3] {
                for k in 0..=n {
                    let it = enumerate_subspaces(p, n, k);
                    let declared = it.total();
                    let listed = it.collect::<Vec<_>>();
                    assert_eq!(listed.len() as u128, declared);
                    assert_eq!(declared, gaussian_binomial(n, k, p));
                    for s in &listed {
                        assert_eq!(s.dim(), k);
                    }
                    // Pairwise distinct canonical forms.
                    let mut set = std::collections::HashSet::new();
                    for s in &listed {
                        assert!(set.insert(s.clone()), "duplicate subspace in enumeration");
                    }
                }
            }
        }
    }

    /// Brute-force oracle: grow the set of all k-dimensional subspaces by
    /// extending every (k-1)-dimensional one with every vector, deduplicating
    /// canonical forms. Independent of the combinatorial enumeration.
    #[test]
    fn enumeration_agrees_with_bruteforce_closure() {
        for (p, n) in [(2u32, 5usize), (3, 4)] {
            let total = (p as u64).pow(n as u32);
            let mut layers: Vec<std::collections::HashSet<Subspace>> = vec![{
                let mut s = std::collections::HashSet::new();
                s.insert(Subspace::zero(p, n));
                s
            }];
            for k in 1..=n {
                let mut next = std::collections::HashSet::new();
                for base in &layers[k - 1] {
                    for idx in 1..total {
                        let v = VecFp::from_index(p, n, idx);
                        if base.contains(&v) {
                            continue;
                        }
                        let mut gens = base.basis().to_vec();
                        gens.push(v);
                        next.insert(Subspace::from_gens(p, n, &gens).unwrap());
                    }
                }
                layers.push(next);
            }
            for k in 0..=n {
                let enumerated: std::collections::HashSet<Subspace> =
                    enumerate_subspaces(p, n, k).collect();
                assert_eq!(enumerated, layers[k], "p={p} n={n} k={k}");
            }
        }
    }

    #[test]
    fn quotient_section_properties() {
        // Exhaustive over a fixed U < F_3^4 and all vectors.
        let u = Subspace::from_gens(
            3,
            4,
            &[VecFp::new(3, vec![1, 0, 1, 0]), VecFp::new(3, vec![0, 2, 1, 2])],
        )
        .unwrap();
        let q = QuotientSpace::new(u.clone());
        assert_eq!(q.dim(), 2);
        let mut images = std::collections::HashSet::new();
        for idx in 0..81u64 {
            let v = VecFp::from_index(3, 4, idx);
            let w = q.project(&v);
            images.insert(w.clone());
            // v - lift(project v) lies in U.
            assert!(u.contains(&v.sub(&q.lift(&w))));
            // Kernel is exactly U.
            assert_eq!(w.is_zero(), u.contains(&v));
        }
        assert_eq!(images.len(), 9);
        // project . lift = id.
        for idx in 0..9u64 {
            let w = VecFp::from_index(3, 2, idx);
            assert_eq!(q.project(&q.lift(&w)), w);
        }
        // Linearity of project on random pairs.
        let mut r = rng();
        for _ in 0..50 {
            let a = VecFp::from_index(3, 4, r.gen_range(0..81));
            let b = VecFp::from_index(3, 4, r.gen_range(0..81));
            assert_eq!(q.project(&a.add(&b)), q.project(&a).add(&q.project(&b)));
        }
    }

    #[test]
    fn complement_direct_sum_for_all_subspaces_of_f3_4() {
        for k in 0..=4usize {
            for s in enumerate_subspaces(3, 4, k) {
                let c = s.complement();
                assert_eq!(s.dim() + c.dim(), 4);
                assert_eq!(s.intersect(&c).unwrap().dim(), 0);
                assert_eq!(s.sum(&c).unwrap().dim(), 4);
            }
        }
    }

    #[test]
    fn subspace_coords_round_trip() {
        let mut r = rng();
        for _ in 0..40 {
            let p = *[2u32, 3, 5].iter().nth(r.gen_range(0..3)).unwrap();
            let n = r.gen_range(1..6);
            let total = (p as u64).pow(n as u32);
            let gens: Vec<VecFp> =
                (0..r.gen_range(1..4)).map(|_| VecFp::from_index(p, n, r.gen_range(0..total))).collect();
            let s = Subspace::from_gens(p, n, &gens).unwrap();
            // Every combination of basis vectors round-trips through coords.
            for idx in 0..(p as u64).pow(s.dim() as u32) {
                let c = VecFp::from_index(p, s.dim(), idx);
                let v = s.from_coords(&c);
                assert_eq!(s.coords(&v), Some(c));
            }
            // Vectors outside the span report None.
            if s.dim() < n {
                let mut outside = s.complement().basis()[0].clone();
                outside = outside.add(&s.from_coords(&VecFp::zero(p, s.dim())));
                assert_eq!(s.coords(&outside), None);
            }
        }
    }

    #[test]
    fn sum_intersect_dimension_formula_random() {
        let mut r = rng();
        for _ in 0..60 {
            let p = *[2u32, 3].iter().nth(r.gen_range(0..2)).unwrap();
            let n = r.gen_range(1..6);
            let total = (p as u64).pow(n as u32);
            let gens_a: Vec<VecFp> =
                (0..r.gen_range(0..4)).map(|_| VecFp::from_index(p, n, r.gen_range(0..total))).collect();
            let gens_b: Vec<VecFp> =
                (0..r.gen_range(0..4)).map(|_| VecFp::from_index(p, n, r.gen_range(0..total))).collect();
            let a = Subspace::from_gens(p, n, &gens_a).unwrap();
            let b = Subspace::from_gens(p, n, &gens_b).unwrap();
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
            assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
            for v in i.basis() {
                assert!(a.contains(v) && b.contains(v));
            }
        }
    }

    #[test]
    fn subspace_equality_ignores_generator_presentation() {
        let a = Subspace::from_gens(3, 3, &[VecFp::new(3, vec![1, 1, 0]), VecFp::new(3, vec![0, 1, 1])])
            .unwrap();
        let b = Subspace::from_gens(
            3,
            3,
            &[
                VecFp::new(3, vec![1, 2, 1]),
                VecFp::new(3, vec![2, 2, 0]),
                VecFp::new(3, vec![1, 0, 2]),
            ],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn induced_quotient_map_requires_invariance() {
        let u = Subspace::from_gens(3, 2, &[VecFp::new(3, vec![1, 0])]).unwrap();
        let q = QuotientSpace::new(u);
        let keeps = MatFp::from_rows(3, &[vec![1, 1], vec![0, 2]]);
        let breaks = MatFp::from_rows(3, &[vec![1, 0], vec![1, 1]]);
        let ind = q.induced_map(&keeps).expect("invariant map induces");
        assert_eq!(ind.rows, 1);
        assert_eq!(ind.get(0, 0), 2);
        assert!(q.induced_map(&breaks).is_none());
    }

    #[test]
    fn matrix_order_bound() {
        let a = MatFp::identity(3, 2);
        assert_eq!(a.order(10).unwrap(), 1);
        let c = companion(3, &[2, 0, 0, 2, 1]);
        assert_eq!(c.order(79).unwrap_err(), LinAlgError::BoundExceeded(79));
    }
}
