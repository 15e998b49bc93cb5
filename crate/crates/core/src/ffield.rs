//! Finite fields F_{p^n} as explicit quotient rings F_p[x]/(f).
//!
//! Elements are coefficient vectors in the power basis 1, x, ..., x^(n-1)
//! (reusing VecFp), so every field doubles as the F_p-vector space F_p^n and
//! field maps (multiplication by a fixed element, Frobenius, trace) have
//! honest matrices. Contexts are immutable after construction and every
//! choice made during construction is deterministic.

use crate::fplinalg::{
    self, invm, is_prime_u32, mulm, poly_deg, poly_gcd, poly_is_zero, poly_mul, poly_powmod,
    poly_rem, poly_sub, poly_trim, MatFp, VecFp, MAX_PRIME,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime in the supported range")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("modulus must be monic of degree n with {0} coefficients")]
    DegreeMismatch(usize),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("no primitive element found")]
    NoPrimitiveElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field context")]
    FieldMismatch,
    #[error("{d} does not divide the extension degree {n}")]
    NotADivisor { d: usize, n: usize },
    #[error("operation requires field order at most {0}")]
    FieldTooLarge(u64),
}

pub type FieldElem = VecFp;

/// Serializable description of a field context; rebuilding from it is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
}

/// Verified primitivity of lambda is only attempted when p^n is below this
/// bound; larger fields are used through their F_p-linear structure only.
const PRIMITIVITY_BOUND: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    pub p: u32,
    pub n: usize,
    /// Monic, irreducible, low degree first, length n+1.
    pub modulus: Vec<u32>,
    lambda: FieldElem,
    lambda_verified: bool,
    frob: MatFp,
    /// p^n when it fits in u64.
    pn: Option<u64>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(p={}, n={}, modulus={:?})", self.p, self.n, self.modulus)
    }
}

fn pow_checked(p: u32, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p as u64)?;
    }
    Some(acc)
}

fn prime_factors_u64(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// x^(p^k) mod f by iterated p-th powering.
fn x_power_pk(k: usize, f: &[u32], p: u32) -> Vec<u32> {
    let mut t = poly_rem(&[0, 1], f, p);
    for _ in 0..k {
        t = poly_powmod(&t, p as u128, f, p);
    }
    t
}

/// Rabin irreducibility test for a monic polynomial of degree n >= 1.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = poly_deg(f).unwrap();
    if n == 0 {
        return false;
    }
    // x^(p^n) == x mod f.
    let xr = poly_rem(&[0, 1], f, p);
    let xpn = x_power_pk(n, f, p);
    if poly_sub(&xpn, &xr, p) != vec![0] {
        return false;
    }
    for r in prime_factors_u64(n as u64) {
        let k = n / r as usize;
        let xpk = x_power_pk(k, f, p);
        let diff = poly_sub(&xpk, &xr, p);
        let g = poly_gcd(&diff, f, p);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Build F_{p^n}. If no modulus is given, the search tries monic
    /// polynomials x^n + c_{n-1}x^{n-1} + ... + c_0 in increasing order of
    /// the base-p integer c_0 + c_1 p + ... and takes the first irreducible
    /// one, so the choice is reproducible.
    pub fn new(p: u32, n: usize, modulus: Option<&[u32]>) -> Result<FieldCtx, FieldError> {
        if p > MAX_PRIME || !is_prime_u32(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::BadDegree);
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n + 1 {
                    return Err(FieldError::DegreeMismatch(n + 1));
                }
                let m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                if m[n] != 1 {
                    return Err(FieldError::DegreeMismatch(n + 1));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                m
            }
            None => {
                let mut found = None;
                let mut k: u64 = 0;
                loop {
                    let mut f = vec![0u32; n + 1];
                    f[n] = 1;
                    let mut rem = k;
                    for c in f.iter_mut().take(n) {
                        *c = (rem % p as u64) as u32;
                        rem /= p as u64;
                    }
                    if rem > 0 {
                        break;
                    }
                    if is_irreducible(&f, p) {
                        found = Some(f);
                        break;
                    }
                    k += 1;
                }
                found.ok_or(FieldError::ReducibleModulus)?
            }
        };

        // p-power Frobenius matrix: column j = coordinates of x^(jp).
        let xp = x_power_pk(1, &modulus, p);
        let mut frob = MatFp::zero(p, n, n);
        let mut cur = poly_rem(&[1], &modulus, p);
        for j in 0..n {
            for (i, &c) in cur.iter().enumerate() {
                frob.set(i, j, c);
            }
            if j + 1 < n {
                cur = poly_rem(&poly_mul(&cur, &xp, p), &modulus, p);
            }
        }

        let pn = pow_checked(p, n);
        let mut ctx = FieldCtx {
            p,
            n,
            modulus,
            lambda: VecFp::zero(p, n),
            lambda_verified: false,
            frob,
            pn,
        };
        ctx.pick_lambda()?;
        Ok(ctx)
    }

    pub fn from_desc(d: &FieldDesc) -> Result<FieldCtx, FieldError> {
        FieldCtx::new(d.p, d.n, Some(&d.modulus))
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.p, n: self.n, modulus: self.modulus.clone() }
    }

    /// lambda is the modulus root when that is primitive, otherwise the
    /// element of smallest index that is. Above the verification bound the
    /// root is taken unverified and `lambda_verified` reports false.
    fn pick_lambda(&mut self) -> Result<(), FieldError> {
        let root = if self.n == 1 {
            // Root of x + c is -c.
            self.elem_from_vec(VecFp::new(self.p, vec![fplinalg::negm(self.modulus[0], self.p)]))?
        } else {
            VecFp::unit(self.p, self.n, 1)
        };
        let Some(pn) = self.pn.filter(|&v| v <= PRIMITIVITY_BOUND) else {
            self.lambda = root;
            self.lambda_verified = false;
            return Ok(());
        };
        let m = pn - 1;
        if m == 1 {
            self.lambda = self.one();
            self.lambda_verified = true;
            return Ok(());
        }
        let factors = prime_factors_u64(m);
        let primitive = |ctx: &FieldCtx, a: &FieldElem| -> bool {
            !a.is_zero()
                && factors.iter().all(|&r| !ctx.pow(a, (m / r) as u128).eq(&ctx.one()))
        };
        if primitive(self, &root) {
            self.lambda = root;
            self.lambda_verified = true;
            return Ok(());
        }
        for idx in 1..pn {
            let a = VecFp::from_index(self.p, self.n, idx);
            if primitive(self, &a) {
                self.lambda = a;
                self.lambda_verified = true;
                return Ok(());
            }
        }
        Err(FieldError::NoPrimitiveElement)
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.pn
    }

    pub fn zero(&self) -> FieldElem {
        VecFp::zero(self.p, self.n)
    }

    pub fn one(&self) -> FieldElem {
        VecFp::unit(self.p, self.n, 0)
    }

    pub fn lambda(&self) -> FieldElem {
        self.lambda.clone()
    }

    pub fn lambda_verified(&self) -> bool {
        self.lambda_verified
    }

    fn check(&self, a: &FieldElem) -> Result<(), FieldError> {
        if a.p != self.p || a.len() != self.n {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.sub(b)
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        a.neg()
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let prod = poly_rem(&poly_mul(&a.vals, &b.vals, self.p), &self.modulus, self.p);
        self.pad(prod)
    }

    fn pad(&self, mut coeffs: Vec<u32>) -> FieldElem {
        coeffs.resize(self.n, 0);
        VecFp { p: self.p, vals: coeffs }
    }

    /// Inverse by the extended Euclidean algorithm, so it works at any field
    /// size.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p;
        // Invariant: r0 = s0 * a (mod modulus), r1 = s1 * a (mod modulus).
        let mut r0: Vec<u32> = self.modulus.clone();
        let mut r1: Vec<u32> = a.vals.clone();
        poly_trim(&mut r1);
        let mut s0: Vec<u32> = vec![0];
        let mut s1: Vec<u32> = vec![1];
        while !poly_is_zero(&r1) {
            let (q, r) = fplinalg::poly_divmod(&r0, &r1, p);
            let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let d = poly_deg(&r0).expect("gcd of nonzero inputs");
        assert_eq!(d, 0, "modulus is irreducible so the gcd is constant");
        let c = invm(r0[0], p);
        let inv: Vec<u32> = s0.iter().map(|&x| mulm(x, c, p)).collect();
        Ok(self.pad(poly_rem(&inv, &self.modulus, p)))
    }

    pub fn pow(&self, a: &FieldElem, e: u128) -> FieldElem {
        self.pad(poly_powmod(&a.vals, e, &self.modulus, self.p))
    }

    /// a^(p^i); exact linear map given by the precomputed Frobenius matrix.
    pub fn frobenius(&self, a: &FieldElem, i: usize) -> FieldElem {
        let mut v = a.clone();
        for _ in 0..(i % self.n) {
            v = self.frob.mul_vec(&v);
        }
        v
    }

    pub fn frobenius_matrix(&self) -> &MatFp {
        &self.frob
    }

    /// Relative trace onto F_{p^d}: sum of a^(p^(dk)) for k = 0..n/d.
    pub fn trace(&self, a: &FieldElem, d: usize) -> Result<FieldElem, FieldError> {
        self.check(a)?;
        if d == 0 || self.n % d != 0 {
            return Err(FieldError::NotADivisor { d, n: self.n });
        }
        let mut acc = a.clone();
        let mut t = a.clone();
        for _ in 1..(self.n / d) {
            t = self.frobenius(&t, d);
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Matrix of the relative trace map onto F_{p^d}.
    pub fn trace_matrix(&self, d: usize) -> Result<MatFp, FieldError> {
        if d == 0 || self.n % d != 0 {
            return Err(FieldError::NotADivisor { d, n: self.n });
        }
        let fd = self.frob.pow(d as u64);
        let mut acc = MatFp::identity(self.p, self.n);
        let mut term = MatFp::identity(self.p, self.n);
        for _ in 1..(self.n / d) {
            term = fd.mul(&term);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Matrix of multiplication by a in the power basis.
    pub fn mult_matrix(&self, a: &FieldElem) -> MatFp {
        let p = self.p;
        let mut m = MatFp::zero(p, self.n, self.n);
        let mut cur = a.vals.clone();
        poly_trim(&mut cur);
        for j in 0..self.n {
            for (i, &c) in cur.iter().enumerate() {
                m.set(i, j, c);
            }
            if j + 1 < self.n {
                cur = poly_rem(&poly_mul(&cur, &[0, 1], p), &self.modulus, p);
            }
        }
        m
    }

    /// Echelon basis of the subfield F_{p^d} = fixed space of Frobenius^d.
    pub fn subfield_basis(&self, d: usize) -> Result<Vec<FieldElem>, FieldError> {
        if d == 0 || self.n % d != 0 {
            return Err(FieldError::NotADivisor { d, n: self.n });
        }
        let fd = self.frob.pow(d as u64);
        let diff = fd.add(&MatFp::identity(self.p, self.n).scale(self.p - 1));
        let ker = diff.kernel();
        assert_eq!(ker.len(), d, "fixed field of Frobenius^d has degree d");
        Ok(ker)
    }

    /// True iff a lies in the subfield F_{p^d}.
    pub fn in_subfield(&self, a: &FieldElem, d: usize) -> Result<bool, FieldError> {
        self.check(a)?;
        if d == 0 || self.n % d != 0 {
            return Err(FieldError::NotADivisor { d, n: self.n });
        }
        Ok(self.frobenius(a, d) == *a)
    }

    pub fn elem_from_vec(&self, v: VecFp) -> Result<FieldElem, FieldError> {
        self.check(&v)?;
        Ok(v)
    }

    pub fn as_vec(&self, a: &FieldElem) -> VecFp {
        a.clone()
    }

    pub fn elem_from_index(&self, idx: u64) -> FieldElem {
        VecFp::from_index(self.p, self.n, idx)
    }

    /// Multiplicative order of a nonzero element; requires a field small
    /// enough that p^n - 1 can be factored by trial division.
    pub fn elem_order(&self, a: &FieldElem) -> Result<u64, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let pn = self
            .pn
            .filter(|&v| v <= (1 << 32))
            .ok_or(FieldError::FieldTooLarge(1 << 32))?;
        let mut ord = pn - 1;
        for r in prime_factors_u64(pn - 1) {
            while ord % r == 0 && self.pow(a, (ord / r) as u128) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f81() -> FieldCtx {
        // x^4 - x^3 - 1 over F_3.
        FieldCtx::new(3, 4, Some(&[2, 0, 0, 2, 1])).unwrap()
    }

    #[test]
    fn construction_validates_inputs() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 0, None).unwrap_err(), FieldError::BadDegree);
        // x^2 + 1 is reducible over F_2.
        assert_eq!(
            FieldCtx::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus
        );
        // x^4 - 1 is reducible over F_3.
        assert_eq!(
            FieldCtx::new(3, 4, Some(&[2, 0, 0, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus
        );
        // Non-monic or wrong length moduli are rejected.
        assert_eq!(
            FieldCtx::new(3, 2, Some(&[1, 1])).unwrap_err(),
            FieldError::DegreeMismatch(3)
        );
        assert_eq!(
            FieldCtx::new(3, 2, Some(&[1, 1, 2])).unwrap_err(),
            FieldError::DegreeMismatch(3)
        );
    }

    #[test]
    fn deterministic_modulus_search() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus, vec![1, 1, 1]); // x^2 + x + 1
        let f8 = FieldCtx::new(2, 3, None).unwrap();
        assert_eq!(f8.modulus, vec![1, 1, 0, 1]); // x^3 + x + 1
        let a = FieldCtx::new(3, 4, None).unwrap();
        let b = FieldCtx::new(3, 4, None).unwrap();
        assert_eq!(a.modulus, b.modulus);
        assert!(a.lambda_verified());
    }

    #[test]
    fn prime_field_lambda_is_smallest_primitive_root() {
        assert_eq!(FieldCtx::new(2, 1, None).unwrap().lambda().vals, vec![1]);
        assert_eq!(FieldCtx::new(3, 1, None).unwrap().lambda().vals, vec![2]);
        assert_eq!(FieldCtx::new(5, 1, None).unwrap().lambda().vals, vec![2]);
        assert_eq!(FieldCtx::new(7, 1, None).unwrap().lambda().vals, vec![3]);
    }

    #[test]
    fn pinned_quartic_root_is_primitive_of_order_80() {
        let f = f81();
        let l = f.lambda();
        assert_eq!(l.vals, vec![0, 1, 0, 0]);
        assert!(f.lambda_verified());
        assert_eq!(f.elem_order(&l).unwrap(), 80);
        // lambda^4 = lambda^3 + 1.
        assert_eq!(f.pow(&l, 4).vals, vec![1, 0, 0, 1]);
        assert_eq!(f.pow(&l, 5).vals, vec![1, 1, 0, 1]);
        assert_eq!(f.pow(&l, 6).vals, vec![1, 1, 1, 1]);
        assert_eq!(f.pow(&l, 40).vals, vec![2, 0, 0, 0]);
        assert_eq!(f.pow(&l, 80), f.one());
    }

    #[test]
    fn field_axioms_sampled() {
        let f = f81();
        let mut r = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let a = f.elem_from_index(r.gen_range(0..81));
            let b = f.elem_from_index(r.gen_range(0..81));
            let c = f.elem_from_index(r.gen_range(0..81));
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.mul(&a, &b.add(&c)), f.mul(&a, &b).add(&f.mul(&a, &c)));
            assert_eq!(f.mul(&a, &f.one()), a);
        }
    }

    #[test]
    fn every_nonzero_element_inverts() {
        let f = f81();
        assert_eq!(f.inv(&f.zero()).unwrap_err(), FieldError::DivisionByZero);
        for idx in 1..81 {
            let a = f.elem_from_index(idx);
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), f.one());
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism() {
        let f = f81();
        let mut r = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let a = f.elem_from_index(r.gen_range(0..81));
            let b = f.elem_from_index(r.gen_range(0..81));
            assert_eq!(f.frobenius(&a.add(&b), 1), f.frobenius(&a, 1).add(&f.frobenius(&b, 1)));
            assert_eq!(
                f.frobenius(&f.mul(&a, &b), 1),
                f.mul(&f.frobenius(&a, 1), &f.frobenius(&b, 1))
            );
            assert_eq!(f.frobenius(&a, 1), f.pow(&a, 3));
            assert_eq!(f.frobenius(&a, 4), a, "Frobenius^n is the identity");
        }
        assert_eq!(f.frobenius(&f.lambda(), 1), f.pow(&f.lambda(), 3));
    }

    #[test]
    fn trace_counts_and_ranges() {
        let f = f81();
        // Absolute trace maps onto F_3 with kernel of size 27.
        let mut zeros = 0;
        for idx in 0..81 {
            let a = f.elem_from_index(idx);
            let t = f.trace(&a, 1).unwrap();
            assert!(t.vals[1] == 0 && t.vals[2] == 0 && t.vals[3] == 0, "trace lands in F_3");
            if t.is_zero() {
                zeros += 1;
            }
        }
        assert_eq!(zeros, 27);
        // Relative trace onto F_9 has kernel of size 9 and values in F_9.
        let mut zeros9 = 0;
        for idx in 0..81 {
            let a = f.elem_from_index(idx);
            let t = f.trace(&a, 2).unwrap();
            assert!(f.in_subfield(&t, 2).unwrap());
            if t.is_zero() {
                zeros9 += 1;
            }
        }
        assert_eq!(zeros9, 9);
        assert_eq!(
            f.trace(&f.one(), 3).unwrap_err(),
            FieldError::NotADivisor { d: 3, n: 4 }
        );
        // The trace matrix agrees with elementwise trace.
        let tm = f.trace_matrix(1).unwrap();
        for idx in 0..81 {
            let a = f.elem_from_index(idx);
            assert_eq!(tm.mul_vec(&a), f.trace(&a, 1).unwrap());
        }
    }

    #[test]
    fn mult_matrix_matches_multiplication() {
        let f = f81();
        let mut r = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let a = f.elem_from_index(r.gen_range(0..81));
            let b = f.elem_from_index(r.gen_range(0..81));
            assert_eq!(f.mult_matrix(&a).mul_vec(&b), f.mul(&a, &b));
        }
        // Multiplication by lambda is a Singer cycle: order 80.
        assert_eq!(f.mult_matrix(&f.lambda()).order(100).unwrap(), 80);
    }

    #[test]
    fn subfield_basis_is_fixed_by_frobenius_power() {
        let f = f81();
        let basis = f.subfield_basis(2).unwrap();
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert_eq!(f.frobenius(b, 2), *b);
        }
        assert_eq!(f.subfield_basis(1).unwrap().len(), 1);
    }

    #[test]
    fn medium_field_primitivity_verified() {
        let f = FieldCtx::new(3, 12, None).unwrap();
        assert!(f.lambda_verified());
        assert_eq!(f.order_u64(), Some(531_441));
        assert_eq!(f.elem_order(&f.lambda()).unwrap(), 531_440);
    }

    #[test]
    fn desc_round_trip() {
        let f = f81();
        let d = f.desc();
        let g = FieldCtx::from_desc(&d).unwrap();
        assert_eq!(f, g);
        let json = serde_json::to_string(&d).unwrap();
        let back: FieldDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
