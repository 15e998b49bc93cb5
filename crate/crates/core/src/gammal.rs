//! The semilinear group GammaL(1, q) acting on F_q as an F_p-space.
//!
//! Elements are written lambda^k . Frobenius^i. The module computes exact
//! subspace stabilizers by filtering all (q-1)n elements, recognizes
//! subfield hyperplanes (codimension-d subspaces that are F_{p^d}-subspaces),
//! decides the transitivity criterion that characterizes 3-orbit central
//! quotients of extraspecial groups, runs admissibility censuses over all
//! subspaces of a given dimension, and constructs, for suitable primes p and
//! r, a large-field subspace whose quotient is Frobenius-transitive without
//! containing any subfield hyperplane.
//!
//! Stabilizers are exhaustive filters: exact and cheap at the field sizes
//! this module targets (q up to a few thousand). The large-field
//! construction touches only linear algebra (no vector enumeration), so it
//! runs at degree p^r - 1.

use crate::ffield::{FieldCtx, FieldElem, FieldError};
use crate::fplinalg::{
    enumerate_subspaces, mulm, negm, poly_divmod, poly_is_zero, LinAlgError, MatFp,
    QuotientSpace, Subspace, VecFp,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GammaLError {
    #[error("element and field belong to different contexts")]
    FieldMismatch,
    #[error("{d} does not divide the field degree {n}")]
    NotADivisor { d: usize, n: usize },
    #[error("the subspace must be proper")]
    UNotProper,
    #[error("field order exceeds the enumeration budget")]
    TooLarge,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// The map a -> lambda^k . a^(p^i) on F_q; k < q-1, i < n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaLElem {
    pub k: u64,
    pub i: usize,
}

impl GammaLElem {
    pub fn identity() -> GammaLElem {
        GammaLElem { k: 0, i: 0 }
    }
}

fn q_minus_1(ctx: &FieldCtx) -> Result<u64, GammaLError> {
    ctx.order_u64().map(|q| q - 1).ok_or(GammaLError::TooLarge)
}

pub fn gl1_apply(ctx: &FieldCtx, e: GammaLElem, a: &FieldElem) -> FieldElem {
    let scaled = ctx.pow(&ctx.lambda(), e.k as u128);
    ctx.mul(&scaled, &ctx.frobenius(a, e.i))
}

/// Composition in application order: apply `e1` first, then `e2`.
pub fn gl1_compose(
    ctx: &FieldCtx,
    e1: GammaLElem,
    e2: GammaLElem,
) -> Result<GammaLElem, GammaLError> {
    let m = q_minus_1(ctx)?;
    // e2(e1(a)) = lambda^(k2 + k1 p^(i2)) . a^(p^(i1+i2)).
    let mut shift = e1.k % m;
    for _ in 0..e2.i {
        shift = (shift as u128 * ctx.p as u128 % m as u128) as u64;
    }
    Ok(GammaLElem { k: (e2.k + shift) % m, i: (e1.i + e2.i) % ctx.n })
}

pub fn gl1_inverse(ctx: &FieldCtx, e: GammaLElem) -> Result<GammaLElem, GammaLError> {
    let m = q_minus_1(ctx)?;
    let i = (ctx.n - e.i % ctx.n) % ctx.n;
    let mut shift = e.k % m;
    for _ in 0..i {
        shift = (shift as u128 * ctx.p as u128 % m as u128) as u64;
    }
    Ok(GammaLElem { k: (m - shift) % m, i })
}

pub fn gl1_order(ctx: &FieldCtx, e: GammaLElem) -> Result<u64, GammaLError> {
    let mut cur = e;
    let mut ord = 1u64;
    while cur != GammaLElem::identity() {
        cur = gl1_compose(ctx, cur, e)?;
        ord += 1;
    }
    Ok(ord)
}

/// All (q-1) . n elements, k-major then Frobenius power.
pub fn gl1_all(ctx: &FieldCtx) -> Result<Vec<GammaLElem>, GammaLError> {
    let m = q_minus_1(ctx)?;
    Ok((0..m).flat_map(|k| (0..ctx.n).map(move |i| GammaLElem { k, i })).collect())
}

/// The F_p-matrix of the semilinear map.
pub fn gl1_matrix(ctx: &FieldCtx, e: GammaLElem) -> MatFp {
    let mut frob_pow = MatFp::identity(ctx.p, ctx.n);
    for _ in 0..e.i {
        frob_pow = ctx.frobenius_matrix().mul(&frob_pow);
    }
    ctx.mult_matrix(&ctx.pow(&ctx.lambda(), e.k as u128)).mul(&frob_pow)
}

/// Exact stabilizer of U: the elements sending every basis vector of U back
/// into U (semilinear bijections preserve dimension, so image-in is
/// image-equal).
pub fn gl1_subspace_stabilizer(
    ctx: &FieldCtx,
    u: &Subspace,
) -> Result<Vec<GammaLElem>, GammaLError> {
    if u.p != ctx.p || u.ambient != ctx.n {
        return Err(GammaLError::FieldMismatch);
    }
    Ok(gl1_all(ctx)?
        .into_iter()
        .filter(|&e| u.basis().iter().all(|b| u.contains(&gl1_apply(ctx, e, b))))
        .collect())
}

// ---------------------------------------------------------------------------
// Traces and subfield hyperplanes.
// ---------------------------------------------------------------------------

/// The F_p-linear functional a -> Tr_{F_q/F_p}(a) as a coordinate row,
/// computed from the modulus via Newton's identities (power sums of the
/// companion matrix).
fn trace_functional(ctx: &FieldCtx) -> VecFp {
    let p = ctx.p;
    let n = ctx.n;
    let f = &ctx.modulus;
    let mut s = vec![0u32; n];
    s[0] = (n as u64 % p as u64) as u32;
    for k in 1..n {
        // s_k + f_{n-1} s_{k-1} + ... + f_{n-k+1} s_1 + k f_{n-k} = 0.
        let mut acc = mulm((k as u64 % p as u64) as u32, f[n - k], p);
        for j in 1..k {
            acc = (acc + mulm(f[n - k + j], s[j], p)) % p;
        }
        s[k] = negm(acc, p);
    }
    VecFp::new(p, s)
}

fn dot(t: &VecFp, a: &VecFp) -> u32 {
    let p = t.p;
    t.vals.iter().zip(&a.vals).fold(0u32, |acc, (&x, &y)| (acc + mulm(x, y, p)) % p)
}

/// Row of the trace pairing v -> Tr(b . v) in power-basis coordinates:
/// entry i is Tr(b . x^i), built by iterated multiplication by x.
fn trace_pairing_row(ctx: &FieldCtx, t: &VecFp, b: &FieldElem) -> Vec<u32> {
    let x = VecFp::unit(ctx.p, ctx.n, 1 % ctx.n);
    let mut cur = b.clone();
    let mut row = Vec::with_capacity(ctx.n);
    for _ in 0..ctx.n {
        row.push(dot(t, &cur));
        cur = ctx.mul(&cur, &x);
    }
    row
}

/// Orthogonal complement of U under the nondegenerate trace form
/// (a, b) -> Tr(ab).
fn trace_complement(ctx: &FieldCtx, u: &Subspace) -> Result<Subspace, GammaLError> {
    let t = trace_functional(ctx);
    let rows: Vec<Vec<u32>> =
        u.basis().iter().map(|b| trace_pairing_row(ctx, &t, b)).collect();
    if rows.is_empty() {
        return Ok(Subspace::full(ctx.p, ctx.n));
    }
    Ok(Subspace::from_gens(ctx.p, ctx.n, &MatFp::from_rows(ctx.p, &rows).kernel())?)
}

/// Kernel of v -> Tr_{F_q/F_{p^d}}(c . v), a codimension-d subspace: the
/// subfield hyperplane dual to the line c . F_{p^d}.
fn subfield_trace_kernel(
    ctx: &FieldCtx,
    c: &FieldElem,
    d: usize,
) -> Result<Subspace, GammaLError> {
    let t = trace_functional(ctx);
    // Tr_{q/p^d}(a) = 0 iff Tr_{q/p}(s a) = 0 for every F_p-basis s of the
    // subfield.
    let rows: Vec<Vec<u32>> = ctx
        .subfield_basis(d)?
        .iter()
        .map(|s| trace_pairing_row(ctx, &t, &ctx.mul(s, c)))
        .collect();
    Ok(Subspace::from_gens(ctx.p, ctx.n, &MatFp::from_rows(ctx.p, &rows).kernel())?)
}

/// The trace-zero hyperplane of F_q over F_{p^d}.
pub fn trace_hyperplane(ctx: &FieldCtx, d: usize) -> Result<Subspace, GammaLError> {
    if d == 0 || ctx.n % d != 0 {
        return Err(GammaLError::NotADivisor { d, n: ctx.n });
    }
    subfield_trace_kernel(ctx, &ctx.one(), d)
}

/// A subfield hyperplane with respect to F_{p^d} is a subspace of dimension
/// n - d invariant under multiplication by lambda^l, l = (q-1)/(p^d-1);
/// equivalently an F_{p^d}-hyperplane of F_q seen as an F_{p^d}-space.
pub fn is_subfield_hyperplane(
    ctx: &FieldCtx,
    u: &Subspace,
    d: usize,
) -> Result<bool, GammaLError> {
    if d == 0 || ctx.n % d != 0 {
        return Err(GammaLError::NotADivisor { d, n: ctx.n });
    }
    if u.p != ctx.p || u.ambient != ctx.n {
        return Err(GammaLError::FieldMismatch);
    }
    if u.dim() != ctx.n - d {
        return Ok(false);
    }
    let q1 = q_minus_1(ctx)?;
    let ell = q1 / ((ctx.p as u64).pow(d as u32) - 1);
    let xe = ctx.pow(&ctx.lambda(), ell as u128);
    Ok(u.basis().iter().all(|b| u.contains(&ctx.mul(b, &xe))))
}

/// All subfield hyperplanes with respect to F_{p^d}, by filtering the
/// subspace enumeration. The count is certified against (q-1)/(p^d-1) and
/// the set against the multiplication orbit of the trace hyperplane.
pub fn subfield_hyperplanes(ctx: &FieldCtx, d: usize) -> Result<Vec<Subspace>, GammaLError> {
    if d == 0 || ctx.n % d != 0 {
        return Err(GammaLError::NotADivisor { d, n: ctx.n });
    }
    let mut out = Vec::new();
    for u in enumerate_subspaces(ctx.p, ctx.n, ctx.n - d) {
        if is_subfield_hyperplane(ctx, &u, d)? {
            out.push(u);
        }
    }
    let expected = q_minus_1(ctx)? / ((ctx.p as u64).pow(d as u32) - 1);
    if out.len() as u64 != expected {
        return Err(GammaLError::ConstructionFailed(format!(
            "found {} subfield hyperplanes, expected {expected}",
            out.len()
        )));
    }
    // They form a single multiplication orbit of the trace hyperplane.
    let key = |u: &Subspace| -> Vec<Vec<u32>> {
        u.basis().iter().map(|b| b.vals.clone()).collect()
    };
    let mut orbit = std::collections::BTreeSet::new();
    let x = ctx.mult_matrix(&ctx.lambda());
    let mut cur = trace_hyperplane(ctx, d)?;
    loop {
        if !orbit.insert(key(&cur)) {
            break;
        }
        cur = cur.transformed(&x)?;
    }
    let found: std::collections::BTreeSet<_> = out.iter().map(key).collect();
    if orbit != found {
        return Err(GammaLError::ConstructionFailed(
            "subfield hyperplanes do not form one multiplication orbit".into(),
        ));
    }
    Ok(out)
}

/// Search for a subfield hyperplane contained in U, over proper divisors d
/// of n in ascending order.
///
/// Dual formulation, valid at any field degree: the hyperplanes with
/// respect to F_{p^d} are the trace-kernels of the lines c . F_{p^d}, and
/// ker Tr(c . -) lies in U exactly when the trace-complement of U lies in
/// c . F_{p^d}. So U contains one iff all ratios of a basis of that
/// complement lie in F_{p^d}.
pub fn contains_subfield_hyperplane(
    ctx: &FieldCtx,
    u: &Subspace,
) -> Result<Option<(usize, Subspace)>, GammaLError> {
    if u.p != ctx.p || u.ambient != ctx.n {
        return Err(GammaLError::FieldMismatch);
    }
    let n = ctx.n;
    let divisors: Vec<usize> = (1..n).filter(|d| n % d == 0).collect();
    if u.dim() == n {
        let Some(&d) = divisors.first() else {
            return Ok(None);
        };
        return Ok(Some((d, trace_hyperplane(ctx, d)?)));
    }
    let perp = trace_complement(ctx, u)?;
    let w0 = perp.basis()[0].clone();
    let w0_inv = ctx.inv(&w0)?;
    for d in divisors {
        if perp.dim() > d || n - d > u.dim() {
            continue;
        }
        let in_line = perp
            .basis()
            .iter()
            .map(|w| ctx.in_subfield(&ctx.mul(w, &w0_inv), d))
            .collect::<Result<Vec<bool>, FieldError>>()?;
        if !in_line.into_iter().all(|b| b) {
            continue;
        }
        let witness = subfield_trace_kernel(ctx, &w0, d)?;
        // Certify: right dimension, contained in U, closed under the
        // subfield (the hyperplane condition in F_{p^d}-space form).
        let contained = witness.dim() == n - d
            && witness.basis().iter().all(|b| u.contains(b))
            && ctx.subfield_basis(d)?.iter().all(|s| {
                witness.basis().iter().all(|b| witness.contains(&ctx.mul(s, b)))
            });
        if !contained {
            return Err(GammaLError::ConstructionFailed(
                "dual witness failed certification".into(),
            ));
        }
        return Ok(Some((d, witness)));
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// The quotient transitivity criterion.
// ---------------------------------------------------------------------------

/// True when the stabilizer of U in GammaL(1,q) acts transitively on the
/// nonzero vectors of F_q / U. For U < Z(q^{1+2m}), this decides whether
/// the central quotient by U is a 3-orbit group.
pub fn quotient_transitive(ctx: &FieldCtx, u: &Subspace) -> Result<bool, GammaLError> {
    if u.p != ctx.p || u.ambient != ctx.n {
        return Err(GammaLError::FieldMismatch);
    }
    if u.dim() == ctx.n {
        return Err(GammaLError::UNotProper);
    }
    let stab = gl1_subspace_stabilizer(ctx, u)?;
    let q = QuotientSpace::new(u.clone());
    let maps: Vec<MatFp> = stab
        .iter()
        .map(|&e| {
            q.induced_map(&gl1_matrix(ctx, e)).ok_or(GammaLError::ConstructionFailed(
                "stabilizer element does not preserve U".into(),
            ))
        })
        .collect::<Result<_, _>>()?;
    let qdim = q.dim();
    let total = (ctx.p as u64).pow(qdim as u32);
    let mut seen = vec![false; total as usize];
    let mut stack = vec![VecFp::from_index(ctx.p, qdim, 1)];
    seen[1] = true;
    let mut count = 1u64;
    while let Some(v) = stack.pop() {
        for m in &maps {
            let w = m.mul_vec(&v);
            let idx = w.index() as usize;
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    Ok(count == total - 1)
}

// ---------------------------------------------------------------------------
// Admissibility census.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusCells {
    /// Contains a subfield hyperplane, quotient not transitive.
    pub hyperplane: u64,
    /// No subfield hyperplane and transitive: admissible quotient data.
    pub admissible: u64,
    /// Contains a subfield hyperplane and transitive.
    pub both: u64,
    /// Neither.
    pub neither: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub q: u64,
    pub dim: usize,
    pub cells: CensusCells,
    /// Canonical bases of the admissible subspaces, in enumeration order.
    pub witnesses: Vec<Vec<Vec<u32>>>,
}

fn census_range(
    ctx: &FieldCtx,
    dim: usize,
    start: u128,
    end: u128,
) -> Result<Census, GammaLError> {
    let mut census = Census {
        q: ctx.order_u64().ok_or(GammaLError::TooLarge)?,
        dim,
        cells: CensusCells::default(),
        witnesses: Vec::new(),
    };
    let mut iter = enumerate_subspaces(ctx.p, ctx.n, dim);
    iter.seek(start);
    for u in iter.take((end - start) as usize) {
        let has_hp = contains_subfield_hyperplane(ctx, &u)?.is_some();
        let transitive = quotient_transitive(ctx, &u)?;
        match (has_hp, transitive) {
            (true, false) => census.cells.hyperplane += 1,
            (false, true) => {
                census.cells.admissible += 1;
                census.witnesses.push(u.basis().iter().map(|b| b.vals.clone()).collect());
            }
            (true, true) => census.cells.both += 1,
            (false, false) => census.cells.neither += 1,
        }
    }
    Ok(census)
}

fn census_merge(mut a: Census, b: Census) -> Census {
    a.cells.hyperplane += b.cells.hyperplane;
    a.cells.admissible += b.cells.admissible;
    a.cells.both += b.cells.both;
    a.cells.neither += b.cells.neither;
    a.witnesses.extend(b.witnesses);
    a
}

/// Classify every subspace of the given dimension by the two flags
/// (contains a subfield hyperplane, stabilizer transitive on the quotient).
/// The scan partitions the enumeration into `jobs` contiguous index ranges;
/// the merged result is identical for any job count.
pub fn admissible_scan(ctx: &FieldCtx, dim: usize, jobs: usize) -> Result<Census, GammaLError> {
    if dim > ctx.n {
        return Err(GammaLError::UNotProper);
    }
    let total = enumerate_subspaces(ctx.p, ctx.n, dim).total();
    let jobs = jobs.clamp(1, 64).min(total.max(1) as usize);
    if jobs <= 1 {
        return census_range(ctx, dim, 0, total);
    }
    let chunk = total.div_ceil(jobs as u128);
    let parts = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let start = (j as u128) * chunk;
                let end = total.min(start + chunk);
                scope.spawn(move || census_range(ctx, dim, start, end))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect::<Vec<_>>()
    });
    let mut acc: Option<Census> = None;
    for part in parts {
        let part = part?;
        acc = Some(match acc {
            None => part,
            Some(a) => census_merge(a, part),
        });
    }
    Ok(acc.expect("at least one job"))
}

// ---------------------------------------------------------------------------
// The large-field Frobenius block construction.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FrobeniusBlockPair {
    pub ctx: FieldCtx,
    /// R: r-dimensional Frobenius-invariant block, Frobenius faithful on it.
    pub block: Subspace,
    /// U: the invariant complement of R.
    pub complement: Subspace,
    /// Order of the Frobenius restricted to the block (= p^r - 1 = degree).
    pub block_order: u64,
    /// Size of the Frobenius orbit on nonzero vectors of V/U.
    pub quotient_orbit: u64,
    /// Smallest d such that U contains a subfield hyperplane with respect
    /// to F_{p^d}, if any. This is always Some((p^r - 1)/(p - 1)): the dual
    /// of U is a single Frobenius orbit whose eigenvalue support lies in
    /// one coset of the d-torsion, so it spans a subfield line.
    pub hyperplane_d: Option<usize>,
}

/// n-th cyclotomic polynomial reduced mod p, by the divisor-product
/// recursion Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
pub fn cyclotomic_mod_p(n: usize, p: u32) -> Vec<u32> {
    let mut phi: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for m in 1..=n {
        if n % m != 0 {
            continue;
        }
        let mut f = vec![0u32; m + 1];
        f[0] = negm(1, p);
        f[m] = 1;
        let mut num = f;
        for d in 1..m {
            if m % d == 0 {
                let (quo, rem) = poly_divmod(&num, &phi[d], p);
                debug_assert!(poly_is_zero(&rem));
                num = quo;
            }
        }
        phi[m] = num;
    }
    phi.pop().unwrap()
}

/// Minimal polynomial over F_p of a primitive element of F_{p^r}: an
/// irreducible degree-r factor of the (p^r - 1)-th cyclotomic polynomial.
fn primitive_min_poly(p: u32, r: usize) -> Result<Vec<u32>, GammaLError> {
    let aux = FieldCtx::new(p, r, None)?;
    let lam = aux.lambda();
    // prod_k (x - lam^(p^k)) has coefficients fixed by Frobenius.
    let mut coeffs: Vec<FieldElem> = vec![aux.one()];
    for k in 0..r {
        let root = aux.frobenius(&lam, k);
        let mut next = vec![aux.zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = aux.add(&next[j + 1], c);
            next[j] = aux.sub(&next[j], &aux.mul(c, &root));
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .map(|c| {
            if c.vals[1..].iter().all(|&x| x == 0) {
                Ok(c.vals[0])
            } else {
                Err(GammaLError::ConstructionFailed(
                    "minimal polynomial has non-constant coefficients".into(),
                ))
            }
        })
        .collect()
}

fn is_odd_prime(m: u32) -> bool {
    m > 2 && m % 2 == 1 && (3..m).take_while(|d| d * d <= m).all(|d| m % d != 0)
}

/// For distinct odd primes p, r with r not dividing p - 1, build inside
/// V = F_{p^n}, n = p^r - 1, an r-dimensional Frobenius-faithful block R
/// and its invariant complement U, certifying that the Frobenius generates
/// a transitive group on (V/U) minus zero. Central quotients of
/// extraspecial groups over F_{p^n} by such U are then 3-orbit groups of
/// center order p^r; since r does not divide n, they are proper quotients
/// in every presentation.
///
/// The result also records the subfield-hyperplane content of U. It is
/// never empty: U always contains a hyperplane with respect to
/// d = (p^r - 1)/(p - 1), so the same quotient arises from an extraspecial
/// group over F_{p^d} as well.
pub fn frobenius_block_complement(p: u32, r: usize) -> Result<FrobeniusBlockPair, GammaLError> {
    if !is_odd_prime(p) || !is_odd_prime(r as u32) || p == r as u32 {
        return Err(GammaLError::ConstructionFailed(
            "p and r must be distinct odd primes".into(),
        ));
    }
    if (p - 1) % r as u32 == 0 {
        return Err(GammaLError::ConstructionFailed(format!(
            "r = {r} divides p - 1 = {}: the Frobenius block would not be faithful",
            p - 1
        )));
    }
    let n = (p as u64).checked_pow(r as u32).map(|x| x - 1).ok_or(GammaLError::TooLarge)?;
    if n > 150 {
        return Err(GammaLError::TooLarge);
    }
    let n = n as usize;
    let ctx = FieldCtx::new(p, n, None)?;
    let y = ctx.frobenius_matrix();

    // The minimal polynomial of a multiplicative generator of F_{p^r} is an
    // irreducible factor of Phi_n mod p, so its kernel under y is a single
    // faithful r-dimensional block inside the Phi_n-isotypic part.
    let g = primitive_min_poly(p, r)?;
    let phi_n = cyclotomic_mod_p(n, p);
    let (_, rem) = poly_divmod(&phi_n, &g, p);
    if !poly_is_zero(&rem) {
        return Err(GammaLError::ConstructionFailed(
            "minimal polynomial does not divide the cyclotomic polynomial".into(),
        ));
    }
    let g_at_y = crate::fplinalg::poly_eval_mat(&g, y);
    let block = Subspace::from_gens(p, n, &g_at_y.kernel())?;
    if block.dim() != r {
        return Err(GammaLError::ConstructionFailed(format!(
            "faithful block has dimension {}, expected {r}",
            block.dim()
        )));
    }
    // x^n - 1 is squarefree (p does not divide n), so the image of g(y) is
    // the invariant complement of its kernel.
    let cols: Vec<VecFp> = (0..n).map(|j| g_at_y.col(j)).collect();
    let complement = Subspace::from_gens(p, n, &cols)?;
    if complement.dim() != n - r {
        return Err(GammaLError::ConstructionFailed(
            "complement has the wrong dimension".into(),
        ));
    }
    for b in block.basis() {
        if !block.contains(&y.mul_vec(b)) {
            return Err(GammaLError::ConstructionFailed("block is not invariant".into()));
        }
    }
    for b in complement.basis() {
        if !complement.contains(&y.mul_vec(b)) {
            return Err(GammaLError::ConstructionFailed(
                "complement is not invariant".into(),
            ));
        }
    }

    // Frobenius restricted to R, in block coordinates; its order must be
    // the full p^r - 1 = n (faithful action).
    let bmat = MatFp::from_cols(p, block.basis());
    let img_cols: Vec<VecFp> = block
        .basis()
        .iter()
        .map(|b| {
            block
                .coords(&y.mul_vec(b))
                .ok_or(GammaLError::ConstructionFailed("block is not invariant".into()))
        })
        .collect::<Result<_, _>>()?;
    debug_assert_eq!(bmat.rows, n);
    let restricted = MatFp::from_cols(p, &img_cols);
    let block_order = restricted.order(4 * n as u64)?;
    if block_order != n as u64 {
        return Err(GammaLError::ConstructionFailed(format!(
            "Frobenius has order {block_order} on the block, expected {n}"
        )));
    }

    // Transitivity on (V/U) minus 0: the induced Frobenius orbit of one
    // nonzero vector must have size p^r - 1 = n.
    let q = QuotientSpace::new(complement.clone());
    let yq = q
        .induced_map(y)
        .ok_or(GammaLError::ConstructionFailed("complement not invariant".into()))?;
    let start = VecFp::from_index(p, q.dim(), 1);
    let mut cur = yq.mul_vec(&start);
    let mut quotient_orbit = 1u64;
    while cur != start {
        cur = yq.mul_vec(&cur);
        quotient_orbit += 1;
        if quotient_orbit > n as u64 {
            break;
        }
    }
    if quotient_orbit != n as u64 {
        return Err(GammaLError::ConstructionFailed(format!(
            "Frobenius orbit on the quotient has size {quotient_orbit}, expected {n}"
        )));
    }

    let hyperplane_d = contains_subfield_hyperplane(&ctx, &complement)?.map(|(d, _)| d);

    Ok(FrobeniusBlockPair { ctx, block, complement, block_order, quotient_orbit, hyperplane_d })
}
