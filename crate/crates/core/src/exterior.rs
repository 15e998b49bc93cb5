//! The exterior square of F_p^n in explicit coordinates.
//!
//! Basis vectors are e_i /\ e_j for i < j, ordered lexicographically, so
//! Lambda^2(F_p^n) is just F_p^(n(n-1)/2) with a distinguished pairing of
//! coordinates to index pairs. GL(n, p) acts through `induced_map`, and
//! `submodule_closure` spins a seed subspace up to the smallest invariant one.

use crate::ffield::FieldCtx;
use crate::fplinalg::{charpoly, poly_is_squarefree, LinAlgError, MatFp, Subspace, VecFp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtSquare {
    pub p: u32,
    pub n: usize,
}

impl ExtSquare {
    pub fn new(p: u32, n: usize) -> ExtSquare {
        ExtSquare { p, n }
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Coordinate of e_i /\ e_j, for 0 <= i < j < n.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "pair_index requires i < j < n");
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Inverse of `pair_index`.
    pub fn index_pair(&self, k: usize) -> (usize, usize) {
        assert!(k < self.dim());
        let mut i = 0;
        let mut base = 0;
        while base + (self.n - i - 1) <= k {
            base += self.n - i - 1;
            i += 1;
        }
        (i, i + 1 + (k - base))
    }

    pub fn wedge(&self, u: &VecFp, v: &VecFp) -> Result<VecFp, LinAlgError> {
        if u.p != self.p || v.p != self.p || u.len() != self.n || v.len() != self.n {
            return Err(LinAlgError::DimensionMismatch(format!(
                "wedge wants two vectors of length {} over F_{}",
                self.n, self.p
            )));
        }
        let p64 = self.p as u64;
        let mut out = VecFp::zero(self.p, self.dim());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let a = (u.vals[i] as u64 * v.vals[j] as u64) % p64;
                let b = (u.vals[j] as u64 * v.vals[i] as u64) % p64;
                out.vals[self.pair_index(i, j)] = ((a + p64 - b) % p64) as u32;
            }
        }
        Ok(out)
    }

    /// The matrix of Lambda^2(g): column (i,j) holds wedge(g e_i, g e_j).
    pub fn induced_map(&self, g: &MatFp) -> Result<MatFp, LinAlgError> {
        if g.rows != self.n || g.cols != self.n || g.p != self.p {
            return Err(LinAlgError::DimensionMismatch(format!(
                "induced_map wants an {n} x {n} matrix over F_{}",
                self.p,
                n = self.n
            )));
        }
        g.inv()?; // reject singular inputs
        let cols: Vec<VecFp> = (0..self.n).map(|j| g.col(j)).collect();
        let mut m = MatFp::zero(self.p, self.dim(), self.dim());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.wedge(&cols[i], &cols[j])?;
                let k = self.pair_index(i, j);
                for (r, &c) in w.vals.iter().enumerate() {
                    m.set(r, k, c);
                }
            }
        }
        Ok(m)
    }

    /// Smallest subspace of Lambda^2 containing `seed` and invariant under
    /// Lambda^2(g) for every g in `gens`.
    pub fn submodule_closure(
        &self,
        seed: &Subspace,
        gens: &[MatFp],
    ) -> Result<Subspace, LinAlgError> {
        if seed.ambient != self.dim() || seed.p != self.p {
            return Err(LinAlgError::DimensionMismatch(format!(
                "seed must live in the {}-dimensional exterior square",
                self.dim()
            )));
        }
        let maps: Vec<MatFp> = gens
            .iter()
            .map(|g| self.induced_map(g))
            .collect::<Result<_, _>>()?;
        let mut cur = seed.clone();
        loop {
            let mut vecs: Vec<VecFp> = cur.basis().to_vec();
            let before = cur.dim();
            for m in &maps {
                for b in cur.basis() {
                    vecs.push(m.mul_vec(b));
                }
            }
            let next = Subspace::from_gens(self.p, self.dim(), &vecs)?;
            if next.dim() == before {
                return Ok(next);
            }
            cur = next;
        }
    }
}

/// Whether Lambda^2 of the field F_{p^n}, viewed as F_p-space with the
/// multiplication-by-lambda action, splits into pairwise non-isomorphic
/// irreducibles. Since mult-by-lambda has order p^n - 1 (coprime to p) it is
/// semisimple, and multiplicity-freeness is then exactly squarefreeness of
/// the characteristic polynomial of the induced map.
pub fn singer_multiplicity_free_check(ctx: &FieldCtx) -> bool {
    let ext = ExtSquare::new(ctx.p, ctx.n);
    if ext.dim() == 0 {
        return true;
    }
    let y = ctx.mult_matrix(&ctx.lambda());
    let ind = ext.induced_map(&y).expect("multiplication by lambda is invertible");
    poly_is_squarefree(&charpoly(&ind), ctx.p).expect("charpoly of a square matrix is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fplinalg::{poly_eval_mat, poly_factor};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_vec(r: &mut StdRng, p: u32, n: usize) -> VecFp {
        VecFp::new(p, (0..n).map(|_| r.gen_range(0..p)).collect())
    }

    fn random_invertible(r: &mut StdRng, p: u32, n: usize) -> MatFp {
        loop {
            let rows: Vec<Vec<u32>> =
                (0..n).map(|_| (0..n).map(|_| r.gen_range(0..p)).collect()).collect();
            let m = MatFp::from_rows(p, &rows);
            if m.inv().is_ok() {
                return m;
            }
        }
    }

    #[test]
    fn indexing_is_a_bijection() {
        let ext = ExtSquare::new(3, 5);
        let mut seen = vec![false; ext.dim()];
        for i in 0..5 {
            for j in (i + 1)..5 {
                let k = ext.pair_index(i, j);
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(ext.index_pair(k), (i, j));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn wedge_is_alternating_and_bilinear() {
        let ext = ExtSquare::new(3, 4);
        let e: Vec<VecFp> = (0..4).map(|i| VecFp::unit(3, 4, i)).collect();
        let w = ext.wedge(&e[1], &e[2]).unwrap();
        assert_eq!(w, VecFp::unit(3, ext.dim(), ext.pair_index(1, 2)));
        let mut r = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let u = random_vec(&mut r, 3, 4);
            let v = random_vec(&mut r, 3, 4);
            let w2 = random_vec(&mut r, 3, 4);
            assert!(ext.wedge(&u, &u).unwrap().is_zero());
            assert!(ext.wedge(&u, &v).unwrap().add(&ext.wedge(&v, &u).unwrap()).is_zero());
            let lhs = ext.wedge(&u, &v.add(&w2)).unwrap();
            let rhs = ext.wedge(&u, &v).unwrap().add(&ext.wedge(&u, &w2).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn induced_map_identities() {
        let ext = ExtSquare::new(3, 4);
        let id = MatFp::identity(3, 4);
        assert!(ext.induced_map(&id).unwrap().is_identity());
        // n = 2: Lambda^2 is one-dimensional and diag(a,b) acts as ab.
        let ext2 = ExtSquare::new(5, 2);
        let mut d = MatFp::zero(5, 2, 2);
        d.set(0, 0, 2);
        d.set(1, 1, 4);
        let ind = ext2.induced_map(&d).unwrap();
        assert_eq!(ind.get(0, 0), 3); // 2 * 4 = 8 = 3 mod 5
        // Singular matrices are rejected.
        assert!(ext.induced_map(&MatFp::zero(3, 4, 4)).is_err());
    }

    #[test]
    fn induced_map_is_functorial() {
        let ext = ExtSquare::new(3, 4);
        let mut r = StdRng::seed_from_u64(17);
        for _ in 0..25 {
            let g = random_invertible(&mut r, 3, 4);
            let h = random_invertible(&mut r, 3, 4);
            let gh = g.mul(&h);
            assert_eq!(
                ext.induced_map(&gh).unwrap(),
                ext.induced_map(&g).unwrap().mul(&ext.induced_map(&h).unwrap())
            );
            let u = random_vec(&mut r, 3, 4);
            let v = random_vec(&mut r, 3, 4);
            let lhs = ext.induced_map(&g).unwrap().mul_vec(&ext.wedge(&u, &v).unwrap());
            let rhs = ext.wedge(&g.mul_vec(&u), &g.mul_vec(&v)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn closure_is_monotone_idempotent_and_word_stable() {
        let ext = ExtSquare::new(3, 4);
        let mut r = StdRng::seed_from_u64(23);
        for _ in 0..15 {
            let gens = vec![random_invertible(&mut r, 3, 4), random_invertible(&mut r, 3, 4)];
            let seed = Subspace::from_gens(
                3,
                ext.dim(),
                &[random_vec(&mut r, 3, ext.dim())],
            )
            .unwrap();
            let cl = ext.submodule_closure(&seed, &gens).unwrap();
            assert!(seed.is_subspace_of(&cl));
            assert_eq!(ext.submodule_closure(&cl, &gens).unwrap(), cl);
            // Replacing generators by words in them cannot grow the closure.
            let words = vec![gens[0].mul(&gens[1]), gens[1].mul(&gens[0]).mul(&gens[0])];
            let cl2 = ext.submodule_closure(&seed, &words).unwrap();
            assert!(cl2.is_subspace_of(&cl));
        }
        let zero = Subspace::zero(3, ext.dim());
        let gens = vec![random_invertible(&mut r, 3, 4)];
        assert_eq!(ext.submodule_closure(&zero, &gens).unwrap().dim(), 0);
        let full = Subspace::full(3, ext.dim());
        assert_eq!(ext.submodule_closure(&full, &gens).unwrap().dim(), ext.dim());
    }

    /// Primary decomposition oracle: for the Singer action on Lambda^2 of
    /// F_81, factor the characteristic polynomial, cut out the primary
    /// components as kernels, and check that the closure of any seed is the
    /// sum of exactly the components it projects onto nontrivially.
    #[test]
    fn closure_matches_primary_decomposition_for_singer_action() {
        let ctx = FieldCtx::new(3, 4, Some(&[2, 0, 0, 2, 1])).unwrap();
        let ext = ExtSquare::new(3, 4);
        let y = ctx.mult_matrix(&ctx.lambda());
        let ind = ext.induced_map(&y).unwrap();
        let cp = charpoly(&ind);
        let factors = poly_factor(&cp, 3).unwrap();
        assert!(factors.iter().all(|&(_, m)| m == 1), "Singer action is multiplicity-free");
        let comps: Vec<Subspace> = factors
            .iter()
            .map(|(g, _)| {
                let ker = poly_eval_mat(g, &ind).kernel();
                Subspace::from_gens(3, ext.dim(), &ker).unwrap()
            })
            .collect();
        let total: usize = comps.iter().map(|c| c.dim()).sum();
        assert_eq!(total, ext.dim());
        // Every wedge of basis vectors, and a few random seeds, close up to
        // the sum of the components they meet.
        let mut seeds: Vec<VecFp> = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                seeds.push(
                    ext.wedge(&VecFp::unit(3, 4, i), &VecFp::unit(3, 4, j)).unwrap(),
                );
            }
        }
        let mut r = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            seeds.push(random_vec(&mut r, 3, ext.dim()));
        }
        for s in seeds {
            if s.is_zero() {
                continue;
            }
            let seed = Subspace::from_gens(3, ext.dim(), &[s.clone()]).unwrap();
            let cl = ext.submodule_closure(&seed, &[y.clone()]).unwrap();
            let mut expect = Subspace::zero(3, ext.dim());
            for c in &comps {
                // The projection of s onto component c is nonzero exactly
                // when s is not contained in the sum of the others.
                let others = comps
                    .iter()
                    .filter(|d| *d != c)
                    .fold(Subspace::zero(3, ext.dim()), |acc, d| acc.sum(d).unwrap());
                if !others.contains(&s) {
                    expect = expect.sum(c).unwrap();
                }
            }
            assert_eq!(cl, expect);
        }
    }

    #[test]
    fn singer_checks_at_desk_scale() {
        for (p, n) in [(3u32, 2usize), (3, 3), (3, 4), (3, 6), (5, 2), (5, 3)] {
            let ctx = FieldCtx::new(p, n, None).unwrap();
            assert!(singer_multiplicity_free_check(&ctx), "(p,n) = ({p},{n})");
        }
    }
}
