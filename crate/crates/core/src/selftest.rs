//! The acceptance checklist: fourteen desk-scale claims about the
//! constructions in this crate, each certified by at least one exact
//! method and most by two independent ones.
//!
//! Item 13 is special. Its published form asserts that the degree-124
//! construction yields a complement free of subfield hyperplanes; the
//! library refutes that clause with a certified witness (d = 31) while
//! confirming every other clause. The checklist therefore expects item 13
//! to report `FailAsSpecified`, and treats any other outcome as a defect.

use crate::autos::{
    exhibited_gens, generic_aut_orbits, holomorph_rank, homocyclic_orbits, is_3orbit,
    orbit_count_special, orbit_partition_elements, stabilizer_search, table_3orbit, SearchMode,
    Strategy, DEFAULT_BUDGET,
};
use crate::ffield::FieldCtx;
use crate::files::{census_to_json, cocycle_to_json};
use crate::fplinalg::{enumerate_subspaces, QuotientSpace, Subspace, VecFp};
use crate::gammal::{
    admissible_scan, frobenius_block_complement, gl1_matrix, gl1_subspace_stabilizer,
    subfield_hyperplanes, trace_hyperplane,
};
use crate::groups::{
    central_quotient, mk_cyclic, mk_dihedral, mk_extraspecial_q, mk_heisenberg_q, mk_homocyclic,
    mk_p_epsilon, mk_pq_frobenius, mk_su3_sylow, mk_suzuki_a, symplectic_standardize,
    CocycleGroup, GroupElement, TableGroup,
};
use serde::Serialize;

pub const CRITERIA: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    /// Every clause of the item holds as written.
    Pass,
    /// The item as written is refuted by a certified computation; the
    /// checklist records the refutation instead of the claim.
    FailAsSpecified,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub status: Status,
    pub details: Vec<String>,
}

/// What a healthy artifact reports per item.
pub fn expected_status(id: usize) -> Status {
    if id == 13 {
        Status::FailAsSpecified
    } else {
        Status::Pass
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "abelian groups: three orbits with the stated sizes",
        2 => "pq Frobenius groups: oracle orbits and holomorph rank",
        3 => "extraspecial 3-groups: search count, formula, oracle",
        4 => "Suzuki 2-group of order 64: scaler orbits and oracle",
        5 => "unitary Sylow subgroups: Q8, order 64, standardization",
        6 => "order-512 group: relations, searched pairs, oracle",
        7 => "Heisenberg group over F_9: element-level orbit count",
        8 => "all order-9-center quotients standardize identically",
        9 => "census at q=81: hyperplanes, witnesses, quotient verdicts",
        10 => "order-3^10 presentation: relations, center, verdict",
        11 => "exterior-square multiplicity-free checks",
        12 => "twisted family at (3,6): subfield-linear lifts",
        13 => "degree-124 block construction (refuted clause recorded)",
        14 => "property suites: dual-path agreement and byte stability",
        _ => "unknown",
    }
}

type CheckResult = Result<(Status, Vec<String>), String>;

fn fail(msg: impl Into<String>) -> CheckResult {
    Err(msg.into())
}

macro_rules! require {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return fail(format!($($arg)+));
        }
    };
}

fn f3() -> FieldCtx {
    FieldCtx::new(3, 1, None).expect("F_3")
}

fn f9() -> FieldCtx {
    FieldCtx::new(3, 2, None).expect("F_9")
}

fn f81() -> FieldCtx {
    FieldCtx::new(3, 4, Some(&[2, 0, 0, 2, 1])).expect("F_81")
}

fn u1() -> Subspace {
    Subspace::from_gens(3, 4, &[VecFp::new(3, vec![1, 0, 1, 0]), VecFp::new(3, vec![0, 2, 1, 2])])
        .expect("U1")
}

fn u2() -> Subspace {
    Subspace::from_gens(3, 4, &[VecFp::new(3, vec![2, 1, 0, 0]), VecFp::new(3, vec![1, 1, 1, 0])])
        .expect("U2")
}

/// The 729-element fusion search needs about 1.9e8 nodes, so the oracle
/// cross-checks run with headroom above the default search budget.
const ORACLE_BUDGET: u64 = 4 * DEFAULT_BUDGET;

fn oracle_count(t: &TableGroup) -> Result<usize, String> {
    generic_aut_orbits(t, ORACLE_BUDGET)
        .map(|o| o.report.count)
        .map_err(|e| format!("oracle failed on order {}: {e}", t.order))
}

fn c01() -> CheckResult {
    let mut details = Vec::new();
    for k in [4usize, 9] {
        let count = oracle_count(&mk_cyclic(k))?;
        require!(count == 3, "cyclic group of order {k}: oracle found {count} orbits");
        details.push(format!("Z_{k}: 3 oracle orbits"));
    }
    for (p, dim, want) in [(3u32, 1usize, vec![6, 2, 1]), (2, 2, vec![12, 3, 1]), (3, 2, vec![72, 8, 1])]
    {
        let rep = homocyclic_orbits(p, dim).map_err(|e| e.to_string())?;
        require!(
            rep.count == 3 && rep.sizes == want,
            "homocyclic ({p},{dim}): got {:?}",
            rep.sizes
        );
        details.push(format!("homocyclic p^2-type ({p},{dim}): sizes {want:?}"));
    }
    Ok((Status::Pass, details))
}

fn c02() -> CheckResult {
    let mut details = Vec::new();
    for (p, q, profile) in [
        (2u32, 3u32, vec![(1u64, 1usize), (2, 3), (3, 8)]),
        (3, 2, vec![(1, 1), (2, 3), (3, 2)]),
    ] {
        let (t, perms) = mk_pq_frobenius(p, q, 1).map_err(|e| e.to_string())?;
        require!(
            t.order_profile() == profile,
            "({p},{q}): order profile {:?}",
            t.order_profile()
        );
        let count = oracle_count(&t)?;
        require!(count == 3, "({p},{q}): oracle found {count} orbits");
        let rank = holomorph_rank(&t, &perms).map_err(|e| e.to_string())?;
        require!(rank == 3, "({p},{q}): holomorph rank {rank}");
        details.push(format!("order {}: profile ok, 3 orbits, rank 3", t.order));
    }
    let (t, perms) = mk_pq_frobenius(3, 5, 1).map_err(|e| e.to_string())?;
    require!(t.order == 405, "expected order 405, got {}", t.order);
    let v = table_3orbit(&t, &perms, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    require!(
        v.is3 == Some(true) && v.r == Some(3),
        "order 405: verdict {:?}, r {:?}",
        v.is3,
        v.r
    );
    details.push("order 405: 3 orbits under the exhibited conjugation action".into());
    Ok((Status::Pass, details))
}

fn c03() -> CheckResult {
    let mut details = Vec::new();
    let h3 = mk_heisenberg_q(&f3()).map_err(|e| e.to_string())?;
    let out = stabilizer_search(&h3, SearchMode::FullEnumerate, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    require!(
        out.exhausted && out.pairs.len() == 48,
        "3^(1+2): search found {} pairs (exhausted: {})",
        out.pairs.len(),
        out.exhausted
    );
    let (_, _, r) = orbit_count_special(&h3, &out.pairs).map_err(|e| e.to_string())?;
    require!(r == 3, "3^(1+2): formula gives r = {r}");
    let count = oracle_count(&h3.to_table().map_err(|e| e.to_string())?)?;
    require!(count == 3, "3^(1+2): oracle found {count} orbits");
    details.push("3^(1+2): 48 pairs, r = 3, oracle agrees".into());

    let h5 = mk_extraspecial_q(&f3(), 2).map_err(|e| e.to_string())?;
    let pairs = exhibited_gens(&h5).map_err(|e| e.to_string())?.pairs();
    let (_, _, r) = orbit_count_special(&h5, &pairs).map_err(|e| e.to_string())?;
    require!(r == 3, "3^(1+4): formula gives r = {r}");
    let rep = orbit_partition_elements(&h5, &pairs, true).map_err(|e| e.to_string())?;
    require!(
        rep.count == 3 && rep.sizes.iter().sum::<u64>() == 243,
        "3^(1+4): element partition {:?}",
        rep.sizes
    );
    details.push(format!("3^(1+4): element orbits {:?}", rep.sizes));
    Ok((Status::Pass, details))
}

fn c04() -> CheckResult {
    let n = mk_suzuki_a(&FieldCtx::new(2, 3, None).map_err(|e| e.to_string())?, 1)
        .map_err(|e| e.to_string())?;
    require!(n.order_u64() == Some(64), "expected order 64");
    let gens = exhibited_gens(&n).map_err(|e| e.to_string())?;
    let xi = gens
        .gens
        .iter()
        .find(|g| g.label == "scale by lambda")
        .ok_or("no field scaler in the catalog")?;
    let (rv, rm, r) =
        orbit_count_special(&n, std::slice::from_ref(&xi.pair)).map_err(|e| e.to_string())?;
    require!(
        rv.count == 2 && rm.count == 2 && r == 3,
        "scaler alone: o(V) = {}, o(M) = {}, r = {r}",
        rv.count,
        rm.count
    );
    let count = oracle_count(&n.to_table().map_err(|e| e.to_string())?)?;
    require!(count == 3, "oracle found {count} orbits");
    Ok((
        Status::Pass,
        vec!["order 64 twisted group: scaler gives o(V) = o(M) = 2, oracle agrees".into()],
    ))
}

fn c05() -> CheckResult {
    let mut details = Vec::new();
    let q8 = mk_su3_sylow(2, 1).map_err(|e| e.to_string())?;
    require!(q8.order_u64() == Some(8), "q=2 Sylow has order {:?}", q8.order_u64());
    let count = oracle_count(&q8.to_table().map_err(|e| e.to_string())?)?;
    require!(count == 3, "Q8: oracle found {count} orbits");
    details.push("q=2: Q8 with 3 oracle orbits".into());

    let s4 = mk_su3_sylow(2, 2).map_err(|e| e.to_string())?;
    require!(s4.order_u64() == Some(64), "q=4 Sylow has order {:?}", s4.order_u64());
    let pairs = exhibited_gens(&s4).map_err(|e| e.to_string())?.pairs();
    let (_, _, r) = orbit_count_special(&s4, &pairs).map_err(|e| e.to_string())?;
    require!(r == 3, "q=4: exhibited r = {r}");
    let count = oracle_count(&s4.to_table().map_err(|e| e.to_string())?)?;
    require!(count == 3, "q=4: oracle found {count} orbits");
    details.push("q=4: order 64, exhibited r = 3, oracle agrees".into());

    let s3 = mk_su3_sylow(3, 1).map_err(|e| e.to_string())?;
    let (_, canonical) = symplectic_standardize(&s3).map_err(|e| e.to_string())?;
    let h3 = mk_heisenberg_q(&f3()).map_err(|e| e.to_string())?;
    require!(canonical.same_table(&h3), "q=3 Sylow does not standardize to 3^(1+2)");
    details.push("q=3: standardizes to 3^(1+2)".into());

    let count = oracle_count(&mk_dihedral(4))?;
    require!(count == 4, "D_4 control: oracle found {count} orbits");
    details.push("negative control D_4: 4 orbits".into());
    Ok((Status::Pass, details))
}

fn c06() -> CheckResult {
    let n = mk_p_epsilon();
    require!(n.order_u64() == Some(512), "order {:?}", n.order_u64());
    // Defining relations, exhaustively: exponent 4 with every square central
    // (squares land in the center's coordinates), commutators central by
    // construction.
    for idx in 0u64..512 {
        let x = n.elem_from_index(idx);
        let sq = n.mul(&x, &x).map_err(|e| e.to_string())?;
        require!(sq.v.is_zero(), "square of element {idx} is not central");
        let q = n.mul(&sq, &sq).map_err(|e| e.to_string())?;
        require!(
            q == n.identity(),
            "element {idx} has order exceeding 4"
        );
    }
    let out = stabilizer_search(&n, SearchMode::FindOrders(vec![7, 9]), DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let orders: Vec<u64> = out
        .pairs
        .iter()
        .map(|p| p.order(1 << 20).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    require!(
        orders.contains(&7) && orders.contains(&9),
        "searched pair orders: {orders:?}"
    );
    let witness = stabilizer_search(&n, SearchMode::TransitiveWitness, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let (rv, rm, r) = orbit_count_special(&n, &witness.pairs).map_err(|e| e.to_string())?;
    require!(
        rv.sizes == vec![63, 1] && rm.sizes == vec![7, 1] && r == 3,
        "witness pairs: V orbits {:?}, M orbits {:?}",
        rv.sizes,
        rm.sizes
    );
    let count = oracle_count(&n.to_table().map_err(|e| e.to_string())?)?;
    require!(count == 3, "oracle found {count} orbits");
    Ok((
        Status::Pass,
        vec![format!(
            "relations hold on all 512 elements; pair orders {orders:?}; orbits 63+7; oracle agrees"
        )],
    ))
}

fn c07() -> CheckResult {
    let n = mk_heisenberg_q(&f9()).map_err(|e| e.to_string())?;
    require!(n.order_u64() == Some(729), "order {:?}", n.order_u64());
    let pairs = exhibited_gens(&n).map_err(|e| e.to_string())?.pairs();
    let (_, _, r) = orbit_count_special(&n, &pairs).map_err(|e| e.to_string())?;
    require!(r == 3, "formula gives r = {r}");
    let rep = orbit_partition_elements(&n, &pairs, true).map_err(|e| e.to_string())?;
    require!(
        rep.count == 3 && rep.sizes == vec![720, 8, 1],
        "element partition {:?}",
        rep.sizes
    );
    Ok((Status::Pass, vec![format!("729 elements partition into orbits {:?}", rep.sizes)]))
}

fn c08() -> CheckResult {
    let g = mk_heisenberg_q(&f9()).map_err(|e| e.to_string())?;
    let expect = mk_extraspecial_q(&f3(), 2).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for u in enumerate_subspaces(3, 2, 1) {
        let q = central_quotient(&g, &u).map_err(|e| e.to_string())?;
        let (_, canonical) = symplectic_standardize(&q).map_err(|e| e.to_string())?;
        require!(
            canonical.same_table(&expect),
            "quotient by {:?} standardizes to a different table",
            u.basis()
        );
        checked += 1;
    }
    require!(checked == 4, "expected 4 one-dimensional central subspaces, saw {checked}");
    Ok((Status::Pass, vec!["all 4 quotients standardize to the canonical 3^(1+4)".into()]))
}

fn c09() -> CheckResult {
    let ctx = f81();
    let mut details = Vec::new();
    let census = admissible_scan(&ctx, 2, 1).map_err(|e| e.to_string())?;
    let total = census.cells.hyperplane
        + census.cells.admissible
        + census.cells.both
        + census.cells.neither;
    require!(total == 130, "census covers {total} subspaces");
    let hps = subfield_hyperplanes(&ctx, 2).map_err(|e| e.to_string())?;
    require!(hps.len() == 10, "{} subfield hyperplanes", hps.len());
    details.push(format!(
        "130 subspaces; 10 subfield hyperplanes; cells: {} admissible, {} both, {} neither",
        census.cells.admissible, census.cells.both, census.cells.neither
    ));

    let witness_set: Vec<Subspace> = census
        .witnesses
        .iter()
        .map(|w| {
            let gens: Vec<VecFp> = w.iter().map(|r| VecFp::new(3, r.clone())).collect();
            Subspace::from_gens(3, 4, &gens).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    for (name, u) in [("U1", u1()), ("U2", u2())] {
        require!(witness_set.contains(&u), "{name} is not among the witnesses");
        let stab = gl1_subspace_stabilizer(&ctx, &u).map_err(|e| e.to_string())?;
        require!(stab.len() == 8, "{name}: stabilizer order {}", stab.len());
        let q = QuotientSpace::new(u.clone());
        let induced: std::collections::BTreeSet<Vec<Vec<u32>>> = stab
            .iter()
            .map(|&e| {
                let m = q
                    .induced_map(&gl1_matrix(&ctx, e))
                    .ok_or_else(|| format!("{name}: stabilizer does not preserve it"))?;
                Ok((0..2).map(|i| m.row(i).vals).collect())
            })
            .collect::<Result<_, String>>()?;
        require!(induced.len() == 8, "{name}: quotient image order {}", induced.len());
    }
    details.push("U1 and U2 are witnesses with quotient-stabilizer image of order 8".into());

    let parent = mk_heisenberg_q(&ctx).map_err(|e| e.to_string())?;
    for u in &witness_set {
        let quot = central_quotient(&parent, u).map_err(|e| e.to_string())?;
        let v = is_3orbit(&quot, Strategy::ExhibitedThenSearch, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        require!(
            v.is3 == Some(true),
            "quotient by witness {:?}: verdict {:?}",
            u.basis(),
            v.is3
        );
    }
    details.push(format!("all {} witness quotients verified 3-orbit", witness_set.len()));

    // Reported counts are stable across worker counts.
    let again = admissible_scan(&ctx, 2, 4).map_err(|e| e.to_string())?;
    require!(again == census, "census differs between 1 and 4 jobs");
    details.push("witness census identical at 1 and 4 jobs".into());
    Ok((Status::Pass, details))
}

fn c10() -> CheckResult {
    let ctx = f81();
    let g = mk_heisenberg_q(&ctx).map_err(|e| e.to_string())?;
    let q = central_quotient(&g, &u1()).map_err(|e| e.to_string())?;
    require!(q.order_u64() == Some(59049), "order {:?}", q.order_u64());
    require!(q.m == 2, "center dimension {}", q.m);

    let proj = QuotientSpace::new(u1());
    let xe = |i: usize| GroupElement {
        v: VecFp::new(3, [ctx.pow(&ctx.lambda(), i as u128).vals.clone(), vec![0; 4]].concat()),
        z: VecFp::zero(3, 2),
    };
    let ye = |j: usize| GroupElement {
        v: VecFp::new(3, [vec![0; 4], ctx.pow(&ctx.lambda(), j as u128).vals.clone()].concat()),
        z: VecFp::zero(3, 2),
    };
    for i in 0..4 {
        for j in 0..4 {
            let comm = q.comm(&xe(i), &ye(j)).map_err(|e| e.to_string())?;
            let expect = proj.project(&ctx.pow(&ctx.lambda(), (i + j) as u128));
            require!(comm.z == expect, "commutator [x{},y{}] mismatch", i + 1, j + 1);
            require!(
                q.comm(&xe(i), &xe(j)).map_err(|e| e.to_string())? == q.identity(),
                "x generators do not commute"
            );
            require!(
                q.comm(&ye(i), &ye(j)).map_err(|e| e.to_string())? == q.identity(),
                "y generators do not commute"
            );
        }
        require!(
            q.pow(&xe(i), 3).map_err(|e| e.to_string())? == q.identity(),
            "x{} has order > 3",
            i + 1
        );
        require!(
            q.pow(&ye(i), 3).map_err(|e| e.to_string())? == q.identity(),
            "y{} has order > 3",
            i + 1
        );
    }
    // The two central relations say exactly that U1's generators vanish.
    require!(
        proj.project(&VecFp::new(3, vec![1, 0, 1, 0])).is_zero()
            && proj.project(&VecFp::new(3, vec![0, 2, 1, 2])).is_zero(),
        "central relations do not hold"
    );
    let v = is_3orbit(&q, Strategy::ExhibitedThenSearch, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    require!(v.is3 == Some(true), "verdict {:?}", v.is3);
    Ok((
        Status::Pass,
        vec!["relations hold, center has order 9, group verified 3-orbit".into()],
    ))
}

fn c11() -> CheckResult {
    let mut details = Vec::new();
    for (p, n) in [(3u32, 2usize), (3, 3), (3, 4), (3, 6), (5, 2), (5, 3)] {
        let ctx = FieldCtx::new(p, n, None).map_err(|e| e.to_string())?;
        require!(
            crate::exterior::singer_multiplicity_free_check(&ctx),
            "multiplicity-free check failed at ({p},{n})"
        );
        details.push(format!("({p},{n}) ok"));
    }
    Ok((Status::Pass, vec![format!("multiplicity-free at {}", details.join(", "))]))
}

fn c12() -> CheckResult {
    let ctx = FieldCtx::new(3, 6, None).map_err(|e| e.to_string())?;
    // Twist x -> x^9 is the square of the Frobenius.
    let n = mk_suzuki_a(&ctx, 2).map_err(|e| e.to_string())?;
    require!(n.order_u64() == Some(531_441), "order {}", n.order_string());
    let gens = exhibited_gens(&n).map_err(|e| e.to_string())?;
    require!(
        gens.failures.is_empty(),
        "lift failures: {:?}",
        gens.failures
    );
    let subfield_count =
        gens.gens.iter().filter(|g| g.label.contains("subfield")).count();
    require!(subfield_count > 0, "no subfield-linear generators in the catalog");
    let pairs = gens.pairs();
    let (rv, rm, r) = orbit_count_special(&n, &pairs).map_err(|e| e.to_string())?;
    require!(
        rv.count == 2 && rm.count == 2 && r == 3,
        "o(V) = {}, o(M) = {}, r = {r}",
        rv.count,
        rm.count
    );
    Ok((
        Status::Pass,
        vec![format!(
            "{} catalog generators ({} subfield-linear) all lift; o(V) = o(M) = 2",
            gens.gens.len(),
            subfield_count
        )],
    ))
}

fn c13() -> CheckResult {
    let pair = frobenius_block_complement(5, 3).map_err(|e| e.to_string())?;
    require!(pair.ctx.n == 124, "ambient degree {}", pair.ctx.n);
    require!(pair.block.dim() == 3, "block dimension {}", pair.block.dim());
    require!(pair.complement.dim() == 121, "complement dimension {}", pair.complement.dim());
    require!(pair.block_order == 124, "block order {}", pair.block_order);
    require!(
        pair.quotient_orbit == 124,
        "quotient orbit size {}",
        pair.quotient_orbit
    );
    // The specified hyperplane-freeness clause. A healthy artifact refutes
    // it: the complement contains a certified subfield hyperplane with
    // respect to F_{5^31}, so the item cannot pass as written.
    match pair.hyperplane_d {
        Some(31) => Ok((
            Status::FailAsSpecified,
            vec![
                "dimension, faithfulness and quotient transitivity all verified".into(),
                "hyperplane-freeness clause refuted: certified subfield hyperplane at d = 31 \
                 = (5^3-1)/(5-1) is contained in the complement"
                    .into(),
            ],
        )),
        Some(d) => fail(format!("hyperplane content at unexpected d = {d}")),
        None => fail(
            "no contained subfield hyperplane found, contradicting the certified witness \
             this artifact was validated against",
        ),
    }
}

fn c14() -> CheckResult {
    let mut details = Vec::new();

    // Dual-path orbit agreement on every constructed group of order <= 729.
    let cocycle_groups: Vec<CocycleGroup> = vec![
        mk_heisenberg_q(&f3()).map_err(|e| e.to_string())?,
        mk_extraspecial_q(&f3(), 2).map_err(|e| e.to_string())?,
        mk_suzuki_a(&FieldCtx::new(2, 3, None).map_err(|e| e.to_string())?, 1)
            .map_err(|e| e.to_string())?,
        mk_su3_sylow(2, 1).map_err(|e| e.to_string())?,
        mk_su3_sylow(2, 2).map_err(|e| e.to_string())?,
        mk_su3_sylow(3, 1).map_err(|e| e.to_string())?,
        mk_p_epsilon(),
        mk_heisenberg_q(&f9()).map_err(|e| e.to_string())?,
    ];
    for g in &cocycle_groups {
        let pairs = exhibited_gens(g).map_err(|e| e.to_string())?.pairs();
        let (_, _, r) = orbit_count_special(g, &pairs).map_err(|e| e.to_string())?;
        let count = oracle_count(&g.to_table().map_err(|e| e.to_string())?)?;
        require!(
            r == count,
            "order {}: structured r = {r}, oracle = {count}",
            g.order_string()
        );
        // The special condition re-validates from the serialized form.
        let text = cocycle_to_json(g);
        let back = crate::files::cocycle_from_json(&text).map_err(|e| e.to_string())?;
        require!(&back == g, "round trip changed the order-{} group", g.order_string());
        require!(text == cocycle_to_json(&back), "serialization not byte-stable");
        // Exponent invariant: p for odd p, 4 for the 2-groups here.
        let order = g.order_u64().ok_or("group too large to iterate")?;
        let e = if g.p == 2 { 4 } else { g.p as u64 };
        for idx in (0..order).step_by(7) {
            let x = g.elem_from_index(idx);
            require!(
                g.pow(&x, e).map_err(|e| e.to_string())? == g.identity(),
                "element {idx} violates exponent {e} in order-{} group",
                g.order_string()
            );
        }
    }
    details.push(format!(
        "structured vs oracle orbit counts agree on {} cocycle groups (orders 27..729)",
        cocycle_groups.len()
    ));

    let tables: Vec<(TableGroup, Vec<crate::groups::Perm>)> = vec![
        mk_pq_frobenius(2, 3, 1).map_err(|e| e.to_string())?,
        mk_pq_frobenius(3, 2, 1).map_err(|e| e.to_string())?,
        mk_pq_frobenius(3, 5, 1).map_err(|e| e.to_string())?,
        mk_homocyclic(2, 2).map_err(|e| e.to_string())?,
        mk_homocyclic(3, 2).map_err(|e| e.to_string())?,
    ];
    for (t, perms) in &tables {
        let v = table_3orbit(t, perms, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let count = oracle_count(t)?;
        require!(
            v.r == Some(count),
            "order {}: exhibited r = {:?}, oracle = {count}",
            t.order,
            v.r
        );
    }
    details.push(format!("table-vs-oracle agreement on {} permutation groups", tables.len()));

    // Census reports byte-stable across runs and worker counts.
    let ctx = f81();
    let one = admissible_scan(&ctx, 2, 1).map_err(|e| e.to_string())?;
    for jobs in [2usize, 3, 8] {
        let multi = admissible_scan(&ctx, 2, jobs).map_err(|e| e.to_string())?;
        require!(
            census_to_json(&one) == census_to_json(&multi),
            "census JSON differs at {jobs} jobs"
        );
    }
    let hp = trace_hyperplane(&ctx, 2).map_err(|e| e.to_string())?;
    require!(hp.dim() == 2, "trace hyperplane has dimension {}", hp.dim());
    details.push("census byte-identical at 1, 2, 3, 8 jobs".into());

    // Identity sanity for the standardization path used above.
    let g = mk_heisenberg_q(&f3()).map_err(|e| e.to_string())?;
    let (t, canonical) = symplectic_standardize(&g).map_err(|e| e.to_string())?;
    require!(
        canonical.same_table(&g) && t.is_identity(),
        "standardizing the canonical group is not the identity"
    );
    Ok((Status::Pass, details))
}

pub fn run_criterion(id: usize) -> Result<CriterionOutcome, String> {
    let run = match id {
        1 => c01,
        2 => c02,
        3 => c03,
        4 => c04,
        5 => c05,
        6 => c06,
        7 => c07,
        8 => c08,
        9 => c09,
        10 => c10,
        11 => c11,
        12 => c12,
        13 => c13,
        14 => c14,
        _ => return Err(format!("no criterion {id}")),
    };
    let (status, details) = run()?;
    Ok(CriterionOutcome { id, title: title(id), status, details })
}

/// Run the whole checklist. Items are independent; failures do not stop
/// later items. The bool is true when every item reports its expected
/// status.
pub fn run_all() -> (Vec<Result<CriterionOutcome, String>>, bool) {
    let outcomes: Vec<Result<CriterionOutcome, String>> =
        (1..=CRITERIA).map(run_criterion).collect();
    let healthy = outcomes.iter().enumerate().all(|(i, o)| match o {
        Ok(out) => out.status == expected_status(i + 1),
        Err(_) => false,
    });
    (outcomes, healthy)
}

pub fn format_line(id: usize, outcome: &Result<CriterionOutcome, String>) -> String {
    match outcome {
        Ok(out) => {
            let tag = match out.status {
                Status::Pass => "pass".to_string(),
                Status::FailAsSpecified => "FAIL-AS-SPECIFIED".to_string(),
            };
            format!("{:2}  {:<58} {}  [{}]", id, title(id), tag, out.details.join("; "))
        }
        Err(e) => format!("{:2}  {:<58} ERROR  [{e}]", id, title(id)),
    }
}
