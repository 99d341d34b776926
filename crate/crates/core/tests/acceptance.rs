//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (run with `--nocapture` to see them). Tolerances and
//! runtime bounds are pinned in code.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rootspace_core::autos::{
    aut_order, brute_force_automorphisms, diagram_automorphisms, minus_id_decomposition,
    semidirect_decompose, DynkinDiagram,
};
use rootspace_core::lieverify::{
    choice_independence, omega_image_check, realize, restricted_roots, scenario_lift, Tolerances,
};
use rootspace_core::linalg::rat;
use rootspace_core::rootsys::{build_irreducible, ComponentType, IrreducibleType};
use rootspace_core::symspace::{
    almost_killing, autw_m_orders, boundary_congruent, global_diagram, perm_groups, FactorSpec,
    SpaceSpec,
};
use rootspace_core::weighted::{
    restricted_system, weighted_diagram_automorphisms, AlgebraDescriptor, AlgebraId, Catalogue,
    VertexWeight,
};
use rootspace_core::weyl::{generate_weyl, weyl_order_closed_form, SimpleSystem};

use IrreducibleType::*;

const CERT_TOL: f64 = 1e-6;

fn catalogue_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/catalogue.txt")
}

fn finish(criterion: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "acceptance criterion {criterion} ({what}): PASS in {:.2}s (budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

/// All irreducible build types with rank in the given range. Low-rank
/// coincidences (B1, C1, C2, D2, D3) are omitted so every entry is a
/// distinct irreducible isomorphism class.
fn irreducible_types(max_rank: u32) -> Vec<(IrreducibleType, u32)> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        out.push((A, r));
        out.push((BC, r));
        if r >= 2 {
            out.push((B, r));
        }
        if r >= 3 {
            out.push((C, r));
        }
        if r >= 4 {
            out.push((D, r));
        }
    }
    if max_rank >= 2 {
        out.push((G, 2));
    }
    if max_rank >= 4 {
        out.push((F, 4));
    }
    for r in 6..=max_rank.min(8) {
        out.push((E, r));
    }
    out
}

#[test]
fn criterion_1_aut_dd_case_formula() {
    let started = Instant::now();
    for (fam, rank) in irreducible_types(8) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let dd = DynkinDiagram::new(&ss);
        let order = diagram_automorphisms(&dd).len();
        let expected = match (fam, rank) {
            (D, 4) => 6,
            (A, r) if r >= 2 => 2,
            (D, r) if r >= 5 => 2,
            (E, 6) => 2,
            _ => 1,
        };
        assert_eq!(order, expected, "|Aut(DD)| for {fam}{rank}");
    }
    finish(
        1,
        "Aut(DD) case formula, rank <= 8",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_opposition_involution_classification() {
    let started = Instant::now();
    for (fam, rank) in irreducible_types(8) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let dec = minus_id_decomposition(&ss);
        assert_eq!(dec.nontrivial.len(), 1, "{fam}{rank} irreducible");
        let expected = matches!((fam, rank), (A, r) if r >= 2)
            || matches!((fam, rank), (D, r) if r >= 5 && r % 2 == 1)
            || (fam, rank) == (E, 6);
        assert_eq!(
            dec.nontrivial[0], expected,
            "opposition involution for {fam}{rank}"
        );
        // w0 really negates the chamber.
        let w0 = &dec.w0;
        for &i in ss.positive_roots() {
            let image = w0.perm[i] as usize;
            assert!(
                !ss.is_positive(image),
                "{fam}{rank}: w0 must negate positives"
            );
        }
    }
    finish(
        2,
        "opposition involution classification",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_3_brute_force_oracle_rank_3() {
    let started = Instant::now();
    for (fam, rank) in irreducible_types(3) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let brute = brute_force_automorphisms(&ss);
        let expected = aut_order(&ss, 1_000_000).unwrap();
        assert_eq!(brute.len() as u128, expected, "{fam}{rank} |Aut|");

        // Unique semidirect decomposition: (w, s) pairs are distinct and
        // recompose to the input.
        let mut seen = BTreeSet::new();
        for f in &brute {
            let (w, s) = semidirect_decompose(f, &ss).unwrap();
            assert!(
                seen.insert((w.perm.clone(), s.map.clone())),
                "{fam}{rank}: decomposition not unique"
            );
            // Recomposition w^{-1} ∘ ŝ recovers f on every root.
            let ext = rootspace_core::autos::extend_to_linear(&s, &ss, &ss).unwrap();
            let winv = w.inverse(&ss);
            for i in 0..sys.len() {
                assert_eq!(
                    f.root_map[i], winv.perm[ext.root_map[i]] as usize,
                    "{fam}{rank}: recomposition mismatch"
                );
            }
        }
    }
    finish(
        3,
        "brute-force Aut oracle, rank <= 3",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_weyl_orders_rank_6() {
    let started = Instant::now();
    for (fam, rank) in irreducible_types(6) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let group = generate_weyl(&ss, 3_000_000).unwrap();
        let expected = weyl_order_closed_form(ComponentType::new(fam, rank)).unwrap();
        assert_eq!(group.len() as u128, expected, "|W({fam}{rank})|");
    }
    finish(
        4,
        "BFS Weyl orders vs closed forms, rank <= 6",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_weighted_discrimination() {
    let started = Instant::now();
    let catalogue = Catalogue::load(&catalogue_path()).unwrap();

    let su23 = AlgebraDescriptor(vec![AlgebraId::Su(2, 3)]);
    let sp23 = AlgebraDescriptor(vec![AlgebraId::Sp(2, 3)]);
    let verdict = rootspace_core::weighted::algebras_isomorphic(&su23, &sp23, &catalogue).unwrap();
    assert!(!verdict.isomorphic, "su(2,3) vs sp(2,3)");

    let slr = AlgebraDescriptor(vec![AlgebraId::SlR(3)]);
    let slc = AlgebraDescriptor(vec![AlgebraId::SlC(3)]);
    let verdict = rootspace_core::weighted::algebras_isomorphic(&slr, &slc, &catalogue).unwrap();
    assert!(!verdict.isomorphic, "sl(3,R) vs sl(3,C)");

    // su(r, r+n) weight pattern (2, ..., 2, (2n, 1)).
    for r in 1..=3u32 {
        for n in 1..=2u32 {
            let ws = restricted_system(
                &AlgebraDescriptor(vec![AlgebraId::Su(r, r + n)]),
                &catalogue,
            )
            .unwrap();
            let ss = SimpleSystem::standard(ws.base());
            let dd = rootspace_core::weighted::WeightedDynkinDiagram::new(&ws, &ss);
            let canon = dd.canonical_weight_vector();
            let mut expected = vec![VertexWeight::Single(2); (r - 1) as usize];
            expected.push(VertexWeight::Pair(2 * n, 1));
            assert_eq!(canon, expected, "su({r},{}) weight pattern", r + n);
        }
    }
    finish(
        5,
        "weighted discrimination and su(r,r+n) pattern",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_6_numerical_multiplicities() {
    let started = Instant::now();
    let tol = Tolerances::default();
    assert_eq!(tol.cluster, 1e-8);

    // (algebra, type, classes as (count, mult) sorted by length, g0).
    let expect: &[(AlgebraId, ComponentType, Vec<(usize, u32)>, usize)] = &[
        (AlgebraId::SlR(3), ComponentType::new(A, 2), vec![(6, 1)], 2),
        (AlgebraId::SlC(3), ComponentType::new(A, 2), vec![(6, 2)], 4),
        (
            AlgebraId::Su(1, 2),
            ComponentType::new(BC, 1),
            vec![(2, 2), (2, 1)],
            2,
        ),
        (
            AlgebraId::Su(2, 3),
            ComponentType::new(BC, 2),
            vec![(4, 2), (4, 2), (4, 1)],
            4,
        ),
        (AlgebraId::SlH(2), ComponentType::new(A, 1), vec![(2, 4)], 7),
        (
            AlgebraId::SlH(3),
            ComponentType::new(A, 2),
            vec![(6, 4)],
            11,
        ),
    ];
    for (id, ctype, classes, g0) in expect {
        let alg = realize(id).unwrap();
        let rr = restricted_roots(&alg, tol).unwrap();
        let key = rr.weighted.class_key();
        assert_eq!(key.0.len(), 1, "{id}");
        assert_eq!(key.0[0].ctype, *ctype, "{id}");
        let observed: Vec<(usize, u32)> = key.0[0].classes.iter().map(|c| (c.1, c.2)).collect();
        assert_eq!(&observed, classes, "{id} multiplicities");
        assert_eq!(rr.g0_dim, *g0, "{id} dim g0");
        // Exact bookkeeping: sum of eigenspace dimensions is an integer
        // identity, not a tolerance statement.
        let total: usize = rr.mults.iter().map(|&m| m as usize).sum();
        assert_eq!(total + rr.g0_dim, alg.dim, "{id} dim bookkeeping");
    }

    // su(2,3) simple weights (2, (2,1)) on the diagram.
    let alg = realize(&AlgebraId::Su(2, 3)).unwrap();
    let rr = restricted_roots(&alg, tol).unwrap();
    let mut weights = rr.vertex_weights.clone();
    weights.sort();
    assert_eq!(
        weights,
        vec![VertexWeight::Single(2), VertexWeight::Pair(2, 1)]
    );

    finish(
        6,
        "numerical restricted multiplicities",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_automorphism_lifting_at_desk_scale() {
    let started = Instant::now();
    let tol = Tolerances::default();
    let cases = [
        (AlgebraId::SlR(3), 12usize),
        (AlgebraId::Su(1, 2), 2),
        (AlgebraId::SlH(3), 12),
    ];
    for (id, order) in &cases {
        let alg = realize(id).unwrap();
        let rr = restricted_roots(&alg, tol).unwrap();
        let report = omega_image_check(&alg, &rr, tol).unwrap();
        assert!(
            report.surjective,
            "{id}: omega image misses {} targets",
            report.missing
        );
        assert_eq!(report.induced_order, *order, "{id} induced group order");
        assert_eq!(report.expected_order, *order, "{id} expected group order");
        assert!(
            report.max_residual <= CERT_TOL,
            "{id}: residual {} above 1e-6",
            report.max_residual
        );
    }
    // The nontrivial diagram flip is realized by an explicit automorphism
    // for sl(3,R) (split route) and sl(3,H) (theta-composition route).
    for id in [AlgebraId::SlR(3), AlgebraId::SlH(3)] {
        let alg = realize(&id).unwrap();
        let rr = restricted_roots(&alg, tol).unwrap();
        let autos = weighted_diagram_automorphisms(&rr.weighted_diagram());
        let flip = autos.iter().find(|s| !s.is_identity()).expect("A_2 flip");
        let cert = scenario_lift(&alg, &rr, flip, tol).unwrap();
        assert!(
            cert.is_valid(CERT_TOL),
            "{id} flip lift residual {}",
            cert.max_residual()
        );
    }
    finish(
        7,
        "automorphism lifts cover Aut^w(Sigma)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_8_choice_independence() {
    let started = Instant::now();
    for id in [AlgebraId::SlR(3), AlgebraId::Su(1, 2)] {
        let alg = realize(&id).unwrap();
        let report = choice_independence(&alg, 10, 0xC0FFEE, Tolerances::default()).unwrap();
        assert_eq!(report.rotations, 10);
        assert!(
            report.all_isomorphic,
            "{id}: rotated a changed the weighted class"
        );
    }
    finish(
        8,
        "choice independence under rotated a",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_9_symmetric_space_combinatorics() {
    let started = Instant::now();
    let catalogue = Catalogue::seed();
    let sl3r = |lam: i64| FactorSpec::new(AlgebraId::SlR(3), rat(lam)).unwrap();

    let spec = SpaceSpec::new(vec![sl3r(1), sl3r(1)]).unwrap();
    assert_eq!(autw_m_orders(&spec, &catalogue, 100_000).unwrap(), (288, 8));
    let spec_unequal = SpaceSpec::new(vec![sl3r(1), sl3r(2)]).unwrap();
    assert_eq!(
        autw_m_orders(&spec_unequal, &catalogue, 100_000).unwrap(),
        (144, 4)
    );

    // Boundary congruence examples.
    let single = SpaceSpec::new(vec![sl3r(1)]).unwrap();
    assert!(
        boundary_congruent(&single, &catalogue, &[0], &[1])
            .unwrap()
            .congruent
    );

    let global = global_diagram(&spec, &catalogue).unwrap();
    let v1 = global.vertex_factor.iter().position(|&f| f == 0).unwrap();
    let v2 = global.vertex_factor.iter().position(|&f| f == 1).unwrap();
    assert!(
        boundary_congruent(&spec, &catalogue, &[v1], &[v2])
            .unwrap()
            .congruent
    );
    let unequal = boundary_congruent(&spec_unequal, &catalogue, &[v1], &[v2]).unwrap();
    assert!(!unequal.congruent);

    // almost_killing agrees with the independent characterization ("equal
    // lambda within every homothety class") on 50 seeded random specs.
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let pool = [
        AlgebraId::SlR(2),
        AlgebraId::SlR(3),
        AlgebraId::SlC(2),
        AlgebraId::Su(1, 2),
        AlgebraId::Su(1, 3),
    ];
    for _ in 0..50 {
        let k = rng.random_range(1..=4);
        let factors: Vec<FactorSpec> = (0..k)
            .map(|_| {
                let id = pool[rng.random_range(0..pool.len())].clone();
                FactorSpec::new(id, rat(rng.random_range(1..=3))).unwrap()
            })
            .collect();
        let spec = SpaceSpec::new(factors).unwrap();
        let report = almost_killing(&spec, &catalogue).unwrap();
        let (iso, hom) = perm_groups(&spec, &catalogue).unwrap();
        assert_eq!(report.almost_killing, iso == hom);
        // Independent oracle: lambdas constant on each weighted-isomorphism
        // class of factors.
        let keys: Vec<_> = spec
            .0
            .iter()
            .map(|f| {
                restricted_system(&AlgebraDescriptor(vec![f.id.clone()]), &catalogue)
                    .unwrap()
                    .class_key()
            })
            .collect();
        let mut classwise = true;
        for i in 0..spec.len() {
            for j in 0..spec.len() {
                if keys[i] == keys[j] && spec.0[i].lambda != spec.0[j].lambda {
                    classwise = false;
                }
            }
        }
        assert_eq!(report.almost_killing, classwise);
    }
    finish(
        9,
        "symmetric-space combinatorics",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_10_hermetic_seed_catalogue() {
    let started = Instant::now();
    // Everything here must run against the seed only - no external file.
    let catalogue = Catalogue::seed();

    // Weighted pipeline.
    for (r, n) in [(1u32, 1u32), (2, 1), (3, 2)] {
        let ws = restricted_system(
            &AlgebraDescriptor(vec![AlgebraId::Su(r, r + n)]),
            &catalogue,
        )
        .unwrap();
        assert_eq!(ws.base().decomposition().len(), 1);
    }
    let verdict = rootspace_core::weighted::algebras_isomorphic(
        &AlgebraDescriptor(vec![AlgebraId::SlR(3)]),
        &AlgebraDescriptor(vec![AlgebraId::SlC(3)]),
        &catalogue,
    )
    .unwrap();
    assert!(!verdict.isomorphic);

    // Entries without seed weights refuse cleanly instead of guessing.
    assert!(restricted_system(&AlgebraDescriptor(vec![AlgebraId::Sp(2, 3)]), &catalogue).is_err());

    // Symmetric-space and lieverify paths are file-free by construction.
    let spec = SpaceSpec::parse("sl(3,R):1,su(1,2):1").unwrap();
    let (iso, hom) = perm_groups(&spec, &catalogue).unwrap();
    assert_eq!((iso.order(), hom.order()), (1, 1));

    let alg = realize(&AlgebraId::Su(1, 2)).unwrap();
    let rr = restricted_roots(&alg, Tolerances::default()).unwrap();
    let mut upgraded = Catalogue::seed();
    upgraded
        .verify_against(&AlgebraId::Su(1, 2), &rr.weighted)
        .unwrap();

    finish(
        10,
        "hermetic seed-catalogue run",
        started,
        Duration::from_secs(30),
    );
}
