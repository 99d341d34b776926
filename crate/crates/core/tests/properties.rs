//! Cross-module property suites: independent oracles for decomposition,
//! Weyl group canonical forms, diagram-extension verification, catalogue
//! invariants, and the numerical/exact bridge.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use rootspace_core::autos::{
    diagram_automorphisms, diagram_isomorphisms, extend_to_linear, is_killing_isometry,
    DynkinDiagram,
};
use rootspace_core::lieverify::{realize, restricted_roots, Tolerances};
use rootspace_core::linalg::{rat, Vector};
use rootspace_core::rootsys::{
    build_irreducible, direct_sum, ComponentType, IrreducibleType, RootSystem,
};
use rootspace_core::weighted::{
    expand_entry, restricted_system, weighted_diagram_automorphisms, weighted_isomorphisms,
    AlgebraDescriptor, AlgebraId, Catalogue, Provenance, WeightedDynkinDiagram, WeightedRootSystem,
};
use rootspace_core::weyl::{generate_weyl, to_dominant, SimpleSystem};

use IrreducibleType::*;

fn catalogue_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/catalogue.txt")
}

fn all_build_types(max_rank: u32) -> Vec<(IrreducibleType, u32)> {
    let mut out = Vec::new();
    for fam in [A, B, C, D, BC] {
        let lo = if fam == D { 2 } else { 1 };
        for r in lo..=max_rank {
            out.push((fam, r));
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

/// The multiset a direct sum must decompose into: the concatenation of the
/// parts' own component multisets (which canonicalizes B1/C1/C2/D2/D3).
fn expected_multiset(parts: &[RootSystem]) -> Vec<ComponentType> {
    let mut tags: Vec<ComponentType> = parts
        .iter()
        .flat_map(|p| p.decomposition().type_multiset())
        .collect();
    tags.sort();
    tags
}

#[test]
fn decompose_recovers_direct_sums() {
    // Singletons up to rank 8.
    for (fam, rank) in all_build_types(8) {
        let sys = build_irreducible(fam, rank).unwrap();
        assert_eq!(
            sys.decomposition().type_multiset(),
            expected_multiset(std::slice::from_ref(&sys)),
            "{fam}{rank}"
        );
    }
    // Exhaustive pairs with total rank <= 8.
    let types = all_build_types(7);
    for (i, &(f1, r1)) in types.iter().enumerate() {
        for &(f2, r2) in &types[i..] {
            if r1 + r2 > 8 {
                continue;
            }
            let a = build_irreducible(f1, r1).unwrap();
            let b = build_irreducible(f2, r2).unwrap();
            let sum = direct_sum(&[a.clone(), b.clone()]).unwrap();
            assert_eq!(
                sum.decomposition().type_multiset(),
                expected_multiset(&[a, b]),
                "{f1}{r1} + {f2}{r2}"
            );
        }
    }
    // Exhaustive triples with total rank <= 6.
    let small = all_build_types(4);
    for (i, &(f1, r1)) in small.iter().enumerate() {
        for (j, &(f2, r2)) in small.iter().enumerate().skip(i) {
            for &(f3, r3) in &small[j..] {
                if r1 + r2 + r3 > 6 {
                    continue;
                }
                let parts = vec![
                    build_irreducible(f1, r1).unwrap(),
                    build_irreducible(f2, r2).unwrap(),
                    build_irreducible(f3, r3).unwrap(),
                ];
                let sum = direct_sum(&parts).unwrap();
                assert_eq!(
                    sum.decomposition().type_multiset(),
                    expected_multiset(&parts),
                    "{f1}{r1} + {f2}{r2} + {f3}{r3}"
                );
            }
        }
    }
}

/// Brute-force equivalence oracle: transitive closure of the "not
/// orthogonal" relation over the Gram matrix must give the same partition
/// as the chain decomposition.
#[test]
fn decompose_agrees_with_transitive_closure() {
    let mut samples: Vec<RootSystem> = vec![
        build_irreducible(B, 3).unwrap(),
        build_irreducible(E, 6).unwrap(),
        direct_sum(&[
            build_irreducible(A, 2).unwrap(),
            build_irreducible(G, 2).unwrap(),
        ])
        .unwrap(),
        direct_sum(&[
            build_irreducible(A, 1).unwrap(),
            build_irreducible(A, 1).unwrap(),
            build_irreducible(BC, 2).unwrap(),
        ])
        .unwrap(),
        direct_sum(&[
            build_irreducible(BC, 3).unwrap(),
            build_irreducible(C, 3).unwrap(),
        ])
        .unwrap(),
    ];
    samples.push(build_irreducible(F, 4).unwrap());
    for sys in &samples {
        let n = sys.len();
        // Boolean reachability closure.
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = i == j || !sys.root(i).dot(sys.root(j)).eq(&rat(0));
            }
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        reach[i][j] |= reach[k][j];
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(
                    reach[i][j],
                    sys.component_of(i) == sys.component_of(j),
                    "closure oracle disagrees at ({i},{j})"
                );
            }
        }
    }
}

#[test]
fn positive_roots_are_nonneg_integer_combinations_of_simples() {
    use num::Signed;
    for (fam, rank) in all_build_types(6) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        for &i in ss.positive_roots() {
            for c in ss.simple_coords(i) {
                assert!(
                    c.is_integer() && !c.is_negative(),
                    "{fam}{rank}: root {i} has coordinate {c}"
                );
            }
        }
    }
}

#[test]
fn doubled_roots_only_in_bc() {
    for (fam, rank) in all_build_types(6) {
        let sys = build_irreducible(fam, rank).unwrap();
        let doubles = (0..sys.len())
            .filter(|&i| sys.is_divisible_double(i))
            .count();
        if fam == BC {
            // The 2r short roots double (r positive ones and their
            // negatives).
            assert_eq!(doubles, 2 * rank as usize, "{fam}{rank}");
        } else {
            assert_eq!(doubles, 0, "{fam}{rank}");
        }
    }
}

#[test]
fn weyl_groups_of_b_c_bc_share_the_arrangement() {
    // W(B_r), W(C_r) and W(BC_r) are the same matrix group (the reflection
    // hyperplanes coincide).
    for rank in [2u32, 3] {
        let mut groups = Vec::new();
        for fam in [B, C, BC] {
            let sys = build_irreducible(fam, rank).unwrap();
            let ss = SimpleSystem::standard(&sys);
            let set: BTreeSet<Vec<Vector>> = generate_weyl(&ss, 10_000)
                .unwrap()
                .iter()
                .map(|w| {
                    let m = w.matrix(&ss);
                    (0..m.ncols).map(|j| m.column(j)).collect()
                })
                .collect();
            groups.push(set);
        }
        assert_eq!(groups[0], groups[1], "B{rank} vs C{rank}");
        assert_eq!(groups[0], groups[2], "B{rank} vs BC{rank}");
    }
}

#[test]
fn to_dominant_recovers_dominant_representatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for (fam, rank) in all_build_types(6) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        // A strictly dominant vector: the sum of the positive roots.
        let u = ss
            .positive_roots()
            .iter()
            .fold(Vector::zero(sys.dim()), |acc, &i| &acc + sys.root(i));
        for _ in 0..100 {
            // Random Weyl element as a random word.
            let len = rng.random_range(0..=2 * ss.positive_roots().len());
            let mut v = u.clone();
            for _ in 0..len {
                let i = rng.random_range(0..ss.rank());
                let alpha = sys.root(ss.simple_roots()[i]);
                let n = rat(2) * v.dot(alpha) / alpha.norm_sq();
                v = &v - &alpha.scale(&n);
            }
            let (dominant, w) = to_dominant(&ss, &v);
            assert_eq!(dominant, u, "{fam}{rank}: orbit representative");
            assert_eq!(w.apply(&ss, &v), u, "{fam}{rank}: witness acts correctly");
        }
    }
}

#[test]
fn simple_transitivity_at_rank_3() {
    for (fam, rank) in all_build_types(3) {
        let sys = build_irreducible(fam, rank).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let group = generate_weyl(&ss, 10_000).unwrap();
        let mut images = BTreeSet::new();
        for w in &group {
            let image: BTreeSet<usize> = ss
                .simple_roots()
                .iter()
                .map(|&i| w.perm[i] as usize)
                .collect();
            assert!(images.insert(image.clone()), "{fam}{rank}: w(Λ) repeated");
            // w(Λ) is the simple system of the chamber containing w(v0).
            let moved = w.apply(&ss, ss.regular_vector());
            let ss2 = SimpleSystem::new(&sys, &moved).unwrap();
            let expected: BTreeSet<usize> = ss2.simple_roots().iter().copied().collect();
            assert_eq!(image, expected, "{fam}{rank}");
        }
        assert_eq!(
            images.len(),
            group.len(),
            "{fam}{rank}: each simple system once"
        );
    }
}

#[test]
fn diagram_extensions_verify_for_all_type_pairs_rank_4() {
    let types = all_build_types(4);
    for &(f1, r1) in &types {
        let s1 = build_irreducible(f1, r1).unwrap();
        let ss1 = SimpleSystem::standard(&s1);
        let dd1 = DynkinDiagram::new(&ss1);
        for &(f2, r2) in &types {
            let s2 = build_irreducible(f2, r2).unwrap();
            let ss2 = SimpleSystem::standard(&s2);
            let dd2 = DynkinDiagram::new(&ss2);
            for iso in diagram_isomorphisms(&dd1, &dd2) {
                // extend_to_linear re-verifies the extension property at
                // runtime; an error here is a hard failure.
                let ext = extend_to_linear(&iso, &ss1, &ss2).unwrap();
                assert_eq!(ext.root_map.len(), s1.len());
            }
        }
    }
}

#[test]
fn automorphisms_of_irreducibles_are_isometries() {
    // Conformal factor 1 on every diagram-automorphism extension of an
    // irreducible system.
    for (fam, rank) in all_build_types(4) {
        let sys = build_irreducible(fam, rank).unwrap();
        if sys.decomposition().len() != 1 {
            continue;
        }
        let ss = SimpleSystem::standard(&sys);
        let dd = DynkinDiagram::new(&ss);
        for s in diagram_automorphisms(&dd) {
            let ext = extend_to_linear(&s, &ss, &ss).unwrap();
            assert_eq!(ext.conformal_sq, vec![rat(1)], "{fam}{rank}");
        }
    }
}

#[test]
fn weighted_isomorphisms_are_killing_isometries() {
    // A weighted system and a rescaled copy: every weighted isomorphism is
    // an isometry after Killing normalization.
    let a2 = build_irreducible(A, 2).unwrap();
    let scaled = RootSystem::new(3, a2.roots().iter().map(|r| r.scale(&rat(5))).collect()).unwrap();
    let ws1 = WeightedRootSystem::new(a2.clone(), vec![3; 6]).unwrap();
    let ws2 = WeightedRootSystem::new(scaled.clone(), vec![3; 6]).unwrap();
    let isos = weighted_isomorphisms(&ws1, &ws2, 1000).unwrap();
    assert_eq!(isos.len(), 12);
    for iso in &isos {
        assert!(is_killing_isometry(iso, &a2, &scaled));
    }
}

#[test]
fn catalogue_diagram_automorphisms_all_preserve_weights() {
    // For every irreducible catalogue entry, every diagram automorphism is
    // weighted: |Aut^w(DD)| = |Aut(DD)|.
    let catalogue = Catalogue::load(&catalogue_path()).unwrap();
    let mut checked = 0;
    for entry in catalogue.entries() {
        if entry.weights.is_none() {
            continue;
        }
        let ws = expand_entry(entry).unwrap();
        let ss = SimpleSystem::standard(ws.base());
        let wdd = WeightedDynkinDiagram::new(&ws, &ss);
        let unweighted = diagram_automorphisms(&wdd.base).len();
        let weighted = weighted_diagram_automorphisms(&wdd).len();
        assert_eq!(weighted, unweighted, "{}", entry.id);
        checked += 1;
    }
    assert!(checked >= 20, "catalogue should provide a real sample");
    // And the file provides at least 6 families.
    assert!(catalogue.loaded_families().len() >= 6);
}

#[test]
fn lieverify_upgrades_catalogue_provenance() {
    let mut catalogue = Catalogue::load(&catalogue_path()).unwrap();
    let tol = Tolerances::default();
    // Machine-verify the desk-scale algebras, external-reference rows
    // included (sl(n,H)).
    for id in [
        AlgebraId::SlR(3),
        AlgebraId::SlC(3),
        AlgebraId::Su(1, 2),
        AlgebraId::Su(2, 3),
        AlgebraId::SlH(2),
        AlgebraId::SlH(3),
    ] {
        let alg = realize(&id).unwrap();
        let rr = restricted_roots(&alg, tol).unwrap();
        catalogue.verify_against(&id, &rr.weighted).unwrap();
        assert_eq!(
            catalogue.lookup(&id).unwrap().provenance,
            Provenance::MachineVerified,
            "{id}"
        );
    }
}

#[test]
fn numerical_and_catalogue_systems_agree() {
    // The numerically recovered weighted system matches the catalogue
    // expansion exactly (class keys), for every realizable catalogued id.
    let catalogue = Catalogue::load(&catalogue_path()).unwrap();
    let tol = Tolerances::default();
    for id in [
        AlgebraId::SlR(2),
        AlgebraId::SlR(3),
        AlgebraId::SlR(4),
        AlgebraId::SlC(2),
        AlgebraId::SlC(3),
        AlgebraId::Su(1, 2),
        AlgebraId::Su(1, 3),
        AlgebraId::Su(2, 2),
        AlgebraId::Su(2, 3),
        AlgebraId::SlH(2),
        AlgebraId::SlH(3),
    ] {
        let alg = realize(&id).unwrap();
        let rr = restricted_roots(&alg, tol).unwrap();
        let expected = restricted_system(&AlgebraDescriptor(vec![id.clone()]), &catalogue)
            .unwrap()
            .class_key();
        assert_eq!(rr.weighted.class_key(), expected, "{id}");
    }
}

#[test]
fn symspace_isometry_group_is_contained_in_homothety_group() {
    use rootspace_core::symspace::{perm_groups, FactorSpec, SpaceSpec};
    let catalogue = Catalogue::seed();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool = [
        AlgebraId::SlR(2),
        AlgebraId::SlR(3),
        AlgebraId::Su(1, 2),
        AlgebraId::SlC(2),
    ];
    for _ in 0..30 {
        let k = rng.random_range(1..=4);
        let spec = SpaceSpec::new(
            (0..k)
                .map(|_| {
                    FactorSpec::new(
                        pool[rng.random_range(0..pool.len())].clone(),
                        rat(rng.random_range(1..=2)),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let (iso, hom) = perm_groups(&spec, &catalogue).unwrap();
        for e in &iso.elements {
            assert!(hom.contains(e));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Serialization round trip across random direct sums of small types.
    #[test]
    fn json_round_trip(parts in prop::collection::vec((0usize..10, 1u32..4), 1..3)) {
        let menu = [A, B, C, D, BC, G, F, A, B, BC];
        let mut systems = Vec::new();
        for (fi, rank) in parts {
            let fam = menu[fi];
            let rank = match fam {
                G => 2,
                F => 4,
                D => rank.max(2),
                _ => rank,
            };
            systems.push(build_irreducible(fam, rank).unwrap());
        }
        let sum = direct_sum(&systems).unwrap();
        let doc = sum.to_json().unwrap();
        let back = RootSystem::from_json(&doc).unwrap();
        prop_assert_eq!(back.roots(), sum.roots());
    }

    /// to_dominant always lands in the closed chamber and the witness maps
    /// the input onto the output.
    #[test]
    fn to_dominant_lands_dominant(coords in prop::collection::vec(-6i64..6, 3)) {
        let sys = build_irreducible(B, 3).unwrap();
        let ss = SimpleSystem::standard(&sys);
        let v = Vector::from_ints(&coords);
        let (dominant, w) = to_dominant(&ss, &v);
        prop_assert!(ss.is_dominant(&dominant));
        prop_assert_eq!(w.apply(&ss, &v), dominant);
    }
}
