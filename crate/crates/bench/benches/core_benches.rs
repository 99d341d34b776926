use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rootspace_core::autos::{diagram_automorphisms, DynkinDiagram};
use rootspace_core::lieverify::{realize, restricted_roots, Tolerances};
use rootspace_core::rootsys::{build_irreducible, IrreducibleType};
use rootspace_core::weighted::AlgebraId;
use rootspace_core::weyl::{generate_weyl, longest_element, SimpleSystem};

fn weyl_enumeration(c: &mut Criterion) {
    let sys = build_irreducible(IrreducibleType::B, 4).unwrap();
    let ss = SimpleSystem::standard(&sys);
    c.bench_function("weyl_bfs_b4", |b| {
        b.iter(|| black_box(generate_weyl(&ss, 1_000_000).unwrap().len()))
    });

    let f4 = build_irreducible(IrreducibleType::F, 4).unwrap();
    let ss_f4 = SimpleSystem::standard(&f4);
    c.bench_function("longest_element_f4", |b| {
        b.iter(|| black_box(longest_element(&ss_f4).length()))
    });
}

fn diagram_search(c: &mut Criterion) {
    let sys = build_irreducible(IrreducibleType::D, 4).unwrap();
    let ss = SimpleSystem::standard(&sys);
    let dd = DynkinDiagram::new(&ss);
    c.bench_function("diagram_automorphisms_d4", |b| {
        b.iter(|| black_box(diagram_automorphisms(&dd).len()))
    });
}

fn restricted_decomposition(c: &mut Criterion) {
    let alg = realize(&AlgebraId::SlR(3)).unwrap();
    c.bench_function("restricted_roots_sl3r", |b| {
        b.iter(|| black_box(restricted_roots(&alg, Tolerances::default()).unwrap().len()))
    });
}

criterion_group!(
    benches,
    weyl_enumeration,
    diagram_search,
    restricted_decomposition
);
criterion_main!(benches);
