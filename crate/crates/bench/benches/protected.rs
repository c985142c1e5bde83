use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hopfkit_bench::{random_graph, s3, s3_a3, s3_identity};
use hopfkit_core::cat_protected::{congruence_closure, protected_groupoid};
use hopfkit_core::groups::representation_variety;
use hopfkit_core::lattice::{flat_configurations, protected_set, protected_set_via_reduction};
use hopfkit_core::RibbonGraph;

fn protected_sets(c: &mut Criterion) {
    let g = s3();
    let mut group = c.benchmark_group("protected_set");
    for genus in 1..=2 {
        let graph = RibbonGraph::standard(genus);
        group.bench_with_input(BenchmarkId::new("s3_standard", genus), &graph, |b, graph| {
            b.iter(|| protected_set(graph, &g).unwrap())
        });
    }
    let graph = random_graph(1, 11);
    group.bench_function("s3_random_torus_flat", |b| b.iter(|| flat_configurations(&graph, g.as_ref())));
    group.bench_function("s3_random_torus_reduction", |b| b.iter(|| protected_set_via_reduction(&graph, &g).unwrap()));
    group.finish();
}

fn rep_variety(c: &mut Criterion) {
    let g = s3();
    c.bench_function("rep_variety_s3_genus2", |b| b.iter(|| representation_variety(g.as_ref(), 2)));
}

fn protected_groupoids(c: &mut Criterion) {
    let mut group = c.benchmark_group("protected_groupoid");
    group.sample_size(10);
    let a3 = s3_a3();
    let id = s3_identity();
    group.bench_function("s3_a3_torus", |b| b.iter(|| protected_groupoid(&a3, 1).unwrap()));
    group.bench_function("s3_identity_torus", |b| b.iter(|| protected_groupoid(&id, 1).unwrap()));
    group.bench_function("s3_a3_torus_congruence", |b| b.iter(|| congruence_closure(&a3, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, protected_sets, rep_variety, protected_groupoids);
criterion_main!(benches);
