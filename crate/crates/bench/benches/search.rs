use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use zerosum_core::lemma::suites::dgm_exhaustive;
use zerosum_core::{
    egz_constant, max_zero_sum_free_length, sum_profile, GSequence, GroupSpec, SearchBudget, WeightSet,
};

fn profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("sum_profile");
    for n in [16u32, 64, 200] {
        let g = GroupSpec::cyclic(n);
        let a = WeightSet::new(&[1, -1, 3], &g).unwrap();
        let s = GSequence::new((0..24).map(|i| g.element_at((i * 7 + 1) % n as usize)).collect());
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| sum_profile(black_box(s), &a, &g, s.len()).unwrap())
        });
    }
    group.finish();
}

fn constants(c: &mut Criterion) {
    let g = GroupSpec::cyclic(10);
    let budget = SearchBudget::for_group(&g);
    let mut group = c.benchmark_group("search_n10");
    group.sample_size(10);
    for (name, raw) in [("singleton", vec![1]), ("pm1", vec![1, -1]), ("units", vec![1, 3, 7, 9])] {
        let a = WeightSet::new(&raw, &g).unwrap();
        group.bench_function(format!("davenport/{name}"), |b| {
            b.iter(|| max_zero_sum_free_length(&g, &a, &budget).unwrap().value)
        });
        group.bench_function(format!("egz/{name}"), |b| b.iter(|| egz_constant(&g, &a, 10, &budget).unwrap().value));
    }
    group.bench_function("davenport/singleton/no-pruning", |b| {
        let a = WeightSet::unit(&g);
        let off = budget.with_unit_pruning(false);
        b.iter(|| max_zero_sum_free_length(&g, &a, &off).unwrap().value)
    });
    group.finish();
}

fn sumset_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("dgm_exhaustive");
    group.sample_size(10);
    for spec in ["6", "2x4"] {
        let g: GroupSpec = spec.parse().unwrap();
        group.bench_function(format!("{spec}/m3"), |b| b.iter(|| dgm_exhaustive(&g, 3, g.order()).instances));
    }
    group.finish();
}

criterion_group!(benches, profile, constants, sumset_grid);
criterion_main!(benches);
