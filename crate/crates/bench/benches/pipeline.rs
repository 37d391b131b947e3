use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dagfoci_core::sem::{builtin, sample};
use dagfoci_core::{dag_foci, foci_select, Builtin, ColumnSelection, DagFociConfig};

fn example1(c: &mut Criterion) {
    let spec = builtin(Builtin::Example1);
    let mut group = c.benchmark_group("example1_x6");
    group.sample_size(10);
    for n in [1_000, 4_000] {
        let d = sample(&spec, n, 7).unwrap();
        let target = d.column_index("X6").unwrap();
        let sel = ColumnSelection::all_others(target, d.n_cols()).unwrap();
        group.bench_with_input(BenchmarkId::new("foci", n), &n, |b, _| {
            b.iter(|| foci_select(&d, &sel, 0, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dag_foci", n), &n, |b, _| {
            b.iter(|| dag_foci(&d, target, &DagFociConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, example1);
criterion_main!(benches);
