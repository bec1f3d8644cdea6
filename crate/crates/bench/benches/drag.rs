use std::hint::black_box;

use annmax_bench::{drag_queries, fixture};
use annmax_core::DragIndex;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn drag(c: &mut Criterion) {
    let mut group = c.benchmark_group("drag");
    for n in [10_000, 100_000, 1_000_000] {
        let f = fixture(n, 1, 0, 6);
        let idx = DragIndex::build(&f.points).unwrap();
        let queries = drag_queries(256, n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &queries, |b, qs| {
            let mut i = 0;
            b.iter(|| {
                i = (i + 1) % qs.len();
                idx.drag(black_box(&qs[i])).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, drag);
criterion_main!(benches);
