use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use zigzag::harness::{analytic_map, uniform_grid};
use zigzag::{Exec, LatticeParams};

fn intensity_maps(c: &mut Criterion) {
    let mut group = c.benchmark_group("analytic_map");
    group.sample_size(10);
    for (name, alpha1) in [("weak", 0.1), ("strong", 8.0)] {
        let params = LatticeParams::new(2.0, alpha1, 0.5, 10, 200).unwrap();
        let grid = uniform_grid(3.0, 600).unwrap();
        for (mode, exec) in [
            ("sequential", Exec::Sequential),
            ("parallel", Exec::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &exec| {
                b.iter(|| analytic_map(&params, &grid, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, intensity_maps);
criterion_main!(benches);
