use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use virasoro_lsa::checker::{Checker, Exec};
use virasoro_lsa::exactfield::RatFun;
use virasoro_lsa::structures::{Mode, Sector, StructureSystem, Window};

fn left_symmetry(c: &mut Criterion) {
    let sector = Sector::NeveuSchwarz;
    let sys: StructureSystem<RatFun> = StructureSystem::symbolic(sector, Mode::CentralClosedForm);
    let mut group = c.benchmark_group("left_symmetry");
    group.sample_size(10);
    for n in [2u32, 4] {
        let w = Window::new(n, sector);
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let checker = Checker::new(exec);
            group.bench_with_input(BenchmarkId::new(name, n), &w, |b, w| {
                b.iter(|| checker.left_symmetry(black_box(&sys), w))
            });
        }
    }
    group.finish();
}

fn super_jacobi(c: &mut Criterion) {
    let sector = Sector::Ramond;
    let w = Window::new(3, sector);
    let mut group = c.benchmark_group("super_jacobi");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let checker = Checker::new(exec);
        group.bench_function(name, |b| b.iter(|| checker.super_jacobi::<RatFun>(sector, black_box(&w))));
    }
    group.finish();
}

criterion_group!(benches, left_symmetry, super_jacobi);
criterion_main!(benches);
