use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toric_lc::exec::Exec;
use toric_lc::fixtures;
use toric_lc::lc::{lc_orbit, OrbitOptions};
use toric_lc::surface::default_phi;

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("lc_orbit");
    group.sample_size(10);
    for (name, json) in [
        ("tetriamond", fixtures::TETRIAMOND),
        ("pentomino", fixtures::PENTOMINO),
    ] {
        let (_, g) = default_phi(&fixtures::setup(json).unwrap()).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let opts = OrbitOptions {
                exec,
                ..OrbitOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &g, |b, g| {
                b.iter(|| lc_orbit(g, &opts).unwrap().len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, orbits);
criterion_main!(benches);
