use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use genfermat::arrangement::random_parameter;
use genfermat::fermatgroup::{canonical_generators, subgroup_acts_freely, GfmType};
use genfermat::modaction::{orbit_and_stabilizer, DEFAULT_BUDGET};
use genfermat::Exec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    if cfg!(feature = "parallel") {
        v.push(("parallel", Exec::Parallel));
    }
    v
}

fn orbit_enumeration(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("orbit_and_stabilizer");
    group.sample_size(10);
    for (d, n) in [(1, 5), (2, 6), (2, 7)] {
        let p = random_parameter(d, n, &mut rng);
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, format!("d{d}_n{n}")), &p, |b, p| {
                b.iter(|| orbit_and_stabilizer(black_box(p), DEFAULT_BUDGET, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn subgroup_freeness(c: &mut Criterion) {
    let mut group = c.benchmark_group("subgroup_acts_freely");
    group.sample_size(10);
    for (d, k, n) in [(2, 2, 12), (2, 3, 9)] {
        let t = GfmType::new(d, k, n).unwrap();
        let sub = canonical_generators(k, n).unwrap()[..n - 1].to_vec();
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, t.to_string()), &sub, |b, sub| {
                b.iter(|| subgroup_acts_freely(black_box(sub), &t, DEFAULT_BUDGET, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, orbit_enumeration, subgroup_freeness);
criterion_main!(benches);
