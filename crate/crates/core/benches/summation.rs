use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dixon_core::dseries::{dseries_sum, zeta_poch_euler, DSeriesSpec, SigmaFactor, Support};
use dixon_core::numerics::indexed_sum;
use dixon_core::{Execution, Precision};
use rug::Float;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_indexed_sum(c: &mut Criterion) {
    let p = Precision::default();
    let bits = p.bits();
    let mut group = c.benchmark_group("indexed_sum");
    for len in [10_000usize, 200_000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, len), &len, |b, &len| {
                b.iter(|| indexed_sum(len, |i| Float::with_val(bits, i + 1).square().recip(), exec, &p))
            });
        }
    }
    group.finish();
}

fn bench_dseries(c: &mut Criterion) {
    let p = Precision::default();
    let spec = DSeriesSpec {
        numerator: vec![SigmaFactor::new(1, 6), SigmaFactor::new(2, 4), SigmaFactor::new(1, 3)],
        denominator: vec![SigmaFactor::new(1, 6), SigmaFactor::new(1, 6), SigmaFactor::new(2, 3), SigmaFactor::new(1, 4)],
        power_exponent: 2,
        gamma: p.real(1.5),
        support: Support::All,
    };
    let tol = p.real(1e-6);
    let mut group = c.benchmark_group("dseries_sum");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| dseries_sum(black_box(&spec), &tol, 100_000, exec, &p).unwrap()));
    }
    group.finish();
}

fn bench_euler(c: &mut Criterion) {
    let p = Precision::default();
    let gamma = p.real(1.5);
    let mut group = c.benchmark_group("zeta_poch_euler");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| zeta_poch_euler(2, &gamma, 3, 100_000, exec, &p).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_indexed_sum, bench_dseries, bench_euler);
criterion_main!(benches);
