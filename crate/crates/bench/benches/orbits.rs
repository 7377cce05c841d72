use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use skewflow::ellis::{EllisContext, EllisElement};
use skewflow::ergodic::{birkhoff_average, weyl_sum};
use skewflow::{BigInt, CharacterVector, Generator, Phase, SkewSystem, TorusPoint};

fn orbit_stream(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_stream");
    for k in [2usize, 4, 6] {
        let s = SkewSystem::milnes(k, 1, Generator::golden()).unwrap();
        let x = TorusPoint::from_f64s(&vec![0.25; k]);
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            b.iter(|| s.orbit(&x, 10_000).unwrap().count())
        });
    }
    group.finish();
}

fn birkhoff(c: &mut Criterion) {
    let s = SkewSystem::milnes(4, 1, Generator::golden()).unwrap();
    let x = TorusPoint::from_f64s(&[0.0; 4]);
    let eta = CharacterVector::from_i64s(&[0, 0, 0, 1]);
    c.bench_function("birkhoff_1e5", |b| {
        b.iter(|| birkhoff_average(&s, &x, &eta, 100_000, None).unwrap())
    });
    c.bench_function("weyl_cubic_1e5", |b| {
        b.iter(|| weyl_sum(&[Phase::ZERO, Phase::ZERO, Phase::ZERO, Phase::sqrt2()], &[100_000]).unwrap())
    });
}

fn power_coeffs(c: &mut Criterion) {
    let s = SkewSystem::milnes(6, 1, Generator::Symbolic).unwrap();
    let n = BigInt::from(10).pow(12);
    c.bench_function("power_coeffs_k6", |b| b.iter(|| s.power_coeffs(&n)));
}

fn ellis_multiply(c: &mut Criterion) {
    let ctx = EllisContext::from_system(&SkewSystem::milnes(6, 1, Generator::Symbolic).unwrap());
    let a = EllisElement::embed_power(&ctx, &BigInt::from(123_456)).unwrap();
    let b = EllisElement::embed_power(&ctx, &BigInt::from(-98_765)).unwrap();
    c.bench_function("ellis_multiply_k6", |bench| bench.iter(|| a.multiply(&b).unwrap()));
}

criterion_group!(benches, orbit_stream, birkhoff, power_coeffs, ellis_multiply);
criterion_main!(benches);
