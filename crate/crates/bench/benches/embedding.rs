use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use inertia_core::linalg::OKMatrix;
use inertia_core::padic::RingSpec;
use inertia_core::scenarios::{build_demo, Demo, DemoFamily};
use inertia_core::selftest::embed_problem;
use inertia_core::symplectic::{extend_to_g, verify_certificate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arithmetic(c: &mut Criterion) {
    let ring = RingSpec::new(5, 2, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("arithmetic");
    group.bench_function("ok_mul", |b| {
        b.iter_batched(|| (ring.random(&mut rng), ring.random(&mut rng)), |(x, y)| ring.mul(&x, &y), BatchSize::SmallInput)
    });
    group.bench_function("ok_inv", |b| {
        b.iter_batched(|| ring.add(&ring.mul_int(&ring.random(&mut rng), 5), &ring.one()), |x| ring.inv(&x).unwrap(), BatchSize::SmallInput)
    });
    group.bench_function("ok_sqrt", |b| {
        b.iter_batched(
            || {
                let x = ring.add(&ring.mul_int(&ring.random(&mut rng), 5), &ring.one());
                ring.mul(&x, &x)
            },
            |x| ring.sqrt(&x).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("inverse_8x8", |b| {
        b.iter_batched(|| OKMatrix::random_unimodular(&ring, 8, &mut rng), |m| m.inv(&ring).unwrap(), BatchSize::SmallInput)
    });
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    let Demo::Extension(ext) = build_demo(DemoFamily::C41sd5, None, 16, 0).unwrap() else { unreachable!() };
    group.bench_function("extend_c41sd5", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            extend_to_g(&ext.ring, &ext.structure, &ext.tau, &ext.form, 64, &mut rng).unwrap()
        })
    });
    for family in [DemoFamily::C3xC5, DemoFamily::C11sd5, DemoFamily::Cyclic25] {
        let Demo::Embed(p) = build_demo(family, None, 16, 0).unwrap() else { unreachable!() };
        group.bench_function(format!("embed_{family}"), |b| b.iter(|| embed_problem(black_box(&p), 0).unwrap()));
    }
    let Demo::Embed(p) = build_demo(DemoFamily::Cyclic25, None, 16, 0).unwrap() else { unreachable!() };
    let cert = embed_problem(&p, 0).unwrap();
    group.bench_function("verify_cyclic25", |b| b.iter(|| verify_certificate(black_box(&cert))));
    group.finish();
}

criterion_group!(benches, arithmetic, construction);
criterion_main!(benches);
