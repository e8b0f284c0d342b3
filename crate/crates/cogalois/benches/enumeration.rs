//! Compares the data-parallel candidate scans against the sequential
//! baseline on the two enumeration workloads.

use cogalois::cohomology::{tower_action_system, BRUTEFORCE_CAP};
use cogalois::field::Fq;
use cogalois::poly::PolyRing;
use cogalois::tower::CyclotomicField;
use criterion::{criterion_group, criterion_main, Criterion};

fn tower(n: usize) -> CyclotomicField {
    let fq = Fq::prime(3).unwrap();
    let ring = PolyRing::new(fq.clone());
    CyclotomicField::build_tower(fq, ring.gen(), n).unwrap()
}

fn bench_bruteforce(c: &mut Criterion) {
    let l2 = tower(2);
    let sys = tower_action_system(&l2).unwrap();
    let mut group = c.benchmark_group("bruteforce_scan_t2");
    group.bench_function("seq", |b| {
        b.iter(|| sys.cocycles_bruteforce_seq(BRUTEFORCE_CAP).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| sys.cocycles_bruteforce(BRUTEFORCE_CAP).unwrap())
    });
    group.finish();
}

/// A larger licit scan: the order-3 subgroup {1 + c T^3} of the units mod T^6
/// acting on the full exponent module mod T^6 (729^2 candidates).
fn bench_bruteforce_large(c: &mut Criterion) {
    use cogalois::cohomology::ActionSystem;
    use cogalois::residue::ResidueRing;
    let fq = Fq::prime(3).unwrap();
    let ring = PolyRing::new(fq.clone());
    let t6 = ring.monomial(ring.base().one(), 6);
    let rr = ResidueRing::new(ring.clone(), t6).unwrap();
    let group: Vec<_> = (0..3u64)
        .map(|c| {
            rr.reduce(&ring.add(
                &ring.one(),
                &ring.monomial(ring.base().from_u64(c), 3),
            ))
        })
        .collect();
    let sys = ActionSystem::new(&rr, group, &rr).unwrap();
    let mut bench = c.benchmark_group("bruteforce_scan_mod_t6");
    bench.sample_size(10);
    bench.bench_function("seq", |b| {
        b.iter(|| sys.cocycles_bruteforce_seq(BRUTEFORCE_CAP).unwrap())
    });
    #[cfg(feature = "parallel")]
    bench.bench_function("par", |b| {
        b.iter(|| sys.cocycles_bruteforce(BRUTEFORCE_CAP).unwrap())
    });
    bench.finish();
}

fn bench_generator_method(c: &mut Criterion) {
    let l3 = tower(3);
    let l4 = tower(4);
    let mut group = c.benchmark_group("generator_enumeration");
    group.sample_size(20);
    group.bench_function("t3", |b| {
        b.iter(|| cogalois::cohomology::enumerate_cocycles(&l3).unwrap())
    });
    group.bench_function("t4", |b| {
        b.iter(|| cogalois::cohomology::enumerate_cocycles(&l4).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_bruteforce,
    bench_bruteforce_large,
    bench_generator_method
);
criterion_main!(benches);
