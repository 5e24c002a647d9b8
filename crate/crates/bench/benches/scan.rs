use criterion::{criterion_group, criterion_main, Criterion};
use cyclo_core::{scan_prime, scan_range, CycloParams};

fn bench_scan(c: &mut Criterion) {
    let params = CycloParams::new(157).unwrap();
    c.bench_function("scan_prime p=157", |b| b.iter(|| scan_prime(&params, 0).unwrap()));
    let mut group = c.benchmark_group("scan_range");
    group.sample_size(10);
    group.bench_function("p in [3, 199]", |b| b.iter(|| scan_range(3, 199, 0, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_scan);
criterion_main!(benches);
