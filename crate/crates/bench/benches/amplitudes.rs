use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nqscps::cps::{cps_amplitude, mps_correlator_value};
use nqscps::hamiltonian::tfim;
use nqscps::nqs::{nqs_amplitude, nqs_amplitude_marginal};
use nqscps::vmc::{local_estimator, metropolis_sample, MoveSet, SamplerConfig};
use nqscps::{AmplitudeSource, Config};
use nqscps_bench::{mps, neel, nqs, rbm, rvb_2x2, thermal, toric};
use std::hint::black_box;

fn amplitudes(c: &mut Criterion) {
    let mut g = c.benchmark_group("nqs");
    for n in [8, 32, 128] {
        let m = nqs(n, n / 2);
        let v = neel(n);
        g.bench_with_input(BenchmarkId::new("product", n), &n, |b, _| b.iter(|| nqs_amplitude(&m, black_box(&v))));
        let p = rbm(n, n / 2);
        g.bench_with_input(BenchmarkId::new("closed-form", n), &n, |b, _| b.iter(|| p.amplitude(black_box(&v))));
    }
    let p = rbm(10, 8);
    let v = neel(10);
    g.bench_function("marginal/10x8", |b| b.iter(|| nqs_amplitude_marginal(&p, black_box(&v))));
    g.finish();

    let mut g = c.benchmark_group("mps");
    for m in [2, 4, 6] {
        let t = mps(16, m);
        let v = neel(16);
        g.bench_with_input(BenchmarkId::new("chi", 1 << m), &m, |b, _| b.iter(|| mps_correlator_value(&t, black_box(v.bits()))));
    }
    g.finish();

    let t = thermal(16);
    let v = neel(16);
    c.bench_function("cps/thermal-16", |b| b.iter(|| cps_amplitude(&t, black_box(&v))));

    let r = rvb_2x2();
    let v: Config = "0110".parse().expect("bits");
    c.bench_function("deep/rvb-2x2", |b| b.iter(|| r.amplitude(black_box(&v))));
}

fn vmc(c: &mut Criterion) {
    let m = nqs(16, 8);
    let h = tfim(16, 1.0, 1.0, true).expect("tfim");
    let v = neel(16);
    c.bench_function("local-estimator/tfim-16", |b| b.iter(|| local_estimator(&m, &h, black_box(&v))));

    let cfg = SamplerConfig { steps: 2_000, burn_in: 100, thinning: 1, chains: 4, seed: 1 };
    c.bench_function("metropolis/nqs-16", |b| b.iter(|| metropolis_sample(&m, MoveSet::SingleFlip, &cfg, &v)));

    let t = toric(3, 3);
    let zero = Config::zeros(18);
    c.bench_function("metropolis/toric-3x3", |b| b.iter(|| metropolis_sample(&t, MoveSet::SingleFlip, &cfg, &zero)));
}

criterion_group!(benches, amplitudes, vmc);
criterion_main!(benches);
