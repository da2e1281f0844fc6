use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use powertail::diversity::{mrc_outage_generic, mrc_outage_powerlaw, sc_outage, BranchSet};
use powertail::models::*;
use powertail::montecarlo::{estimate_tail, SampleSpec};
use std::hint::black_box;

fn models() -> Vec<ChannelModel> {
    vec![
        Rayleigh::new(1.0).into(),
        Rician::new(5.0, 1.0).into(),
        Twdp::new(10.0, 0.9, 1.0).into(),
        Nakagami::new(2.0, 1.0).into(),
        KappaMu::new(3.9, 2.0, 1.0).into(),
        KappaMuM::new(3.9, 2.0, 0.25, 1.0).into(),
        KappaMuAlpha::new(3.9, 2.0, 1.5, 1.0).into(),
        Suzuki::with_mean_power(6.0, 1.0).into(),
        LogNormal::with_mean_power(6.0, 1.0).into(),
        CascadedRayleigh::new(0.5, 1.0).into(),
        ThreeWave::new(1.0, 0.7914, 0.2126).into(),
    ]
}

fn exact_cdf(c: &mut Criterion) {
    let mut g = c.benchmark_group("cdf");
    for m in models() {
        g.bench_with_input(BenchmarkId::from_parameter(m.name()), &m, |b, m| {
            b.iter(|| m.cdf(black_box(1e-3)).unwrap())
        });
    }
    g.finish();
}

fn tail_and_bound(c: &mut Criterion) {
    let m: ChannelModel = KappaMu::new(3.9, 2.0, 1.0).into();
    c.bench_function("tail_approx/KappaMu", |b| b.iter(|| m.tail_approx(black_box(1e-4)).unwrap()));
    c.bench_function("validity_bound/KappaMu", |b| b.iter(|| m.validity_bound(black_box(0.1)).unwrap()));
    let cas: ChannelModel = CascadedRayleigh::new(0.5, 1.0).into();
    c.bench_function("invert_tail/CascadedRayleigh", |b| b.iter(|| cas.invert_tail(black_box(1e-6)).unwrap()));
}

fn diversity(c: &mut Criterion) {
    let set = BranchSet::new(vec![
        Rayleigh::new(1.0).into(),
        Nakagami::new(2.0, 2.0).into(),
        Rician::new(5.0, 0.5).into(),
        LogNormal::with_mean_power(6.0, 1.0).into(),
    ])
    .unwrap();
    let laws = BranchSet::iid(Nakagami::new(2.0, 1.0).into(), 8).unwrap().power_laws().unwrap();
    c.bench_function("sc_outage/M4", |b| b.iter(|| sc_outage(&set, black_box(1e-2)).unwrap()));
    c.bench_function("mrc_powerlaw/M8", |b| b.iter(|| mrc_outage_powerlaw(&laws, black_box(1e-2)).unwrap()));
    c.bench_function("mrc_generic/M4", |b| b.iter(|| mrc_outage_generic(&set, black_box(1e-2)).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimate_tail_1e5");
    g.sample_size(10);
    let th = [1e-4, 1e-3, 1e-2, 1e-1];
    for m in [
        ChannelModel::from(Rayleigh::new(1.0)),
        KappaMu::new(3.9, 2.0, 1.0).into(),
        Twdp::new(10.0, 0.9, 1.0).into(),
    ] {
        let spec = SampleSpec::new(m, 100_000, 1);
        g.bench_with_input(BenchmarkId::from_parameter(m.name()), &spec, |b, s| {
            b.iter(|| estimate_tail(s, &th).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, exact_cdf, tail_and_bound, diversity, sampling);
criterion_main!(benches);
