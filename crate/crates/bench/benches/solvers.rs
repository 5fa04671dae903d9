use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracprog::apps::{aoi, beamforming, ee, ncut, pilot, power, secrecy};
use fracprog::rng::seeded;
use fracprog::{SolverConfig, Transform};
use fracprog_bench::{graph, mimo, network, pilot_case};
use std::hint::black_box;

fn scalar(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let link = ee::Link::default();
    c.bench_function("ee/dinkelbach", |b| b.iter(|| ee::solve_energy_efficiency(black_box(&link), &cfg).unwrap()));
    c.bench_function("ee/qt", |b| b.iter(|| ee::solve_energy_efficiency_qt(black_box(&link), &cfg).unwrap()));
    let net = secrecy::two_link_reference();
    let loose = cfg.clone().with_obj_tol(1e-4);
    c.bench_function("secrecy/qt", |b| b.iter(|| secrecy::solve_secrecy(black_box(&net), &[10.0, 10.0], &loose).unwrap()));
    let mut g = c.benchmark_group("aoi");
    for k in [3, 10] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| aoi::solve_aoi(k, 1.0, &cfg).unwrap()));
    }
    g.finish();
}

fn power_control(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("power");
    for links in [3, 9, 25] {
        let net = network(links, 1);
        let p0 = power::full_power(&net);
        g.bench_with_input(BenchmarkId::from_parameter(links), &net, |b, net| b.iter(|| power::solve_power_control(net, &p0, &cfg).unwrap()));
    }
    g.finish();
}

fn matrix(c: &mut Criterion) {
    let (inst, init) = pilot_case(3);
    let cfg = SolverConfig::default().with_max_iters(100).with_obj_tol(f64::MIN_POSITIVE);
    let mut g = c.benchmark_group("pilot-100-iters");
    g.sample_size(10);
    for variant in [Transform::Basic, Transform::Nonhomogeneous, Transform::Extrapolated] {
        g.bench_function(variant.name(), |b| b.iter(|| pilot::solve_pilot_fpp(&inst, &init, variant, &cfg).unwrap()));
    }
    g.finish();

    let inst = mimo(0);
    let v0 = beamforming::random_beams(&inst, &mut seeded(0)).unwrap();
    let cfg = SolverConfig::default().with_max_iters(100).with_obj_tol(f64::MIN_POSITIVE);
    let mut g = c.benchmark_group("beamforming-100-iters");
    g.sample_size(10);
    for variant in [Transform::Wmmse, Transform::Fplinq] {
        g.bench_function(variant.name(), |b| b.iter(|| beamforming::solve_beamforming(&inst, &v0, variant, &cfg).unwrap()));
    }
    g.finish();
}

fn clustering(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("fpc");
    for n in [10, 40] {
        let graph = graph(n, 2);
        let init = ncut::random_labels(n, 2, &mut seeded(2));
        g.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, graph| b.iter(|| ncut::solve_ncut_fpc(graph, &init, &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, scalar, power_control, matrix, clustering);
criterion_main!(benches);
