use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use schwarz_pick::par::Execution;
use schwarz_pick::verify::{run, run_property, VerifyConfig};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    if Execution::parallel_available() {
        m.push(("parallel", Execution::Parallel));
    }
    m
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    for (label, execution) in modes() {
        let cfg = VerifyConfig { execution, ..VerifyConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| b.iter(|| run(cfg).unwrap()));
    }
    group.finish();
}

fn single_properties(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_property");
    group.sample_size(10);
    for name in ["hdq.schwarz_pick", "pick.verdict_agreement", "bounds.region_sharpness"] {
        for (label, execution) in modes() {
            let cfg = VerifyConfig { samples: 1000, execution, ..VerifyConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, label), &cfg, |b, cfg| {
                b.iter(|| run_property(name, cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suite, single_properties);
criterion_main!(benches);
