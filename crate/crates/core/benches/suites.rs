use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twistfib::par::Execution;
use twistfib::suite::{run, SuiteSpec};

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (id, reps) in [("prop-5.1", 100), ("thm-7.4", 30), ("prop-A.12", 10)] {
        for (name, exec) in [
            ("parallel", Execution::Parallel),
            ("sequential", Execution::Sequential),
        ] {
            let spec = SuiteSpec {
                reps,
                exec,
                ..SuiteSpec::new(id, 1).expect("registered")
            };
            group.bench_with_input(BenchmarkId::new(name, id), &spec, |b, spec| {
                b.iter(|| black_box(run(spec).expect("runs")))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
