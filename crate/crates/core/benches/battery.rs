use criterion::{criterion_group, criterion_main, Criterion};

use geovertex::checker::{run_suite, Config};
use geovertex::par::Strategy;

fn small(strategy: Strategy) -> Config {
    Config { window: Some(3), grades: (-1, 1), strategy, ..Config::default() }
}

fn strategies(c: &mut Criterion) {
    for suite in ["fermion", "gl-infinity", "naturality"] {
        let mut g = c.benchmark_group(suite);
        g.sample_size(10);
        for (name, s) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
            let cfg = small(s);
            g.bench_function(name, |b| b.iter(|| assert!(run_suite(suite, &cfg).is_ok())));
        }
        g.finish();
    }
}

criterion_group!(benches, strategies);
criterion_main!(benches);
