use bnc_core::bubbles::Bubble;
use bnc_core::exec::Strategy;
use bnc_core::presentations::{cncb_closure, orientation_scan, Presentation};
use bnc_core::trees::Colour;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn closure(c: &mut Criterion) {
    let gens: Vec<_> = Bubble::generators().iter().map(Bubble::to_bnc).collect();
    let mut g = c.benchmark_group("cncb_closure");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 5), &s, |b, &s| b.iter(|| cncb_closure(&gens, 5, s)));
    }
    g.finish();
}

fn normal_forms(c: &mut Criterion) {
    let p = Presentation::builtin("bulle").unwrap();
    let sys = p.coloured_system().unwrap().unwrap();
    let mut g = c.benchmark_group("normal_forms");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 6), &s, |b, &s| {
            b.iter(|| sys.count_normal_forms(6, Colour::ONE, s))
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let p = Presentation::builtin("aaa-bbb").unwrap();
    let mut g = c.benchmark_group("orientation_scan");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 5), &s, |b, &s| b.iter(|| orientation_scan(&p, 5, s).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, closure, normal_forms, scan);
criterion_main!(benches);
