use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncdiff::builtins;
use ncdiff::derivations::{decompose_derivation, field_valued_space, random_fvf, GradedOp};
use ncdiff::forms::{de_rham, Omega};
use ncdiff::hochschild::CochainComplex;
use ncdiff::random::trial_rng;
use ncdiff::verify::{self, VerifyConfig};
use ncdiff::{Bimodule, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    let a = builtins::upper(2);
    for (tag, exec) in MODES {
        let cfg = VerifyConfig { truncation: 2, seed: 7, trials: 5, exec };
        g.bench_with_input(BenchmarkId::new("upper(2)", tag), &cfg, |b, cfg| b.iter(|| verify::run(&a, "upper(2)", None, cfg).unwrap()));
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    let a = builtins::matrix(2);
    let om = Omega::new(a.clone());
    let cx = CochainComplex::new(Bimodule::regular(&a));
    let basis = field_valued_space(&om, 1).unwrap();
    let op = GradedOp::j(random_fvf(&om, Some(&basis), 1, &mut trial_rng(7, 0))).materialize(&om, 2).unwrap();
    for (tag, exec) in MODES {
        g.bench_function(BenchmarkId::new("coboundary rank n=2, M_2", tag), |b| b.iter(|| cx.coboundary_rank(2, exec).unwrap()));
        g.bench_function(BenchmarkId::new("de Rham N=3, M_2", tag), |b| b.iter(|| de_rham(&om, 3, exec).unwrap()));
        g.bench_function(BenchmarkId::new("decompose j_K, M_2", tag), |b| b.iter(|| decompose_derivation(&om, &op, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, suite, kernels);
criterion_main!(benches);
