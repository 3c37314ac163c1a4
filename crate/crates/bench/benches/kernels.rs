use banditlk::bandit::{init_bandits, BanditParams, SelectedCandidates};
use banditlk::lksearch::{choose_initial_tour, double_bridge, lin_kernighan};
use banditlk::onetree::{alpha_values, minimum_one_tree};
use banditlk_bench::{fixture, random_tour};
use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIZES: [usize; 2] = [200, 1000];

fn onetree(c: &mut Criterion) {
    let mut g = c.benchmark_group("onetree");
    for n in SIZES {
        let f = fixture(n, 7);
        g.bench_with_input(BenchmarkId::new("minimum_one_tree", n), &f, |b, f| {
            b.iter(|| minimum_one_tree(&f.inst, &f.pi))
        });
        g.bench_with_input(BenchmarkId::new("alpha_values", n), &f, |b, f| {
            b.iter(|| alpha_values(&f.inst, &f.pi, 7))
        });
    }
    g.finish();
}

fn bandit(c: &mut Criterion) {
    let f = fixture(1000, 7);
    let mut state = init_bandits(&f.candidates, &BanditParams::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    c.bench_function("call_bandit/1000", |b| b.iter(|| state.call_bandit(&f.candidates, &mut rng)));
    let sel = SelectedCandidates::all(&f.candidates);
    c.bench_function("update_m/1000", |b| b.iter(|| state.update_m(&sel, 1.0)));
}

fn local_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("lk");
    g.sample_size(10);
    for n in SIZES {
        let f = fixture(n, 7);
        let sel = SelectedCandidates::all(&f.candidates);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        g.bench_with_input(BenchmarkId::new("from_candidate_walk", n), &n, |b, _| {
            b.iter_batched(
                || choose_initial_tour(&f.inst, &sel, &mut rng, None),
                |t| lin_kernighan(&f.inst, &t, &sel),
                BatchSize::SmallInput,
            )
        });
        let tour = lin_kernighan(&f.inst, &random_tour(&f.inst, 1), &sel);
        g.bench_with_input(BenchmarkId::new("double_bridge", n), &n, |b, _| {
            b.iter(|| double_bridge(&f.inst, &tour, &mut rng).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, onetree, bandit, local_search);
criterion_main!(benches);
