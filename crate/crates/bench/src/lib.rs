//! Benchmark fixtures.

use banditlk::candidates::{build_candidate_sets, CandidateSet};
use banditlk::lksearch::Tour;
use banditlk::onetree::{alpha_values, held_karp_ascent, PiVector};
use banditlk::tsplib::{Instance, WeightKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform random points in a 10^4 square, rounded Euclidean weights.
pub fn uniform_instance(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|_| [rng.gen_range(0.0..10_000.0), rng.gen_range(0.0..10_000.0)])
        .collect();
    Instance::from_coords(format!("uniform{n}"), WeightKind::Euc2d, pts).expect("valid coordinates")
}

/// Instance with tuned penalties and its candidate set.
pub struct Fixture {
    pub inst: Instance,
    pub pi: PiVector,
    pub candidates: CandidateSet,
}

pub fn fixture(n: usize, c_max: usize) -> Fixture {
    let inst = uniform_instance(n, 7);
    let pi = held_karp_ascent(&inst, 100).pi;
    let candidates = build_candidate_sets(&alpha_values(&inst, &pi, c_max), c_max).expect("enough neighbours");
    Fixture { inst, pi, candidates }
}

pub fn random_tour(inst: &Instance, seed: u64) -> Tour {
    let mut order: Vec<usize> = (0..inst.dimension()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Tour::from_order(inst, order).expect("permutation")
}
