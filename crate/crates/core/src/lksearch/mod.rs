//! Tours, k-opt moves and the Lin-Kernighan local search.

mod lk;
mod tour;

pub use lk::{lin_kernighan, lin_kernighan_with, LkConfig, LkStats, DEFAULT_FULL_BREADTH, DEFAULT_MAX_DEPTH};
pub use tour::{
    apply_move, apply_move_in_place, double_bridge, double_bridge_at, double_bridge_local, double_bridge_cuts, Flip, KOptMove, Tour,
    TourError,
};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bandit::SelectedCandidates;
use crate::tsplib::Instance;

/// Randomised nearest-neighbour walk over the selected candidate edges.
///
/// From a random start the walk moves to an unvisited neighbour chosen as
/// follows: an alpha-zero selected edge that also lies in `guide` when such
/// an edge exists, otherwise any selected neighbour uniformly at random,
/// otherwise the nearest unvisited city.
pub fn choose_initial_tour<R: Rng + ?Sized>(
    inst: &Instance,
    sel: &SelectedCandidates,
    rng: &mut R,
    guide: Option<&Tour>,
) -> Tour {
    let n = inst.dimension();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = rng.gen_range(0..n);
    visited[cur] = true;
    order.push(cur);
    let mut options: Vec<usize> = Vec::new();
    while order.len() < n {
        let nbrs = sel.neighbors(cur);
        options.clear();
        if let Some(g) = guide {
            let alphas = sel.neighbor_alphas(cur);
            options.extend(
                nbrs.iter()
                    .zip(alphas)
                    .map(|(&t, &a)| (t as usize, a))
                    .filter(|&(t, _)| !visited[t] && g.has_edge(cur, t))
                    .map(|(t, _)| t),
            );
        }
        if options.is_empty() {
            options.extend(nbrs.iter().map(|&t| t as usize).filter(|&t| !visited[t]));
        }
        let next = match options.choose(rng) {
            Some(&t) => t,
            None => (0..n)
                .filter(|&t| !visited[t])
                .min_by_key(|&t| (inst.distance(cur, t), t))
                .expect("an unvisited city remains"),
        };
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    Tour::from_order(inst, order).expect("walk visits every city once")
}
