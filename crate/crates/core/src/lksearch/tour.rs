use rand::Rng;
use thiserror::Error;

use crate::tsplib::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TourError {
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("stored length {stored} differs from recomputed {actual}")]
    LengthMismatch { stored: i64, actual: i64 },
    #[error("infeasible move: {0}")]
    InfeasibleMove(String),
    #[error("double bridge needs at least 8 cities, got {0}")]
    TooSmall(usize),
}

/// Record of one segment reversal, enough to undo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flip {
    i: usize,
    j: usize,
    delta: i64,
}

/// A Hamiltonian cycle stored as an order array plus its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<u32>,
    pos: Vec<u32>,
    length: i64,
}

impl Tour {
    pub fn from_order(inst: &Instance, order: Vec<usize>) -> Result<Self, TourError> {
        let n = inst.dimension();
        if order.len() != n {
            return Err(TourError::NotAPermutation(n));
        }
        let mut pos = vec![u32::MAX; n];
        for (k, &c) in order.iter().enumerate() {
            if c >= n || pos[c] != u32::MAX {
                return Err(TourError::NotAPermutation(n));
            }
            pos[c] = k as u32;
        }
        let length = inst.tour_length(&order);
        Ok(Tour {
            order: order.into_iter().map(|c| c as u32).collect(),
            pos,
            length,
        })
    }

    /// The identity permutation `0, 1, ..., n-1`.
    pub fn identity(inst: &Instance) -> Self {
        Self::from_order(inst, (0..inst.dimension()).collect()).expect("identity is a permutation")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub fn length(&self) -> i64 {
        self.length
    }

    pub fn order(&self) -> Vec<usize> {
        self.order.iter().map(|&c| c as usize).collect()
    }

    #[inline]
    pub fn city_at(&self, k: usize) -> usize {
        self.order[k] as usize
    }

    #[inline]
    pub fn pos(&self, c: usize) -> usize {
        self.pos[c] as usize
    }

    #[inline]
    pub fn next(&self, c: usize) -> usize {
        let p = self.pos[c] as usize + 1;
        self.order[if p == self.order.len() { 0 } else { p }] as usize
    }

    #[inline]
    pub fn prev(&self, c: usize) -> usize {
        let p = self.pos[c] as usize;
        self.order[if p == 0 { self.order.len() - 1 } else { p - 1 }] as usize
    }

    /// Whether `b` lies on the forward path from `a` to `c` (inclusive).
    #[inline]
    pub fn between(&self, a: usize, b: usize, c: usize) -> bool {
        let (pa, pb, pc) = (self.pos[a], self.pos[b], self.pos[c]);
        if pa <= pc {
            pa <= pb && pb <= pc
        } else {
            pb >= pa || pb <= pc
        }
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.next(a) == b || self.prev(a) == b
    }

    /// Checks the permutation and recomputes the length.
    pub fn validate(&self, inst: &Instance) -> Result<(), TourError> {
        let n = self.order.len();
        if n != inst.dimension() || self.pos.len() != n {
            return Err(TourError::NotAPermutation(inst.dimension()));
        }
        for (k, &c) in self.order.iter().enumerate() {
            if c as usize >= n || self.pos[c as usize] as usize != k {
                return Err(TourError::NotAPermutation(n));
            }
        }
        let actual = inst.tour_length(&self.order());
        if actual != self.length {
            return Err(TourError::LengthMismatch {
                stored: self.length,
                actual,
            });
        }
        Ok(())
    }

    /// Reverses positions `i..=j` (cyclically), or the complementary range
    /// when that one is shorter. Either yields the same cycle.
    fn reverse_positions(&mut self, i: usize, j: usize) {
        let n = self.order.len();
        let inner = (j + n - i) % n + 1;
        let (mut a, mut b, len) = if 2 * inner <= n {
            (i, j, inner)
        } else {
            ((j + 1) % n, (i + n - 1) % n, n - inner)
        };
        for _ in 0..len / 2 {
            let (ca, cb) = (self.order[a], self.order[b]);
            self.order[a] = cb;
            self.order[b] = ca;
            self.pos[cb as usize] = a as u32;
            self.pos[ca as usize] = b as u32;
            a = if a + 1 == n { 0 } else { a + 1 };
            b = if b == 0 { n - 1 } else { b - 1 };
        }
    }

    /// 2-opt move: with `b = next(a)` and `d = next(c)`, replaces edges
    /// `(a,b)` and `(c,d)` by `(a,c)` and `(b,d)`.
    pub fn two_opt_move(&mut self, inst: &Instance, a: usize, b: usize, c: usize, d: usize) -> Flip {
        debug_assert_eq!(self.next(a), b);
        debug_assert_eq!(self.next(c), d);
        let delta = inst.distance(a, c) + inst.distance(b, d) - inst.distance(a, b) - inst.distance(c, d);
        let (i, j) = (self.pos(b), self.pos(c));
        self.reverse_positions(i, j);
        self.length += delta;
        Flip { i, j, delta }
    }

    /// Reverts a flip; flips must be undone in reverse order.
    pub fn undo_flip(&mut self, f: Flip) {
        self.reverse_positions(f.i, f.j);
        self.length -= f.delta;
    }

    /// Replaces the tour's edges `removed` by `added`, rebuilding the order.
    /// `length` is set to `self.length - gain` without recomputation.
    pub(crate) fn rebuild(&mut self, removed: &[(usize, usize)], added: &[(usize, usize)], gain: i64) -> Result<(), TourError> {
        let n = self.n();
        let mut adj: Vec<[u32; 2]> = (0..n)
            .map(|c| [self.prev(c) as u32, self.next(c) as u32])
            .collect();
        let drop = |adj: &mut Vec<[u32; 2]>, a: usize, b: usize| -> Result<(), TourError> {
            let slot = adj[a]
                .iter()
                .position(|&x| x == b as u32)
                .ok_or_else(|| TourError::InfeasibleMove(format!("({a},{b}) is not a tour edge")))?;
            adj[a][slot] = u32::MAX;
            Ok(())
        };
        for &(a, b) in removed {
            drop(&mut adj, a, b)?;
            drop(&mut adj, b, a)?;
        }
        for &(a, b) in added {
            if a == b || a >= n || b >= n {
                return Err(TourError::InfeasibleMove(format!("bad edge ({a},{b})")));
            }
            for (x, y) in [(a, b), (b, a)] {
                let slot = adj[x]
                    .iter()
                    .position(|&v| v == u32::MAX)
                    .ok_or_else(|| TourError::InfeasibleMove(format!("city {x} would exceed degree 2")))?;
                adj[x][slot] = y as u32;
            }
        }
        if adj.iter().any(|e| e.contains(&u32::MAX)) {
            return Err(TourError::InfeasibleMove("a city is left with degree < 2".into()));
        }
        if n > 2 && adj.iter().any(|e| e[0] == e[1]) {
            return Err(TourError::InfeasibleMove("duplicate edge".into()));
        }
        let start = self.order[0] as usize;
        let mut order = Vec::with_capacity(n);
        // keep the old orientation at the start when possible
        let mut cur = if adj[start].contains(&(self.next(start) as u32)) {
            self.next(start)
        } else {
            adj[start][0] as usize
        };
        order.push(start);
        let mut last = start;
        while cur != start {
            if order.len() >= n {
                return Err(TourError::InfeasibleMove("walk does not close".into()));
            }
            order.push(cur);
            let [x, y] = adj[cur];
            let nxt = if x as usize == last { y } else { x } as usize;
            last = cur;
            cur = nxt;
        }
        if order.len() != n {
            return Err(TourError::InfeasibleMove(format!(
                "added edges close a subcycle of {} cities",
                order.len()
            )));
        }
        for (k, &c) in order.iter().enumerate() {
            self.order[k] = c as u32;
            self.pos[c] = k as u32;
        }
        self.length -= gain;
        Ok(())
    }
}

/// A k-exchange: remove `removed` tour edges, add `added` edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KOptMove {
    pub removed: Vec<(usize, usize)>,
    pub added: Vec<(usize, usize)>,
    /// Sum of removed weights minus sum of added weights.
    pub gain: i64,
}

impl KOptMove {
    pub fn new(inst: &Instance, removed: Vec<(usize, usize)>, added: Vec<(usize, usize)>) -> Self {
        let gain = removed.iter().map(|&(a, b)| inst.distance(a, b)).sum::<i64>()
            - added.iter().map(|&(a, b)| inst.distance(a, b)).sum::<i64>();
        KOptMove { removed, added, gain }
    }

    pub fn k(&self) -> usize {
        self.removed.len()
    }
}

/// Applies `mv` to a copy of `tour`. The new length is `old - gain`.
pub fn apply_move(inst: &Instance, tour: &Tour, mv: &KOptMove) -> Result<Tour, TourError> {
    let mut out = tour.clone();
    apply_move_in_place(inst, &mut out, mv)?;
    Ok(out)
}

pub fn apply_move_in_place(inst: &Instance, tour: &mut Tour, mv: &KOptMove) -> Result<(), TourError> {
    if mv.removed.is_empty() && mv.added.is_empty() {
        return Ok(());
    }
    if mv.removed.len() != mv.added.len() {
        return Err(TourError::InfeasibleMove(format!(
            "{} edges removed but {} added",
            mv.removed.len(),
            mv.added.len()
        )));
    }
    let declared = KOptMove::new(inst, mv.removed.clone(), mv.added.clone()).gain;
    if declared != mv.gain {
        return Err(TourError::InfeasibleMove(format!(
            "declared gain {} but edges give {declared}",
            mv.gain
        )));
    }
    let mut scratch = tour.clone();
    scratch.rebuild(&mv.removed, &mv.added, mv.gain)?;
    *tour = scratch;
    Ok(())
}

/// Cut points of a double bridge: `0 < p1 < p2 < p3 < n`.
pub fn double_bridge_cuts<R: Rng + ?Sized>(n: usize, rng: &mut R) -> [usize; 3] {
    let mut cuts = rand::seq::index::sample(rng, n - 1, 3).into_vec();
    for c in cuts.iter_mut() {
        *c += 1;
    }
    cuts.sort_unstable();
    [cuts[0], cuts[1], cuts[2]]
}

/// Double-bridge kick: segments `A B C D` become `A D C B`.
///
/// All four junction edges change and the two exchanged pairs form separate
/// alternating cycles, so no sequential exchange undoes it in one step. (The
/// often-quoted order `A C B D` keeps the `D-A` junction and is a plain
/// sequential 3-opt segment swap.)
pub fn double_bridge<R: Rng + ?Sized>(inst: &Instance, tour: &Tour, rng: &mut R) -> Result<Tour, TourError> {
    let n = tour.n();
    if n < 8 {
        return Err(TourError::TooSmall(n));
    }
    let [p1, p2, p3] = double_bridge_cuts(n, rng);
    Ok(double_bridge_at(inst, tour, [p1, p2, p3]))
}

/// Double bridge whose three moved segments each span at most `max_seg`
/// cities, starting at a uniformly random position. Falls back to the
/// unrestricted kick when the tour is too short for the window.
pub fn double_bridge_local<R: Rng + ?Sized>(
    inst: &Instance,
    tour: &Tour,
    max_seg: usize,
    rng: &mut R,
) -> Result<Tour, TourError> {
    let n = tour.n();
    if n < 8 {
        return Err(TourError::TooSmall(n));
    }
    if max_seg == 0 || 3 * max_seg + 1 >= n {
        return double_bridge(inst, tour, rng);
    }
    let start = rng.gen_range(0..n);
    let p1 = rng.gen_range(1..=max_seg);
    let p2 = p1 + rng.gen_range(1..=max_seg);
    let p3 = p2 + rng.gen_range(1..=max_seg);
    let mut rotated = tour.clone();
    for k in 0..n {
        let c = tour.order[(start + k) % n];
        rotated.order[k] = c;
        rotated.pos[c as usize] = k as u32;
    }
    Ok(double_bridge_at(inst, &rotated, [p1, p2, p3]))
}

/// Double bridge with explicit cut positions `0 < p1 < p2 < p3 < n`.
pub fn double_bridge_at(inst: &Instance, tour: &Tour, [p1, p2, p3]: [usize; 3]) -> Tour {
    let n = tour.n();
    assert!(0 < p1 && p1 < p2 && p2 < p3 && p3 < n, "bad cut points");
    let o = &tour.order;
    let c = |k: usize| o[k] as usize;
    let (a1, a2, b1, b2) = (c(0), c(p1 - 1), c(p1), c(p2 - 1));
    let (c1, c2, d1, d2) = (c(p2), c(p3 - 1), c(p3), c(n - 1));
    let removed = [(a2, b1), (b2, c1), (c2, d1), (d2, a1)];
    let added = [(a2, d1), (d2, c1), (c2, b1), (b2, a1)];
    let gain: i64 = removed.iter().map(|&(x, y)| inst.distance(x, y)).sum::<i64>()
        - added.iter().map(|&(x, y)| inst.distance(x, y)).sum::<i64>();
    let mut order = Vec::with_capacity(n);
    order.extend_from_slice(&o[..p1]);
    order.extend_from_slice(&o[p3..]);
    order.extend_from_slice(&o[p2..p3]);
    order.extend_from_slice(&o[p1..p2]);
    let mut pos = vec![0u32; n];
    for (k, &city) in order.iter().enumerate() {
        pos[city as usize] = k as u32;
    }
    Tour {
        order,
        pos,
        length: tour.length - gain,
    }
}
