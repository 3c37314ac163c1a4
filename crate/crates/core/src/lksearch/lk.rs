use std::collections::VecDeque;

use super::tour::{Flip, KOptMove, Tour};
use crate::bandit::SelectedCandidates;
use crate::tsplib::Instance;

pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LkConfig {
    /// Deepest sequential exchange tried, counted in removed edges.
    pub max_depth: usize,
    /// Levels that try every candidate; deeper levels try only the best.
    pub full_breadth: usize,
    /// Finish with full passes so that no city starts an improving move.
    /// Without it only the don't-look-bit queue is drained.
    pub certify: bool,
}

pub const DEFAULT_FULL_BREADTH: usize = 2;

impl Default for LkConfig {
    fn default() -> Self {
        LkConfig {
            max_depth: DEFAULT_MAX_DEPTH,
            full_breadth: DEFAULT_FULL_BREADTH,
            certify: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LkStats {
    pub improving_moves: u64,
    /// Improvements found by the segment-insertion 3-opt branch.
    pub insertion_moves: u64,
    /// Full passes over all cities after the queue ran dry.
    pub sweeps: u64,
}

#[inline]
fn edge(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Search<'a> {
    inst: &'a Instance,
    sel: &'a SelectedCandidates,
    max_depth: usize,
    full_breadth: usize,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    removed: Vec<(usize, usize)>,
    added: Vec<(usize, usize)>,
    buf: Vec<Vec<(usize, usize, i64, i64)>>,
    record: Option<&'a mut Vec<KOptMove>>,
    stats: LkStats,
}

impl<'a> Search<'a> {
    fn push(&mut self, c: usize) {
        if !self.queued[c] {
            self.queued[c] = true;
            self.queue.push_back(c);
        }
    }

    fn drain(&mut self, tour: &mut Tour) {
        while let Some(c) = self.queue.pop_front() {
            self.queued[c] = false;
            self.improve_from(tour, c);
        }
    }

    fn is_removed(&self, a: usize, b: usize) -> bool {
        self.removed.contains(&edge(a, b))
    }

    fn is_added(&self, a: usize, b: usize) -> bool {
        self.added.contains(&edge(a, b))
    }

    fn commit(&mut self, gain: i64) {
        let removed = std::mem::take(&mut self.removed);
        let added = std::mem::take(&mut self.added);
        for &(a, b) in removed.iter().chain(added.iter()) {
            self.push(a);
            self.push(b);
        }
        self.stats.improving_moves += 1;
        match self.record.as_deref_mut() {
            Some(log) => log.push(KOptMove {
                removed,
                added,
                gain,
            }),
            None => {
                self.removed = removed;
                self.added = added;
            }
        }
    }

    /// Tries to improve the tour starting the exchange at `t1`.
    fn improve_from(&mut self, tour: &mut Tour, t1: usize) -> bool {
        for fwd in [true, false] {
            let t2 = if fwd { tour.next(t1) } else { tour.prev(t1) };
            self.removed.clear();
            self.added.clear();
            self.removed.push(edge(t1, t2));
            if self.step(tour, 1, t1, t2, tour.length()) {
                self.removed.clear();
                self.added.clear();
                return true;
            }
        }
        false
    }

    /// One level of the sequential exchange. `(t1, t2)` is the tour edge
    /// about to be broken; the tour already carries every earlier flip.
    fn step(&mut self, tour: &mut Tour, level: usize, t1: usize, t2: usize, start: i64) -> bool {
        let inst = self.inst;
        let fwd = tour.next(t1) == t2;
        let g = start - tour.length();
        let d12 = inst.distance(t1, t2);
        let mut cands = std::mem::take(&mut self.buf[level]);
        cands.clear();
        for &t3 in self.sel.neighbors(t2) {
            let t3 = t3 as usize;
            if t3 == t1 || tour.has_edge(t2, t3) {
                continue;
            }
            let g1 = g + d12 - inst.distance(t2, t3);
            if g1 <= 0 || self.is_removed(t2, t3) {
                continue;
            }
            let t4 = if fwd { tour.prev(t3) } else { tour.next(t3) };
            cands.push((t3, t4, g1, g1 + inst.distance(t3, t4)));
        }
        // most promising first: largest gain after also removing (t3, t4)
        cands.sort_by_key(|c| std::cmp::Reverse(c.3));
        // close right here if any choice allows it, taking the best closing
        let mut best_close: Option<(usize, usize, i64)> = None;
        for &(t3, t4, _, score) in cands.iter() {
            let close = score - inst.distance(t4, t1);
            if close > 0
                && best_close.is_none_or(|b| close > b.2)
                && self.sel.contains_edge(t4, t1)
                && !self.is_added(t3, t4)
            {
                best_close = Some((t3, t4, close));
            }
        }
        if let Some((t3, t4, close)) = best_close {
            if fwd {
                tour.two_opt_move(inst, t1, t2, t4, t3);
            } else {
                tour.two_opt_move(inst, t2, t1, t3, t4);
            }
            debug_assert_eq!(start - tour.length(), close);
            self.added.push(edge(t2, t3));
            self.removed.push(edge(t3, t4));
            self.added.push(edge(t4, t1));
            self.commit(close);
            self.buf[level] = cands;
            return true;
        }
        let mut found = false;
        for &(t3, t4, g1, _) in cands.iter() {
            if !self.is_added(t3, t4) {
                let flip: Flip = if fwd {
                    tour.two_opt_move(inst, t1, t2, t4, t3)
                } else {
                    tour.two_opt_move(inst, t2, t1, t3, t4)
                };
                self.added.push(edge(t2, t3));
                self.removed.push(edge(t3, t4));
                if level < self.max_depth && self.step(tour, level + 1, t1, t4, start) {
                    found = true;
                    break;
                }
                tour.undo_flip(flip);
                self.added.pop();
                self.removed.pop();
            }
            if level == 1 && self.max_depth >= 3 && self.insertion(tour, t1, t2, t3, g1, fwd) {
                found = true;
                break;
            }
            if level > self.full_breadth {
                break;
            }
        }
        self.buf[level] = cands;
        found
    }

    /// The other choice of t4 at the first level: removing `(t3, t4)` with
    /// `t4` past `t3` closes `t2..t3` into a cycle, which a third exchange
    /// reopens and splices back in. Covers the pure segment-insertion 3-opt
    /// moves that plain flips cannot reach.
    fn insertion(&mut self, tour: &mut Tour, t1: usize, t2: usize, t3: usize, g1: i64, fwd: bool) -> bool {
        let inst = self.inst;
        let nx = |t: &Tour, c: usize| if fwd { t.next(c) } else { t.prev(c) };
        let pv = |t: &Tour, c: usize| if fwd { t.prev(c) } else { t.next(c) };
        let inside = |t: &Tour, c: usize| if fwd { t.between(t2, c, t3) } else { t.between(t3, c, t2) };
        let t4 = nx(tour, t3);
        let base = g1 + inst.distance(t3, t4);
        for &t5 in self.sel.neighbors(t4) {
            let t5 = t5 as usize;
            if t5 == t3 || !inside(tour, t5) {
                continue;
            }
            let g2 = base - inst.distance(t4, t5);
            if g2 <= 0 {
                continue;
            }
            for t6 in [nx(tour, t5), pv(tour, t5)] {
                if (t6 == nx(tour, t5) && t5 == t3) || (t6 == pv(tour, t5) && t5 == t2) || t6 == t1 {
                    continue;
                }
                let gain = g2 + inst.distance(t5, t6) - inst.distance(t6, t1);
                if gain <= 0 || !self.sel.contains_edge(t6, t1) {
                    continue;
                }
                let removed = [edge(t1, t2), edge(t3, t4), edge(t5, t6)];
                let added = [edge(t2, t3), edge(t4, t5), edge(t6, t1)];
                if added.iter().any(|e| removed.contains(e)) {
                    continue;
                }
                if tour.rebuild(&removed, &added, gain).is_err() {
                    continue;
                }
                self.removed.clear();
                self.removed.extend_from_slice(&removed);
                self.added.clear();
                self.added.extend_from_slice(&added);
                self.stats.insertion_moves += 1;
                self.commit(gain);
                return true;
            }
        }
        false
    }
}

/// Lin-Kernighan local search restricted to the selected candidate edges,
/// with the default depth. Returns the improved copy.
pub fn lin_kernighan(inst: &Instance, tour: &Tour, sel: &SelectedCandidates) -> Tour {
    let mut out = tour.clone();
    lin_kernighan_with(inst, &mut out, sel, LkConfig::default(), None, None);
    out
}

/// Runs the search in place. `active` seeds the work queue (every city when
/// `None`); `record` receives each accepted move in order.
///
/// Every added edge, including the one that closes an exchange, is a
/// selected candidate. On return no city starts an improving exchange, so
/// in particular no improving 2-opt or 3-opt move over candidate edges
/// remains.
pub fn lin_kernighan_with(
    inst: &Instance,
    tour: &mut Tour,
    sel: &SelectedCandidates,
    cfg: LkConfig,
    active: Option<&[usize]>,
    record: Option<&mut Vec<KOptMove>>,
) -> LkStats {
    let n = tour.n();
    assert_eq!(sel.n(), n, "candidate selection does not match the tour");
    let max_depth = cfg.max_depth.max(2);
    let mut s = Search {
        inst,
        sel,
        max_depth,
        full_breadth: cfg.full_breadth.max(2),
        queue: VecDeque::with_capacity(n),
        queued: vec![false; n],
        removed: Vec::with_capacity(max_depth + 1),
        added: Vec::with_capacity(max_depth + 1),
        buf: vec![Vec::new(); max_depth + 2],
        record,
        stats: LkStats::default(),
    };
    let full_start = active.is_none();
    match active {
        Some(list) => list.iter().for_each(|&c| s.push(c)),
        None => (0..n).for_each(|k| s.push(tour.city_at(k))),
    }
    s.drain(tour);
    // don't-look bits can miss moves whose t1 saw no edge change, so finish
    // with full passes until one of them finds nothing
    let mut certified = !cfg.certify || (full_start && s.stats.improving_moves == 0);
    while !certified {
        s.stats.sweeps += 1;
        let before = s.stats.improving_moves;
        for k in 0..n {
            let c = tour.city_at(k);
            s.improve_from(tour, c);
        }
        s.drain(tour);
        certified = s.stats.improving_moves == before;
    }
    s.stats
}
