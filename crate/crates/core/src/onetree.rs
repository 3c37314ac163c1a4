//! Minimum 1-trees, Held-Karp vertex penalties and alpha-nearness.
//!
//! All 1-tree quantities are kept in exact integer arithmetic. Penalties are
//! stored in half distance units, so a penalized edge weight is
//! `2 * d(i, j) + pi[i] + pi[j]` and every tree length, bound and alpha value
//! computed here is expressed in those half units.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::tsplib::{Instance, MATRIX_LIMIT};

/// Scale factor between distance units and the units of [`PiVector`].
pub const PI_SCALE: i64 = 2;

/// Neighbour count of the sparse pregraph used above [`MATRIX_LIMIT`].
pub const PREGRAPH_K: usize = 16;

const NONE: usize = usize::MAX;

/// Held-Karp vertex penalties in half distance units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiVector(Vec<i64>);

impl PiVector {
    pub fn zeros(n: usize) -> Self {
        PiVector(vec![0; n])
    }

    pub fn from_half_units(values: Vec<i64>) -> Self {
        PiVector(values)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds the same amount (half units) to every penalty.
    pub fn shifted(&self, c: i64) -> Self {
        PiVector(self.0.iter().map(|p| p + c).collect())
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Penalized weight `2 d(i,j) + pi_i + pi_j`.
#[inline]
pub fn penalized(inst: &Instance, pi: &PiVector, i: usize, j: usize) -> i64 {
    PI_SCALE * inst.distance(i, j) + pi.0[i] + pi.0[j]
}

/// A spanning tree on every city except `special`, plus the two cheapest
/// edges incident to `special`.
#[derive(Debug, Clone)]
pub struct OneTree {
    pub special: usize,
    /// Tree parent of each city; `usize::MAX` for the root and for `special`.
    pub parent: Vec<usize>,
    /// Penalized weight of the edge to the parent (0 where there is none).
    pub parent_weight: Vec<i64>,
    /// The two cities joined to `special`, cheaper first.
    pub extra: [usize; 2],
    pub extra_weight: [i64; 2],
    /// Total penalized length in half units.
    pub length: i64,
    pub degree: Vec<u32>,
    /// Tree cities in insertion order; every parent precedes its children.
    pub order: Vec<usize>,
}

impl OneTree {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// All `n` edges of the 1-tree as `(a, b, penalized_weight)`.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::with_capacity(self.n());
        for &v in &self.order {
            if self.parent[v] != NONE {
                out.push((self.parent[v], v, self.parent_weight[v]));
            }
        }
        out.push((self.special, self.extra[0], self.extra_weight[0]));
        out.push((self.special, self.extra[1], self.extra_weight[1]));
        out
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        if a == self.special || b == self.special {
            let other = if a == self.special { b } else { a };
            return self.extra.contains(&other);
        }
        self.parent[a] == b || self.parent[b] == a
    }

    /// Whether every city has degree 2, i.e. the 1-tree is a tour.
    pub fn is_tour(&self) -> bool {
        self.degree.iter().all(|&d| d == 2)
    }

    /// Debug dump, one `i j weight` line per edge with 1-based cities and the
    /// penalized weight in distance units.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (a, b, w) in self.edges() {
            let _ = writeln!(out, "{} {} {}", a + 1, b + 1, half_units_display(w));
        }
        out
    }
}

fn half_units_display(w: i64) -> String {
    if w % 2 == 0 {
        (w / 2).to_string()
    } else {
        format!("{:.1}", w as f64 / 2.0)
    }
}

/// Symmetrized k-nearest-neighbour graph over planar coordinates.
#[derive(Debug, Clone)]
pub struct Pregraph {
    adj: Vec<Vec<usize>>,
}

impl Pregraph {
    pub fn build(inst: &Instance, k: usize) -> Option<Self> {
        let coords = inst.coords()?;
        if !inst.kind().is_euclidean() {
            return None;
        }
        let knn = grid_knn(coords, k);
        let n = coords.len();
        let mut adj: Vec<Vec<usize>> = knn.clone();
        for (i, list) in knn.iter().enumerate() {
            for &j in list {
                adj[j].push(i);
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        debug_assert_eq!(adj.len(), n);
        Some(Pregraph { adj })
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }
}

/// k nearest neighbours by Euclidean coordinate distance, ties by index.
fn grid_knn(coords: &[[f64; 2]], k: usize) -> Vec<Vec<usize>> {
    let n = coords.len();
    let k = k.min(n - 1);
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in coords {
        min_x = min_x.min(c[0]);
        min_y = min_y.min(c[1]);
        max_x = max_x.max(c[0]);
        max_y = max_y.max(c[1]);
    }
    let cells_per_side = ((n as f64 / 2.0).sqrt().ceil() as usize).max(1);
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let cell = span / cells_per_side as f64;
    let side = cells_per_side;
    let cell_of = |c: &[f64; 2]| {
        let cx = (((c[0] - min_x) / cell) as usize).min(side - 1);
        let cy = (((c[1] - min_y) / cell) as usize).min(side - 1);
        (cx, cy)
    };
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); side * side];
    for (i, c) in coords.iter().enumerate() {
        let (cx, cy) = cell_of(c);
        buckets[cy * side + cx].push(i);
    }
    let mut out = Vec::with_capacity(n);
    let mut best: Vec<(f64, usize)> = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        let (cx, cy) = cell_of(c);
        best.clear();
        let mut ring = 0usize;
        loop {
            let lo_x = cx.saturating_sub(ring);
            let hi_x = (cx + ring).min(side - 1);
            let lo_y = cy.saturating_sub(ring);
            let hi_y = (cy + ring).min(side - 1);
            for y in lo_y..=hi_y {
                for x in lo_x..=hi_x {
                    let on_ring = x.abs_diff(cx) == ring || y.abs_diff(cy) == ring;
                    if !on_ring {
                        continue;
                    }
                    for &j in &buckets[y * side + x] {
                        if j == i {
                            continue;
                        }
                        let dx = coords[j][0] - c[0];
                        let dy = coords[j][1] - c[1];
                        best.push((dx * dx + dy * dy, j));
                    }
                }
            }
            let exhausted = lo_x == 0 && lo_y == 0 && hi_x == side - 1 && hi_y == side - 1;
            if best.len() >= k {
                best.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                best.truncate(k.max(1));
                // anything outside the scanned square is at least `ring * cell` away
                let reach = ring as f64 * cell;
                if best.len() == k && best[k - 1].0 <= reach * reach {
                    break;
                }
            }
            if exhausted {
                best.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                best.truncate(k);
                break;
            }
            ring += 1;
        }
        out.push(best.iter().map(|&(_, j)| j).collect());
    }
    out
}

/// The city whose second-nearest penalized edge is heaviest; ties go to the
/// lowest index.
fn choose_special(inst: &Instance, pi: &PiVector, pre: Option<&Pregraph>) -> usize {
    let n = inst.dimension();
    let mut best = (i64::MIN, 0usize);
    for v in 0..n {
        let (mut m1, mut m2) = (i64::MAX, i64::MAX);
        let mut consider = |u: usize| {
            if u == v {
                return;
            }
            let w = penalized(inst, pi, v, u);
            if w < m1 {
                m2 = m1;
                m1 = w;
            } else if w < m2 {
                m2 = w;
            }
        };
        match pre {
            Some(g) => g.neighbors(v).iter().for_each(|&u| consider(u)),
            None => (0..n).for_each(consider),
        }
        if m2 > best.0 {
            best = (m2, v);
        }
    }
    best.1
}

/// Computes a minimum 1-tree under penalties `pi`.
///
/// Instances above [`MATRIX_LIMIT`] with planar weights run Prim over a
/// k-nearest-neighbour pregraph, falling back to dense Prim when that graph
/// is disconnected.
pub fn minimum_one_tree(inst: &Instance, pi: &PiVector) -> OneTree {
    let pre = if inst.dimension() > MATRIX_LIMIT {
        Pregraph::build(inst, PREGRAPH_K)
    } else {
        None
    };
    one_tree_with(inst, pi, pre.as_ref())
}

pub(crate) fn one_tree_with(inst: &Instance, pi: &PiVector, pre: Option<&Pregraph>) -> OneTree {
    assert!(inst.dimension() >= 3, "1-tree needs at least 3 cities");
    assert_eq!(pi.len(), inst.dimension());
    if let Some(g) = pre {
        let special = choose_special(inst, pi, Some(g));
        if let Some(t) = sparse_tree(inst, pi, special, g) {
            return t;
        }
    }
    let special = choose_special(inst, pi, None);
    dense_tree(inst, pi, special)
}

fn finish_tree(
    inst: &Instance,
    pi: &PiVector,
    special: usize,
    parent: Vec<usize>,
    parent_weight: Vec<i64>,
    order: Vec<usize>,
) -> OneTree {
    let n = inst.dimension();
    // two cheapest edges at the special node, ties by index
    let (mut e0, mut e1) = ((i64::MAX, NONE), (i64::MAX, NONE));
    for u in (0..n).filter(|&u| u != special) {
        let w = penalized(inst, pi, special, u);
        if (w, u) < e0 {
            e1 = e0;
            e0 = (w, u);
        } else if (w, u) < e1 {
            e1 = (w, u);
        }
    }
    let mut degree = vec![0u32; n];
    let mut length = 0i64;
    for &v in &order {
        if parent[v] != NONE {
            degree[v] += 1;
            degree[parent[v]] += 1;
            length += parent_weight[v];
        }
    }
    degree[special] = 2;
    degree[e0.1] += 1;
    degree[e1.1] += 1;
    length += e0.0 + e1.0;
    OneTree {
        special,
        parent,
        parent_weight,
        extra: [e0.1, e1.1],
        extra_weight: [e0.0, e1.0],
        length,
        degree,
        order,
    }
}

fn dense_tree(inst: &Instance, pi: &PiVector, special: usize) -> OneTree {
    let n = inst.dimension();
    let root = if special == 0 { 1 } else { 0 };
    let mut parent = vec![NONE; n];
    let mut parent_weight = vec![0i64; n];
    let mut key = vec![i64::MAX; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n - 1);
    done[special] = true;
    done[root] = true;
    order.push(root);
    for v in 0..n {
        if !done[v] {
            key[v] = penalized(inst, pi, root, v);
            parent[v] = root;
        }
    }
    for _ in 0..n - 2 {
        let mut pick = NONE;
        let mut best = i64::MAX;
        for v in 0..n {
            if !done[v] && key[v] < best {
                best = key[v];
                pick = v;
            }
        }
        done[pick] = true;
        parent_weight[pick] = best;
        order.push(pick);
        for v in 0..n {
            if !done[v] {
                let w = penalized(inst, pi, pick, v);
                if w < key[v] {
                    key[v] = w;
                    parent[v] = pick;
                }
            }
        }
    }
    finish_tree(inst, pi, special, parent, parent_weight, order)
}

fn sparse_tree(inst: &Instance, pi: &PiVector, special: usize, g: &Pregraph) -> Option<OneTree> {
    let n = inst.dimension();
    let root = if special == 0 { 1 } else { 0 };
    let mut parent = vec![NONE; n];
    let mut parent_weight = vec![0i64; n];
    let mut key = vec![i64::MAX; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n - 1);
    done[special] = true;
    let mut heap = BinaryHeap::new();
    key[root] = 0;
    heap.push(Reverse((0i64, root)));
    while let Some(Reverse((k, v))) = heap.pop() {
        if done[v] || k != key[v] {
            continue;
        }
        done[v] = true;
        parent_weight[v] = if parent[v] == NONE { 0 } else { k };
        order.push(v);
        for &u in g.neighbors(v) {
            if done[u] {
                continue;
            }
            let w = penalized(inst, pi, v, u);
            if w < key[u] {
                key[u] = w;
                parent[u] = v;
                heap.push(Reverse((w, u)));
            }
        }
    }
    if order.len() != n - 1 {
        return None;
    }
    Some(finish_tree(inst, pi, special, parent, parent_weight, order))
}

/// Lagrangian bound `L_pi(T) - 2 * sum(pi)` in half units.
pub fn held_karp_value(tree: &OneTree, pi: &PiVector) -> i64 {
    tree.length - 2 * pi.sum()
}

/// Converts a bound in half units to the tightest valid integer tour bound.
pub fn bound_in_distance_units(w_half: i64) -> i64 {
    w_half.div_euclid(PI_SCALE) + i64::from(w_half.rem_euclid(PI_SCALE) != 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AscentConfig {
    pub max_steps: usize,
    /// Iterations per step-size period; `None` picks `max(max_steps / 4, 10)`.
    pub initial_period: Option<usize>,
}

impl AscentConfig {
    /// Default budget of 1000 iterations. Small instances need far more
    /// than `n` steps before the step size has decayed.
    pub fn for_dimension(_n: usize) -> Self {
        AscentConfig {
            max_steps: 1000,
            initial_period: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub pi: PiVector,
    /// Best Lagrangian value in half units.
    pub bound_half: i64,
    /// Integer lower bound on the optimal tour length.
    pub lower_bound: i64,
    pub steps: usize,
    /// Set when some iterate's 1-tree was itself a tour.
    pub tour_found: bool,
}

/// Subgradient ascent on the Held-Karp dual with `max_steps` iterations.
pub fn held_karp_ascent(inst: &Instance, max_steps: usize) -> AscentResult {
    held_karp_ascent_with(
        inst,
        AscentConfig {
            max_steps,
            initial_period: None,
        },
    )
}

pub fn held_karp_ascent_with(inst: &Instance, cfg: AscentConfig) -> AscentResult {
    assert!(cfg.max_steps >= 1, "ascent needs at least one step");
    let n = inst.dimension();
    let pre = if n > MATRIX_LIMIT {
        Pregraph::build(inst, PREGRAPH_K)
    } else {
        None
    };
    let mut pi = PiVector::zeros(n);
    let mut tree = one_tree_with(inst, &pi, pre.as_ref());
    let mut w = held_karp_value(&tree, &pi);
    let mut best = (w, pi.clone());
    let mut steps = 1usize;
    if tree.is_tour() {
        return AscentResult {
            lower_bound: bound_in_distance_units(w),
            bound_half: w,
            pi,
            steps,
            tour_found: true,
        };
    }

    let mut t = (tree.length / (2 * n as i64)).max(1);
    let mut period = cfg
        .initial_period
        .unwrap_or_else(|| (cfg.max_steps / 4).max(10))
        .max(1);
    let mut initial_phase = true;
    let mut last_v = vec![0i64; n];
    let mut p = 0usize;
    let mut tour_found = false;

    while steps < cfg.max_steps && t > 0 && period > 0 {
        for (i, lv) in last_v.iter_mut().enumerate() {
            let v = tree.degree[i] as i64 - 2;
            pi.0[i] += t * (7 * v + 3 * *lv) / 10;
            *lv = v;
        }
        tree = one_tree_with(inst, &pi, pre.as_ref());
        w = held_karp_value(&tree, &pi);
        steps += 1;
        p += 1;
        if w > best.0 {
            best = (w, pi.clone());
            if initial_phase {
                t *= 2;
            }
            if p == period {
                period *= 2;
            }
        } else if initial_phase && p > period / 2 {
            initial_phase = false;
            p = 0;
            t = 3 * t / 4;
        }
        if tree.is_tour() {
            tour_found = true;
            break;
        }
        if p >= period {
            p = 0;
            period /= 2;
            t /= 2;
        }
    }

    AscentResult {
        lower_bound: bound_in_distance_units(best.0),
        bound_half: best.0,
        pi: best.1,
        steps,
        tour_found,
    }
}

/// One alpha-nearness entry. `alpha` is in half units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaEntry {
    pub target: usize,
    pub alpha: i64,
    pub dist: i64,
}

impl AlphaEntry {
    /// Candidate order: alpha, then distance, then index.
    pub fn order_key(&self) -> (i64, i64, usize) {
        (self.alpha, self.dist, self.target)
    }
}

/// The `k` smallest-alpha neighbours of every city.
#[derive(Debug, Clone)]
pub struct AlphaTable {
    k: usize,
    rows: Vec<Vec<AlphaEntry>>,
}

impl AlphaTable {
    /// Neighbour count the table was built with.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, city: usize) -> &[AlphaEntry] {
        &self.rows[city]
    }
}

/// Alpha values from the minimum 1-tree. For a non-tree edge the value is
/// its penalized weight minus the heaviest edge on the tree path between the
/// endpoints; edges at the special node compare against the heavier of its
/// two 1-tree edges.
pub fn alpha_values(inst: &Instance, pi: &PiVector, k_nearest: usize) -> AlphaTable {
    assert!(k_nearest >= 1, "k_nearest must be positive");
    let n = inst.dimension();
    let pre = if n > MATRIX_LIMIT {
        Pregraph::build(inst, PREGRAPH_K)
    } else {
        None
    };
    let tree = one_tree_with(inst, pi, pre.as_ref());
    match &pre {
        Some(g) => sparse_alpha(inst, pi, &tree, g, k_nearest),
        None => dense_alpha(inst, pi, &tree, k_nearest),
    }
}

fn special_alpha(inst: &Instance, pi: &PiVector, tree: &OneTree, other: usize) -> i64 {
    if tree.extra.contains(&other) {
        0
    } else {
        penalized(inst, pi, tree.special, other) - tree.extra_weight[1]
    }
}

fn keep_best(mut all: Vec<AlphaEntry>, k: usize) -> Vec<AlphaEntry> {
    let k = k.min(all.len());
    if k < all.len() {
        all.select_nth_unstable_by_key(k, AlphaEntry::order_key);
        all.truncate(k);
    }
    all.sort_by_key(AlphaEntry::order_key);
    all
}

/// Exact alpha for every pair in O(n^2).
pub(crate) fn dense_alpha_rows(inst: &Instance, pi: &PiVector, tree: &OneTree) -> Vec<Vec<AlphaEntry>> {
    let n = inst.dimension();
    let s = tree.special;
    let mut beta = vec![0i64; n];
    let mut mark = vec![NONE; n];
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n - 1);
        if i == s {
            for j in (0..n).filter(|&j| j != s) {
                row.push(AlphaEntry {
                    target: j,
                    alpha: special_alpha(inst, pi, tree, j),
                    dist: inst.distance(i, j),
                });
            }
            rows.push(row);
            continue;
        }
        // heaviest edge from i to each ancestor
        beta[i] = i64::MIN;
        mark[i] = i;
        let mut u = i;
        while tree.parent[u] != NONE {
            let p = tree.parent[u];
            beta[p] = beta[u].max(tree.parent_weight[u]);
            mark[p] = i;
            u = p;
        }
        for &v in &tree.order {
            if mark[v] != i {
                beta[v] = beta[tree.parent[v]].max(tree.parent_weight[v]);
            }
        }
        for (j, &b) in beta.iter().enumerate() {
            if j == i {
                continue;
            }
            let alpha = if j == s {
                special_alpha(inst, pi, tree, i)
            } else {
                penalized(inst, pi, i, j) - b
            };
            row.push(AlphaEntry {
                target: j,
                alpha,
                dist: inst.distance(i, j),
            });
        }
        rows.push(row);
    }
    rows
}

fn dense_alpha(inst: &Instance, pi: &PiVector, tree: &OneTree, k: usize) -> AlphaTable {
    let rows = dense_alpha_rows(inst, pi, tree)
        .into_iter()
        .map(|r| keep_best(r, k))
        .collect();
    AlphaTable { k, rows }
}

/// Path-maximum queries on the tree by binary lifting.
struct Lifting {
    depth: Vec<u32>,
    up: Vec<Vec<usize>>,
    max_w: Vec<Vec<i64>>,
}

impl Lifting {
    fn new(tree: &OneTree) -> Self {
        let n = tree.n();
        let levels = (usize::BITS - n.leading_zeros()) as usize + 1;
        let mut depth = vec![0u32; n];
        let mut up = vec![vec![NONE; n]; levels];
        let mut max_w = vec![vec![0i64; n]; levels];
        for &v in &tree.order {
            let p = tree.parent[v];
            if p != NONE {
                depth[v] = depth[p] + 1;
                up[0][v] = p;
                max_w[0][v] = tree.parent_weight[v];
            }
        }
        for l in 1..levels {
            for v in 0..n {
                let mid = up[l - 1][v];
                if mid != NONE {
                    up[l][v] = up[l - 1][mid];
                    max_w[l][v] = max_w[l - 1][v].max(max_w[l - 1][mid]);
                }
            }
        }
        Lifting { depth, up, max_w }
    }

    fn path_max(&self, mut a: usize, mut b: usize) -> i64 {
        let mut best = i64::MIN;
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut l = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                best = best.max(self.max_w[l][a]);
                a = self.up[l][a];
            }
            diff >>= 1;
            l += 1;
        }
        if a == b {
            return best;
        }
        for l in (0..self.up.len()).rev() {
            if self.up[l][a] != self.up[l][b] {
                best = best.max(self.max_w[l][a]).max(self.max_w[l][b]);
                a = self.up[l][a];
                b = self.up[l][b];
            }
        }
        best.max(self.max_w[0][a]).max(self.max_w[0][b])
    }
}

fn sparse_alpha(inst: &Instance, pi: &PiVector, tree: &OneTree, g: &Pregraph, k: usize) -> AlphaTable {
    let n = inst.dimension();
    let s = tree.special;
    let lift = Lifting::new(tree);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut targets: Vec<usize> = g.neighbors(i).to_vec();
        if i != s {
            if tree.parent[i] != NONE {
                targets.push(tree.parent[i]);
            }
        } else {
            targets.extend_from_slice(&tree.extra);
        }
        targets.sort_unstable();
        targets.dedup();
        let row = targets
            .into_iter()
            .filter(|&j| j != i)
            .map(|j| {
                let alpha = if i == s {
                    special_alpha(inst, pi, tree, j)
                } else if j == s {
                    special_alpha(inst, pi, tree, i)
                } else {
                    penalized(inst, pi, i, j) - lift.path_max(i, j)
                };
                AlphaEntry {
                    target: j,
                    alpha,
                    dist: inst.distance(i, j),
                }
            })
            .collect();
        rows.push(keep_best(row, k));
    }
    AlphaTable { k, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsplib::WeightKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(n: usize, seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| [rng.gen_range(0..100) as f64, rng.gen_range(0..100) as f64])
            .collect();
        Instance::from_coords("r", WeightKind::Euc2d, pts).unwrap()
    }

    #[test]
    fn triangle_one_tree_is_the_triangle() {
        let inst = Instance::from_coords("t", WeightKind::Euc2d, vec![[0.0, 0.0], [0.0, 3.0], [4.0, 0.0]])
            .unwrap();
        let t = minimum_one_tree(&inst, &PiVector::zeros(3));
        assert_eq!(t.length, 2 * (3 + 4 + 5));
        assert!(t.is_tour());
        assert_eq!(t.edges().len(), 3);
    }

    #[test]
    fn degree_sum_is_2n() {
        for seed in 0..20 {
            let inst = random_instance(15, seed);
            let t = minimum_one_tree(&inst, &PiVector::zeros(15));
            assert_eq!(t.degree.iter().sum::<u32>(), 30);
            assert!(t.degree.iter().all(|&d| d >= 1));
            let total: i64 = t.edges().iter().map(|e| e.2).sum();
            assert_eq!(total, t.length);
        }
    }

    #[test]
    fn uniform_shift_keeps_edges() {
        let inst = random_instance(12, 3);
        let pi = PiVector::from_half_units((0..12).map(|i| (i as i64 * 7) % 5 - 2).collect());
        let a = minimum_one_tree(&inst, &pi);
        let b = minimum_one_tree(&inst, &pi.shifted(9));
        let mut ea: Vec<_> = a.edges().iter().map(|e| (e.0.min(e.1), e.0.max(e.1))).collect();
        let mut eb: Vec<_> = b.edges().iter().map(|e| (e.0.min(e.1), e.0.max(e.1))).collect();
        ea.sort();
        eb.sort();
        assert_eq!(ea, eb);
        assert_eq!(b.length - a.length, 2 * 12 * 9);
    }

    #[test]
    fn tree_edges_have_zero_alpha() {
        let inst = random_instance(20, 11);
        let pi = PiVector::zeros(20);
        let tree = minimum_one_tree(&inst, &pi);
        let rows = dense_alpha_rows(&inst, &pi, &tree);
        for (a, b, _) in tree.edges() {
            let e = rows[a].iter().find(|e| e.target == b).unwrap();
            assert_eq!(e.alpha, 0);
            let e = rows[b].iter().find(|e| e.target == a).unwrap();
            assert_eq!(e.alpha, 0);
        }
        assert!(rows.iter().flatten().all(|e| e.alpha >= 0));
    }

    #[test]
    fn bound_rounds_up() {
        assert_eq!(bound_in_distance_units(10), 5);
        assert_eq!(bound_in_distance_units(11), 6);
        assert_eq!(bound_in_distance_units(-3), -1);
    }

    #[test]
    fn ascent_stops_on_tour_shaped_tree() {
        // points on a circle: the minimum 1-tree is already the hull tour
        let pts: Vec<[f64; 2]> = (0..10)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 10.0;
                [1000.0 * a.cos(), 1000.0 * a.sin()]
            })
            .collect();
        let inst = Instance::from_coords("c", WeightKind::Euc2d, pts).unwrap();
        let res = held_karp_ascent(&inst, 50);
        assert!(res.tour_found);
        assert_eq!(res.steps, 1);
        let order: Vec<usize> = (0..10).collect();
        assert_eq!(res.lower_bound, inst.tour_length(&order));
    }

    #[test]
    fn sparse_tree_matches_dense_on_clustered_points() {
        let inst = random_instance(300, 5);
        let g = Pregraph::build(&inst, PREGRAPH_K).unwrap();
        let pi = PiVector::zeros(300);
        let s = choose_special(&inst, &pi, None);
        let dense = dense_tree(&inst, &pi, s);
        let sparse = sparse_tree(&inst, &pi, s, &g).unwrap();
        assert_eq!(dense.length, sparse.length);
    }

    #[test]
    fn lifting_path_max_agrees_with_walk() {
        let inst = random_instance(60, 8);
        let pi = PiVector::zeros(60);
        let tree = minimum_one_tree(&inst, &pi);
        let rows = dense_alpha_rows(&inst, &pi, &tree);
        let lift = Lifting::new(&tree);
        for i in (0..60).filter(|&i| i != tree.special) {
            for e in &rows[i] {
                if e.target == tree.special {
                    continue;
                }
                let via_lift = penalized(&inst, &pi, i, e.target) - lift.path_max(i, e.target);
                assert_eq!(via_lift, e.alpha);
            }
        }
    }

    #[test]
    fn knn_grid_matches_brute_force() {
        let inst = random_instance(200, 2);
        let c = inst.coords().unwrap();
        let knn = grid_knn(c, 8);
        for i in 0..200 {
            let mut all: Vec<(f64, usize)> = (0..200)
                .filter(|&j| j != i)
                .map(|j| {
                    let dx = c[i][0] - c[j][0];
                    let dy = c[i][1] - c[j][1];
                    (dx * dx + dy * dy, j)
                })
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let want: Vec<usize> = all[..8].iter().map(|x| x.1).collect();
            assert_eq!(knn[i], want, "city {i}");
        }
    }
}
