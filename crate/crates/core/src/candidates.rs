//! Enlarged per-city candidate sets ordered by alpha-nearness.

use std::fmt::Write as _;

use thiserror::Error;

use crate::onetree::{AlphaEntry, AlphaTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CandidateError {
    #[error("alpha table holds {have} neighbours per city but {need} are required")]
    InsufficientAlphaCoverage { have: usize, need: usize },
    #[error("candidate set size must be at least 1")]
    EmptySet,
}

/// One candidate edge leaving a city. `alpha` is in half distance units.
pub type Candidate = AlphaEntry;

/// Per-city candidate lists of a uniform width `min(c_max, n - 1)`, stored
/// flat so that arm indices line up with a parallel array of M-values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    width: usize,
    c_max: usize,
    entries: Vec<Candidate>,
}

impl CandidateSet {
    pub fn n(&self) -> usize {
        self.entries.len() / self.width
    }

    /// Entries per city.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn c_max(&self) -> usize {
        self.c_max
    }

    pub fn of(&self, city: usize) -> &[Candidate] {
        &self.entries[city * self.width..(city + 1) * self.width]
    }

    /// Offset of `city`'s first entry in the flat layout.
    pub fn offset(&self, city: usize) -> usize {
        city * self.width
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }

    /// Directional membership: whether `j` is in `i`'s own list.
    pub fn is_candidate(&self, i: usize, j: usize) -> bool {
        i != j && self.of(i).iter().any(|c| c.target == j)
    }

    /// Debug dump, `city: target(alpha) ...` with 1-based cities.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for city in 0..self.n() {
            let _ = write!(out, "{}:", city + 1);
            for c in self.of(city) {
                let alpha = if c.alpha % 2 == 0 {
                    (c.alpha / 2).to_string()
                } else {
                    format!("{:.1}", c.alpha as f64 / 2.0)
                };
                let _ = write!(out, " {}({})", c.target + 1, alpha);
            }
            out.push('\n');
        }
        out
    }
}

/// Takes the `c_max` smallest-alpha neighbours of each city.
pub fn build_candidate_sets(alpha: &AlphaTable, c_max: usize) -> Result<CandidateSet, CandidateError> {
    if c_max == 0 {
        return Err(CandidateError::EmptySet);
    }
    let n = alpha.n();
    let width = c_max.min(n - 1);
    if alpha.k() < width || (0..n).any(|i| alpha.row(i).len() < width) {
        return Err(CandidateError::InsufficientAlphaCoverage {
            have: alpha.k(),
            need: width,
        });
    }
    let mut entries = Vec::with_capacity(n * width);
    for i in 0..n {
        // rows arrive sorted by (alpha, dist, target)
        entries.extend_from_slice(&alpha.row(i)[..width]);
    }
    Ok(CandidateSet {
        width,
        c_max,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::onetree::{alpha_values, minimum_one_tree, PiVector};
    use crate::tsplib::{Instance, WeightKind};

    fn square() -> Instance {
        Instance::from_coords(
            "sq",
            WeightKind::Euc2d,
            vec![[0.0, 0.0], [0.0, 10.0], [10.0, 10.0], [10.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn small_instance_caps_width() {
        let inst = square();
        let table = alpha_values(&inst, &PiVector::zeros(4), 7);
        let cs = build_candidate_sets(&table, 7).unwrap();
        assert_eq!(cs.width(), 3);
        for i in 0..4 {
            assert_eq!(cs.of(i).len(), 3);
            assert!(!cs.is_candidate(i, i));
        }
    }

    #[test]
    fn insufficient_coverage() {
        let inst = Instance::from_coords(
            "l",
            WeightKind::Euc2d,
            (0..12).map(|i| [i as f64, (i * i % 7) as f64]).collect(),
        )
        .unwrap();
        let table = alpha_values(&inst, &PiVector::zeros(12), 5);
        assert_eq!(
            build_candidate_sets(&table, 7),
            Err(CandidateError::InsufficientAlphaCoverage { have: 5, need: 7 })
        );
        assert_eq!(build_candidate_sets(&table, 0), Err(CandidateError::EmptySet));
    }

    #[test]
    fn tree_neighbours_come_first() {
        let inst = Instance::from_coords(
            "l",
            WeightKind::Euc2d,
            (0..15).map(|i| [(i * 37 % 101) as f64, (i * 53 % 89) as f64]).collect(),
        )
        .unwrap();
        let pi = PiVector::zeros(15);
        let tree = minimum_one_tree(&inst, &pi);
        let cs = build_candidate_sets(&alpha_values(&inst, &pi, 7), 7).unwrap();
        for i in 0..15 {
            let set = cs.of(i);
            let all_zero = set.iter().all(|c| c.alpha == 0);
            for j in (0..15).filter(|&j| j != i && tree.contains_edge(i, j)) {
                match set.iter().find(|c| c.target == j) {
                    Some(c) => assert_eq!(c.alpha, 0),
                    None => assert!(all_zero, "city {i}: tree neighbour {j} missing"),
                }
            }
        }
    }

    #[test]
    fn dump_format() {
        let cs = build_candidate_sets(&alpha_values(&square(), &PiVector::zeros(4), 3), 3).unwrap();
        let text = cs.dump();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("1: "));
    }
}
