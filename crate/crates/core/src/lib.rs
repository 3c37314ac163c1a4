//! Bandit-guided Lin-Kernighan search for the symmetric TSP.
//!
//! The pipeline reads a TSPLIB instance, lifts its 1-tree bound with
//! subgradient optimisation, ranks edges by alpha-nearness into enlarged
//! candidate sets, and then runs repeated Lin-Kernighan trials whose
//! candidate edges are chosen each trial by per-city multi-armed bandits.

pub mod bandit;
pub mod candidates;
pub mod driver;
pub mod lksearch;
pub mod onetree;
pub mod report;
pub mod tsplib;

pub use bandit::{init_bandits, BanditParams, BanditState, Policy, SelectedCandidates};
pub use candidates::{build_candidate_sets, Candidate, CandidateSet};
pub use driver::{run_batch, solve, BatchResult, RunResult, SolverParams};
pub use lksearch::{lin_kernighan, KOptMove, Tour};
pub use onetree::{alpha_values, held_karp_ascent, minimum_one_tree, OneTree, PiVector};
pub use tsplib::{read_instance, Instance, WeightKind};
