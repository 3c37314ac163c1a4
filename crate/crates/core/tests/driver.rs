use std::path::PathBuf;

use banditlk::driver::{prepare, run_batch, run_seed, solve, Selection, SolverParams};
use banditlk::lksearch::Tour;
use banditlk::report::{ablation_variant, BksTable};
use banditlk::tsplib::{parse_tour, read_instance, write_tour, Instance};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn fixture(name: &str) -> Instance {
    read_instance(data(&format!("tsplib/{name}.tsp"))).unwrap()
}

fn bks(name: &str) -> i64 {
    BksTable::load(data("bks.csv")).unwrap().get(name).unwrap()
}

#[test]
fn shipped_optimal_tour_matches_bks_and_bound() {
    let inst = fixture("pcb442");
    let text = std::fs::read_to_string(data("tsplib/pcb442.opt.tour")).unwrap();
    let order = parse_tour(&text).unwrap();
    assert_eq!(inst.tour_length(&order), bks("pcb442"));
    let t = Tour::from_order(&inst, order.clone()).unwrap();
    assert_eq!(t.length(), bks("pcb442"));
    let prep = prepare(&inst, &SolverParams::default()).unwrap();
    assert!(prep.lower_bound <= bks("pcb442"));
    assert_eq!(parse_tour(&write_tour("pcb442", &order, t.length())).unwrap(), order);
}

#[test]
fn small_fixtures_reach_bks() {
    for name in ["gr17", "berlin52"] {
        let inst = fixture(name);
        let params = SolverParams {
            max_trials: inst.dimension(),
            ..SolverParams::default()
        };
        let r = solve(&inst, &params, Some(bks(name))).unwrap();
        assert_eq!(r.best_length, bks(name), "{name}");
        assert_eq!(r.reached_bks, Some(true));
        assert_eq!(r.best_tour.length(), inst.tour_length(&r.best_tour.order()));
    }
}

#[test]
fn batch_runs_follow_seed_order() {
    let inst = fixture("berlin52");
    let params = SolverParams {
        max_trials: 5,
        seed: 17,
        ..SolverParams::default()
    };
    let b = run_batch(&inst, &params, 4, None).unwrap();
    let seeds: Vec<u64> = b.runs.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, (0..4).map(|k| run_seed(17, k)).collect::<Vec<_>>());
    for r in &b.runs {
        let alone = solve(&inst, &SolverParams { seed: r.seed, ..params.clone() }, None).unwrap();
        assert_eq!(alone.best_length, r.best_length);
        assert_eq!(alone.best_tour, r.best_tour);
    }
}

#[test]
fn trace_is_monotone_and_counts_trials() {
    let inst = fixture("pr107");
    let params = SolverParams {
        max_trials: 30,
        record_trace: true,
        ..SolverParams::default()
    };
    let r = solve(&inst, &params, None).unwrap();
    assert_eq!(r.trace.len(), r.trials_used);
    assert_eq!(r.trials_used, 30);
    for w in r.trace.windows(2) {
        assert!(w[1].best <= w[0].best);
        assert_eq!(w[1].trial, w[0].trial + 1);
    }
    assert_eq!(r.trace.last().unwrap().best, r.best_length);
    assert_eq!(r.counters.calls.iter().sum::<u64>(), 30);
    let csv = r.trace_csv();
    assert_eq!(csv.lines().count(), 31);
}

#[test]
fn full_set_variant_skips_the_bandit() {
    let inst = fixture("berlin52");
    let base = SolverParams {
        max_trials: 8,
        record_trace: true,
        ..SolverParams::default()
    };
    let p = ablation_variant(&base, "lkh-cmax").unwrap();
    assert_eq!(p.selection, Selection::FullSet);
    let r = solve(&inst, &p, None).unwrap();
    assert_eq!(r.counters.calls, [0, 0, 0]);
    assert!(r.trace.iter().all(|t| t.policy.is_none()));
}

#[test]
fn bad_parameters_are_rejected() {
    let inst = fixture("gr17");
    for p in [
        SolverParams { max_trials: 0, ..SolverParams::default() },
        SolverParams { c_max: 0, ..SolverParams::default() },
        SolverParams { n_arm: 9, ..SolverParams::default() },
        SolverParams { epsilon: 1.5, ..SolverParams::default() },
        SolverParams { enabled: [false; 3], ..SolverParams::default() },
    ] {
        assert!(solve(&inst, &p, None).is_err(), "{p:?}");
    }
    assert!(run_batch(&inst, &SolverParams::default(), 0, None).is_err());
}
