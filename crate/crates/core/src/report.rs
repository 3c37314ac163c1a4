//! Benchmark tables: best-known solutions, per-instance summaries and
//! head-to-head comparisons.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::driver::{BatchResult, Selection, SolverParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("reports cover different instances: only in first {only_a:?}, only in second {only_b:?}")]
    InstanceSetMismatch { only_a: Vec<String>, only_b: Vec<String> },
    #[error("unknown ablation variant {0:?} (expected no-epsilon, no-m, no-alpha or lkh-cmax)")]
    UnknownVariant(String),
    #[error("bad best-known-solution table: {0}")]
    Bks(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Best known tour lengths keyed by instance name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BksTable(BTreeMap<String, i64>);

impl BksTable {
    /// Parses `name,length` rows; a header line is optional.
    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut map = BTreeMap::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| ReportError::Bks(e.to_string()))?;
            if rec.len() < 2 {
                return Err(ReportError::Bks(format!("row {} has {} fields", k + 1, rec.len())));
            }
            match rec[1].parse::<i64>() {
                Ok(v) => {
                    map.insert(rec[0].to_string(), v);
                }
                Err(_) if k == 0 => {} // header
                Err(_) => return Err(ReportError::Bks(format!("row {}: bad length {:?}", k + 1, &rec[1]))),
            }
        }
        Ok(BksTable(map))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ReportError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    pub fn insert(&mut self, name: impl Into<String>, length: i64) {
        self.0.insert(name.into(), length);
    }
}

/// Percentage excess of `x` over `bks`.
pub fn gap_percent(x: f64, bks: i64) -> f64 {
    100.0 * (x - bks as f64) / bks as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub instance: String,
    pub n: usize,
    pub bks: Option<i64>,
    pub runs: usize,
    pub success: usize,
    pub best: i64,
    pub best_gap: Option<f64>,
    pub average: f64,
    pub average_gap: Option<f64>,
    pub mean_trials: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_time: Option<f64>,
    pub lower_bound: i64,
    pub seeds: Vec<u64>,
    pub lengths: Vec<i64>,
}

impl SuiteRow {
    pub fn from_batch(instance: &str, n: usize, batch: &BatchResult, bks: Option<i64>, timing: bool) -> Self {
        let best = batch.best();
        let average = batch.average();
        SuiteRow {
            instance: instance.to_string(),
            n,
            bks,
            runs: batch.runs.len(),
            success: batch.successes(),
            best,
            best_gap: bks.map(|b| gap_percent(best as f64, b)),
            average,
            average_gap: bks.map(|b| gap_percent(average, b)),
            mean_trials: batch.mean_trials(),
            mean_time: timing.then(|| batch.mean_time()),
            lower_bound: batch.lower_bound,
            seeds: batch.runs.iter().map(|r| r.seed).collect(),
            lengths: batch.runs.iter().map(|r| r.best_length).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub c_max: usize,
    pub n_arm: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub t_type: Option<usize>,
    pub max_trials: usize,
    pub seed: u64,
    pub max_depth: usize,
    pub selection: String,
    pub enabled: [bool; 3],
}

impl From<&SolverParams> for ReportParams {
    fn from(p: &SolverParams) -> Self {
        ReportParams {
            c_max: p.c_max,
            n_arm: p.n_arm,
            epsilon: p.epsilon,
            lambda: p.lambda,
            t_type: p.t_type,
            max_trials: p.max_trials,
            seed: p.seed,
            max_depth: p.max_depth,
            selection: match p.selection {
                Selection::Bandit => "bandit".into(),
                Selection::FullSet => "full-set".into(),
            },
            enabled: p.enabled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub label: String,
    pub params: ReportParams,
    pub rows: Vec<SuiteRow>,
}

fn opt_gap(g: Option<f64>) -> String {
    g.map_or_else(|| "-".into(), |g| format!("{g:.4}"))
}

impl SuiteReport {
    pub fn new(label: impl Into<String>, params: &SolverParams) -> Self {
        SuiteReport {
            schema: SCHEMA_VERSION,
            label: label.into(),
            params: params.into(),
            rows: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,n,bks,runs,success,best,best_gap_pct,average,average_gap_pct,trials,time\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:.1},{},{:.1},{}",
                r.instance,
                r.n,
                r.bks.map_or_else(String::new, |b| b.to_string()),
                r.runs,
                r.success,
                r.best,
                r.best_gap.map_or_else(String::new, |g| format!("{g:.4}")),
                r.average,
                r.average_gap.map_or_else(String::new, |g| format!("{g:.4}")),
                r.mean_trials,
                r.mean_time.map_or_else(String::new, |t| format!("{t:.2}")),
            );
        }
        out
    }

    /// Fixed-width text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>10} {:>9} {:>10} {:>9} {:>12} {:>9} {:>9} {:>9}",
            "Instance", "BKS", "Success", "Best", "Gap%", "Avg", "Gap%", "Trials", "Time"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<12} {:>10} {:>9} {:>10} {:>9} {:>12.1} {:>9} {:>9.1} {:>9}",
                r.instance,
                r.bks.map_or_else(|| "-".into(), |b| b.to_string()),
                format!("{}/{}", r.success, r.runs),
                r.best,
                opt_gap(r.best_gap),
                r.average,
                opt_gap(r.average_gap),
                r.mean_trials,
                r.mean_time.map_or_else(|| "-".into(), |t| format!("{t:.2}")),
            );
        }
        out
    }
}

/// Head-to-head summary of two reports over the same instances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub instances: usize,
    /// Instances where the first report's best is strictly lower.
    pub win_best: usize,
    pub loss_best: usize,
    pub win_avg: usize,
    pub loss_avg: usize,
    /// Mean gaps in percent over instances with a known optimum.
    pub gap_best: [f64; 2],
    pub gap_avg: [f64; 2],
}

pub fn compare_reports(a: &SuiteReport, b: &SuiteReport) -> Result<Comparison, ReportError> {
    let names = |r: &SuiteReport| r.rows.iter().map(|x| x.instance.clone()).collect::<BTreeSet<_>>();
    let (na, nb) = (names(a), names(b));
    if na != nb {
        return Err(ReportError::InstanceSetMismatch {
            only_a: na.difference(&nb).cloned().collect(),
            only_b: nb.difference(&na).cloned().collect(),
        });
    }
    let mut c = Comparison {
        instances: na.len(),
        win_best: 0,
        loss_best: 0,
        win_avg: 0,
        loss_avg: 0,
        gap_best: [0.0; 2],
        gap_avg: [0.0; 2],
    };
    let mut with_gap = 0usize;
    for ra in &a.rows {
        let rb = b.rows.iter().find(|r| r.instance == ra.instance).expect("same set");
        c.win_best += usize::from(ra.best < rb.best);
        c.loss_best += usize::from(ra.best > rb.best);
        c.win_avg += usize::from(ra.average < rb.average);
        c.loss_avg += usize::from(ra.average > rb.average);
        if let (Some(ga), Some(gb), Some(aa), Some(ab)) = (ra.best_gap, rb.best_gap, ra.average_gap, rb.average_gap) {
            with_gap += 1;
            c.gap_best[0] += ga;
            c.gap_best[1] += gb;
            c.gap_avg[0] += aa;
            c.gap_avg[1] += ab;
        }
    }
    if with_gap > 0 {
        for g in c.gap_best.iter_mut().chain(c.gap_avg.iter_mut()) {
            *g /= with_gap as f64;
        }
    }
    Ok(c)
}

/// Solver settings for a named ablation, derived from `base`.
pub fn ablation_variant(base: &SolverParams, name: &str) -> Result<SolverParams, ReportError> {
    let mut p = base.clone();
    match name {
        "no-epsilon" => p.enabled[0] = false,
        "no-m" => p.enabled[1] = false,
        "no-alpha" => p.enabled[2] = false,
        // plain LK over the whole enlarged candidate set, no bandits
        "lkh-cmax" => p.selection = Selection::FullSet,
        other => return Err(ReportError::UnknownVariant(other.to_string())),
    }
    Ok(p)
}

pub const ABLATION_VARIANTS: [&str; 4] = ["no-epsilon", "no-m", "no-alpha", "lkh-cmax"];

#[cfg(test)]
mod tests {
    use super::*;

    fn row(name: &str, best: i64, avg: f64, bks: i64) -> SuiteRow {
        SuiteRow {
            instance: name.into(),
            n: 10,
            bks: Some(bks),
            runs: 2,
            success: 0,
            best,
            best_gap: Some(gap_percent(best as f64, bks)),
            average: avg,
            average_gap: Some(gap_percent(avg, bks)),
            mean_trials: 3.0,
            mean_time: None,
            lower_bound: 0,
            seeds: vec![1, 2],
            lengths: vec![best, best],
        }
    }

    #[test]
    fn bks_with_and_without_header() {
        let t = BksTable::parse("name,length\neil101,629\n# comment\nlin105, 14379\n").unwrap();
        assert_eq!(t.get("eil101"), Some(629));
        assert_eq!(t.get("lin105"), Some(14379));
        assert_eq!(t.get("x"), None);
        assert!(BksTable::parse("a,1\nb,x\n").is_err());
    }

    #[test]
    fn gap_formatting() {
        assert_eq!(format!("{:.4}", gap_percent(650.0, 629)), "3.3386");
        assert_eq!(gap_percent(629.0, 629), 0.0);
    }

    #[test]
    fn comparison_counts() {
        let p = SolverParams::default();
        let mut a = SuiteReport::new("a", &p);
        let mut b = SuiteReport::new("b", &p);
        a.rows = vec![row("x", 100, 101.0, 100), row("y", 205, 210.0, 200)];
        b.rows = vec![row("y", 200, 212.0, 200), row("x", 102, 101.0, 100)];
        let c = compare_reports(&a, &b).unwrap();
        assert_eq!((c.win_best, c.loss_best, c.win_avg, c.loss_avg), (1, 1, 1, 0));
        assert!((c.gap_best[0] - 1.25).abs() < 1e-12);
        b.rows.pop();
        assert!(matches!(
            compare_reports(&a, &b),
            Err(ReportError::InstanceSetMismatch { .. })
        ));
    }

    #[test]
    fn variants() {
        let base = SolverParams::default();
        assert_eq!(ablation_variant(&base, "no-m").unwrap().enabled, [true, false, true]);
        assert_eq!(ablation_variant(&base, "lkh-cmax").unwrap().selection, Selection::FullSet);
        assert!(matches!(
            ablation_variant(&base, "no-such"),
            Err(ReportError::UnknownVariant(_))
        ));
    }

    #[test]
    fn json_roundtrip_carries_schema() {
        let mut r = SuiteReport::new("bandit", &SolverParams::default());
        r.rows.push(row("x", 100, 100.5, 100));
        let text = r.to_json().unwrap();
        assert!(text.contains("\"schema\": 1"));
        assert_eq!(SuiteReport::from_json(&text).unwrap(), r);
    }
}
