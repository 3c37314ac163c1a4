use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use banditlk::driver::{self, default_max_trials, Selection, SolverParams};
use banditlk::onetree::minimum_one_tree;
use banditlk::report::{ablation_variant, compare_reports, BksTable, SuiteReport, SuiteRow};
use banditlk::tsplib::{read_instance, write_tour, Instance};

#[derive(Parser)]
#[command(name = "banditlk", version, about = "Bandit-guided Lin-Kernighan TSP solver")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one TSPLIB instance
    Solve(SolveArgs),
    /// Run every instance of a directory or list file and print a summary
    Bench(BenchArgs),
    /// Run a suite with one bandit component switched off
    Ablate {
        /// no-epsilon, no-m, no-alpha or lkh-cmax
        variant: String,
        #[command(flatten)]
        bench: BenchArgs,
    },
    /// Compare two JSON suite reports
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Args, Clone)]
struct SolverOpts {
    /// Trials per run (default: n below 10k cities, else 10000, or 3000 above 30k)
    #[arg(long)]
    trials: Option<usize>,
    /// Wall-clock cap per run in seconds
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Candidate set size
    #[arg(long, default_value_t = 7)]
    cmax: usize,
    /// Arms pulled per city each trial
    #[arg(long, default_value_t = 5)]
    narm: usize,
    #[arg(long, default_value_t = 0.15)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.16)]
    lambda: f64,
    /// Stagnant trials before the policy rotates (default: trials / 20)
    #[arg(long)]
    ttype: Option<usize>,
    /// Maximum exchange depth of the local search
    #[arg(long, default_value_t = banditlk::lksearch::DEFAULT_MAX_DEPTH)]
    depth: usize,
    /// Exchange levels searched exhaustively
    #[arg(long, default_value_t = banditlk::lksearch::DEFAULT_FULL_BREADTH)]
    breadth: usize,
    /// Double-bridge kicks per non-improving trial
    #[arg(long, default_value_t = 50)]
    kicks: usize,
    /// Longest segment moved by a kick (0: anywhere)
    #[arg(long, default_value_t = 0)]
    kick_segment: usize,
    /// Subgradient iterations (default: 1000)
    #[arg(long)]
    ascent_steps: Option<usize>,
    /// Alpha-greedy pulls the largest-alpha arms instead of the smallest
    #[arg(long)]
    alpha_greedy_largest: bool,
    /// Use every candidate edge every trial (no bandits)
    #[arg(long)]
    full_set: bool,
    /// Best-known length table, `name,length` per line
    #[arg(long)]
    bks_file: Option<PathBuf>,
    /// Leave wall-clock times out of reports so they are reproducible
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
    /// Best-known length; runs stop once it is reached
    #[arg(long)]
    bks: Option<i64>,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV summary here (`-` for stdout)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Per-trial CSV trace of the first run
    #[arg(long)]
    trace: Option<PathBuf>,
    /// M-value snapshot after every trial of the first run, one CSV row each
    #[arg(long)]
    trace_m: Option<PathBuf>,
    /// Best tour in TSPLIB TOUR format
    #[arg(long)]
    tour_out: Option<PathBuf>,
    /// Dump the 1-tree under the final penalties
    #[arg(long)]
    dump_onetree: Option<PathBuf>,
    /// Dump the candidate sets
    #[arg(long)]
    dump_candidates: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files, directories of .tsp files, or text files listing paths
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    opts: SolverOpts,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report label
    #[arg(long)]
    label: Option<String>,
}

fn params_for(opts: &SolverOpts, inst: &Instance) -> SolverParams {
    SolverParams {
        c_max: opts.cmax,
        n_arm: opts.narm,
        epsilon: opts.epsilon,
        lambda: opts.lambda,
        t_type: opts.ttype,
        max_trials: opts.trials.unwrap_or_else(|| default_max_trials(inst.dimension())),
        max_time: opts.time_limit.map(Duration::from_secs_f64),
        seed: opts.seed,
        max_depth: opts.depth,
        full_breadth: opts.breadth,
        selection: if opts.full_set { Selection::FullSet } else { Selection::Bandit },
        alpha_greedy_largest: opts.alpha_greedy_largest,
        kicks: opts.kicks,
        kick_segment: opts.kick_segment,
        ascent_steps: opts.ascent_steps,
        ..SolverParams::default()
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn load_bks(opts: &SolverOpts) -> Result<BksTable> {
    match &opts.bks_file {
        Some(p) => BksTable::load(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(BksTable::default()),
    }
}

fn solve_cmd(args: SolveArgs) -> Result<()> {
    let inst = read_instance(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let mut params = params_for(&args.opts, &inst);
    params.record_trace = args.trace.is_some();
    params.record_m_trace = args.trace_m.is_some();
    let bks = args.bks.or(load_bks(&args.opts)?.get(inst.name()));

    if args.dump_onetree.is_some() || args.dump_candidates.is_some() {
        let prep = driver::prepare(&inst, &params)?;
        if let Some(p) = &args.dump_onetree {
            write_out(p, &minimum_one_tree(&inst, &prep.pi).dump())?;
        }
        if let Some(p) = &args.dump_candidates {
            write_out(p, &prep.candidates.dump())?;
        }
    }

    let batch = driver::run_batch(&inst, &params, args.opts.runs, bks)?;
    let first = &batch.runs[0];
    let best = batch.runs.iter().min_by_key(|r| r.best_length).expect("runs >= 1");
    eprintln!(
        "{}: best {} avg {:.1} lower bound {} trials {:.1}",
        inst.name(),
        batch.best(),
        batch.average(),
        batch.lower_bound,
        batch.mean_trials()
    );
    let mut report = SuiteReport::new("bandit", &params);
    report
        .rows
        .push(SuiteRow::from_batch(inst.name(), inst.dimension(), &batch, bks, !args.opts.no_timing));
    if let Some(p) = &args.json {
        write_out(p, &report.to_json()?)?;
    }
    if let Some(p) = &args.csv {
        write_out(p, &report.to_csv())?;
    }
    if args.json.is_none() && args.csv.is_none() {
        print!("{}", report.to_table());
    }
    if let Some(p) = &args.trace {
        write_out(p, &first.trace_csv())?;
    }
    if let Some(p) = &args.trace_m {
        let mut out = String::new();
        for (t, row) in first.m_trace.iter().enumerate() {
            out.push_str(&(t + 1).to_string());
            for m in row {
                out.push(',');
                out.push_str(&m.to_string());
            }
            out.push('\n');
        }
        write_out(p, &out)?;
    }
    if let Some(p) = &args.tour_out {
        write_out(p, &write_tour(inst.name(), &best.best_tour.order(), best.best_length))?;
    }
    Ok(())
}

/// Expands directories (their `.tsp` files, sorted) and list files.
fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "tsp"))
                .collect();
            found.sort();
            out.extend(found);
        } else if p.extension().is_some_and(|x| x == "tsp") {
            out.push(p.clone());
        } else {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let base = p.parent().unwrap_or(Path::new("."));
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                out.push(base.join(line));
            }
        }
    }
    if out.is_empty() {
        bail!("no instances found");
    }
    Ok(out)
}

fn bench_cmd(args: BenchArgs, variant: Option<&str>) -> Result<()> {
    let files = collect_inputs(&args.inputs)?;
    let bks = load_bks(&args.opts)?;
    let label = args
        .label
        .clone()
        .unwrap_or_else(|| variant.unwrap_or("bandit").to_string());
    let mut report: Option<SuiteReport> = None;
    for f in &files {
        let inst = read_instance(f).with_context(|| format!("reading {}", f.display()))?;
        let mut params = params_for(&args.opts, &inst);
        if let Some(v) = variant {
            params = ablation_variant(&params, v)?;
        }
        let known = bks.get(inst.name());
        let batch = driver::run_batch(&inst, &params, args.opts.runs, known)?;
        let row = SuiteRow::from_batch(inst.name(), inst.dimension(), &batch, known, !args.opts.no_timing);
        eprintln!("{}: best {} avg {:.1}", row.instance, row.best, row.average);
        report.get_or_insert_with(|| SuiteReport::new(label.clone(), &params)).rows.push(row);
    }
    let report = report.expect("at least one instance");
    if let Some(p) = &args.json {
        write_out(p, &report.to_json()?)?;
    }
    if let Some(p) = &args.csv {
        write_out(p, &report.to_csv())?;
    }
    print!("{}", report.to_table());
    Ok(())
}

fn compare_cmd(first: &Path, second: &Path) -> Result<()> {
    let read = |p: &Path| -> Result<SuiteReport> {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        Ok(SuiteReport::from_json(&text)?)
    };
    let (a, b) = (read(first)?, read(second)?);
    let c = compare_reports(&a, &b)?;
    println!("{:<10} {:>10} {:>10}", "", a.label, b.label);
    println!("{:<10} {:>10} {:>10}", "Win_best", c.win_best, c.loss_best);
    println!("{:<10} {:>10} {:>10}", "Win_avg", c.win_avg, c.loss_avg);
    println!("{:<10} {:>10.4} {:>10.4}", "Gap_best", c.gap_best[0], c.gap_best[1]);
    println!("{:<10} {:>10.4} {:>10.4}", "Gap_avg", c.gap_avg[0], c.gap_avg[1]);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve_cmd(a),
        Command::Bench(b) => bench_cmd(b, None),
        Command::Ablate { variant, bench } => bench_cmd(bench, Some(&variant)),
        Command::Compare { first, second } => compare_cmd(&first, &second),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
