//! Benchmark harness: loads Li & Lim instances, runs the static or dynamic
//! solver, and writes table-shaped JSON/CSV reports.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use pdptw::bounds::compute_bounds;
use pdptw::dynamic::{parse_events, run_dynamic, DynamicEvent, InsertionMethod};
use pdptw::evolution::{run_static, GaConfig};
use pdptw::instance::{parse_lilim, Instance};
use pdptw::oracle::exact_front;
use pdptw::report::{self, derive_events, RunReport};
use pdptw::schedule::Weights;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Plan all couples upfront.
    Static,
    /// Replay events with greedy best-position insertion.
    DynamicM1,
    /// Replay events with genetic suffix re-optimization.
    DynamicM2,
}

impl Mode {
    fn tag(self) -> &'static str {
        match self {
            Mode::Static => "static",
            Mode::DynamicM1 => "m1",
            Mode::DynamicM2 => "m2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "pdptw-bench", about = "m-PDPTW genetic solver benchmark harness")]
struct Args {
    /// Single instance file in the Li & Lim layout.
    #[arg(long, conflicts_with = "instance_dir")]
    instance: Option<PathBuf>,

    /// Directory of instance files; every *.txt inside is run.
    #[arg(long)]
    instance_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "static")]
    mode: Mode,

    /// Dynamic events CSV (t_d plus pickup and delivery fields per line).
    #[arg(long)]
    events: Option<PathBuf>,

    /// Derive events from the instance: FRACTION of couples re-emitted at
    /// t_d = RELEASE * horizon.
    #[arg(long, num_args = 2, value_names = ["FRACTION", "RELEASE"])]
    derive_events: Option<Vec<f64>>,

    /// Flat key=value (TOML) file with GaConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Population size n.
    #[arg(long)]
    pop: Option<usize>,

    /// Generation budget.
    #[arg(long)]
    gens: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    lambda1: Option<f64>,

    #[arg(long)]
    lambda2: Option<f64>,

    /// Vehicle-split samples per permutation (m_v).
    #[arg(long)]
    mv: Option<usize>,

    /// Output base path (single run) or directory (directory mode).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// Also compute the exhaustive Pareto front (tiny instances only).
    #[arg(long)]
    oracle: bool,
}

fn load_config(args: &Args) -> Result<GaConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("cannot parse config {}", path.display()))?
        }
        None => GaConfig::default(),
    };
    if let Some(n) = args.pop {
        cfg.population_size = n;
    }
    if let Some(g) = args.gens {
        cfg.generations = g;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(l1) = args.lambda1 {
        cfg.lambda1 = l1;
    }
    if let Some(l2) = args.lambda2 {
        cfg.lambda2 = l2;
    }
    if let Some(mv) = args.mv {
        cfg.split_samples = mv;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_uppercase())
        .unwrap_or_else(|| "INSTANCE".into())
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_lilim(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn gather_events(args: &Args, inst: &Instance, cfg: &GaConfig) -> Result<(Instance, Vec<DynamicEvent>)> {
    match (&args.events, &args.derive_events) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read events {}", path.display()))?;
            let events = parse_events(&text)?;
            Ok((inst.clone(), events))
        }
        (None, Some(fr)) => {
            let (reduced, events) = derive_events(inst, fr[0], fr[1], cfg.seed)?;
            Ok((reduced, events))
        }
        (Some(_), Some(_)) => bail!("--events and --derive-events are mutually exclusive"),
        (None, None) => bail!("dynamic modes need --events or --derive-events"),
    }
}

fn run_one(path: &Path, args: &Args, cfg: &GaConfig) -> Result<(RunReport, std::time::Duration)> {
    let inst = load_instance(path)?;
    let name = instance_name(path);

    let (report, wall) = match args.mode {
        Mode::Static => {
            let bounds = compute_bounds(&inst)?;
            let weights = Weights {
                lambda1: cfg.lambda1,
                lambda2: cfg.lambda2,
                c1: bounds.c1,
                c2: bounds.c2,
            };
            let (archive, stats) = run_static(&inst, cfg)?;
            (report::report_static(&name, cfg, bounds, weights, &archive), stats.wall)
        }
        Mode::DynamicM1 | Mode::DynamicM2 => {
            let method = if args.mode == Mode::DynamicM1 {
                InsertionMethod::Greedy
            } else {
                InsertionMethod::Reoptimize
            };
            let (reduced, events) = gather_events(args, &inst, cfg)?;
            let run = run_dynamic(&reduced, &events, cfg, method)?;
            let bounds = compute_bounds(&run.instance)?;
            (
                report::report_dynamic(&name, cfg, bounds, &run, args.mode.tag()),
                run.stats.wall,
            )
        }
    };

    if args.oracle {
        let oracle = exact_front(&inst)?;
        eprintln!(
            "{name}: exact front has {} points over {} feasible solutions",
            oracle.front.len(),
            oracle.enumerated
        );
        for (obj, _) in &oracle.front {
            eprintln!("  f1={:.6} f2={:.6}", obj.f1, obj.f2);
        }
    }
    Ok((report, wall))
}

fn write_outputs(report: &RunReport, base: Option<&Path>, format: Format) -> Result<()> {
    let json = report::to_json(report);
    let csv = report::to_csv(report);
    match base {
        None => match format {
            Format::Json => println!("{json}"),
            Format::Csv => print!("{csv}"),
            Format::Both => bail!("--format both requires --out"),
        },
        Some(base) => {
            let base = base.to_path_buf();
            let stem = if base.extension().is_some() {
                base.with_extension("")
            } else {
                base.clone()
            };
            if let Some(dir) = stem.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            if matches!(format, Format::Json | Format::Both) {
                fs::write(stem.with_extension("json"), &json)?;
            }
            if matches!(format, Format::Csv | Format::Both) {
                fs::write(stem.with_extension("csv"), &csv)?;
            }
        }
    }
    Ok(())
}

fn derive_instance_seed(base: u64, name: &str) -> u64 {
    // FNV-1a over the instance name; the std hasher is not stable across
    // releases, and reports must reproduce byte-for-byte.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    base ^ h
}

fn run_directory(dir: &Path, args: &Args, cfg: &GaConfig) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no *.txt instances under {}", dir.display());
    }
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
    fs::create_dir_all(&out_dir)?;

    let job = |path: &PathBuf| -> Result<String> {
        let name = instance_name(path);
        let mut sub = clone_args_with_seed(cfg, derive_instance_seed(cfg.seed, &name));
        let (report, wall) = run_one(path, args, &mut sub)?;
        let base = out_dir.join(path.file_stem().unwrap());
        write_outputs(&report, Some(&base), args.format)?;
        Ok(format!(
            "{name}: N_sol={} best_f1={} wall={:.2}s",
            report.n_sol,
            report.summary.min_f1.as_ref().map_or(f64::NAN, |r| r.f1),
            wall.as_secs_f64()
        ))
    };

    #[cfg(feature = "parallel")]
    let lines: Vec<Result<String>> = {
        use rayon::prelude::*;
        files.par_iter().map(job).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let lines: Vec<Result<String>> = files.iter().map(job).collect();

    let mut failed = false;
    for line in lines {
        match line {
            Ok(msg) => eprintln!("{msg}"),
            Err(e) => {
                failed = true;
                eprintln!("error: {e:#}");
            }
        }
    }
    if failed {
        bail!("at least one instance failed");
    }
    Ok(())
}

fn clone_args_with_seed(cfg: &GaConfig, seed: u64) -> GaConfig {
    GaConfig { seed, ..cfg.clone() }
}

fn main() -> Result<()> {
    let args = Args::parse();
    let cfg = load_config(&args)?;

    match (&args.instance, &args.instance_dir) {
        (Some(path), None) => {
            let (report, wall) = run_one(path, &args, &cfg)?;
            eprintln!(
                "{}: N_sol={} wall={:.2}s",
                report.instance,
                report.n_sol,
                wall.as_secs_f64()
            );
            write_outputs(&report, args.out.as_deref(), args.format)
        }
        (None, Some(dir)) => run_directory(dir, &args, &cfg),
        _ => Err(anyhow!("exactly one of --instance or --instance-dir is required")),
    }
}
