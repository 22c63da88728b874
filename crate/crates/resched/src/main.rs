use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resched_core::linesched::{build_line_schedule, AlphaVector};
use resched_core::model::validate_schedule;
use resched_core::JobSet;
use serde_json::json;

use resched::compare::{compare, expand};
use resched::exit;
use resched::format::{parse_instance, parse_schedule, write_instance, write_schedule};
use resched::gen::{adversarial, random_instance, Distribution};
use resched::report::write_csv;
use resched::runner::{run, Algo, RunParams};
use resched::svg::{render, DualOverlay, SvgOptions};

#[derive(Parser)]
#[command(name = "resched", version, about = "Scheduling jobs that share a single divisible resource")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an instance file.
    Gen(GenArgs),
    /// Run one algorithm on one instance; prints a JSON run record.
    Run(RunArgs),
    /// Validate a schedule against an instance.
    Verify(VerifyArgs),
    /// Run several algorithms on many instances and write a CSV table.
    Compare(CompareArgs),
    /// Render a schedule as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Adversarial,
    /// Re-read an instance file, perturbing equal volumes apart.
    File,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    kind: Kind,
    #[arg(short, long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    vmin: f64,
    #[arg(long, default_value_t = 10.0)]
    vmax: f64,
    #[arg(long, default_value_t = 0.05)]
    rmin: f64,
    /// Source instance for `--kind file`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// WaterFill ratio; defaults to e/(e-1).
    #[arg(long)]
    c: Option<f64>,
    /// Threshold between light and heavy jobs; rounded to 1/k.
    #[arg(long)]
    mu: Option<f64>,
    /// Slot length of the discretized LP.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Grid size for the extendability check.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Use the exact line schedule inside `best` (default).
    #[arg(long, conflicts_with = "lp_ls")]
    exact_ls: bool,
    /// Use LSApprox inside `best`.
    #[arg(long)]
    lp_ls: bool,
}

impl ParamArgs {
    fn params(&self) -> RunParams {
        RunParams {
            eps: self.eps,
            mu: self.mu,
            c: self.c,
            delta: self.delta,
            tol: self.tol,
            grid: self.grid,
            exact_ls: !self.lp_ls,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, short)]
    algo: Algo,
    #[arg(long, short)]
    input: PathBuf,
    /// Where to write the schedule JSON.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Where to write the run record; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short)]
    instance: PathBuf,
    #[arg(long, short)]
    schedule: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct CompareArgs {
    /// Glob patterns for instance files.
    #[arg(long, short, required = true, num_args = 1..)]
    inputs: Vec<String>,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "greedy,ls")]
    algos: Vec<Algo>,
    /// CSV path; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Leave `wall_ms` empty so reruns give identical bytes.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, short)]
    schedule: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    /// Overlay the dual lines and γ; needs `--instance` and an `alpha` field.
    #[arg(long, requires = "instance")]
    duals: bool,
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 400)]
    height: u32,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: exit::USAGE, message: message.into() }
}

type CmdResult = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<JobSet, Failure> {
    parse_instance(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let jobs = match a.kind {
        Kind::Random => {
            let dist = Distribution { v_min: a.vmin, v_max: a.vmax, r_min: a.rmin };
            dist.validate().map_err(usage)?;
            random_instance(a.n, a.seed, &dist)
        }
        Kind::Adversarial => adversarial(a.n),
        Kind::File => {
            let path = a.input.ok_or_else(|| usage("--kind file needs --input"))?;
            load_instance(&path)?.perturb_ties()
        }
    };
    write(a.out.as_deref(), &write_instance(&jobs))?;
    Ok(exit::OK)
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let params = a.params.params();
    params.validate().map_err(usage)?;
    let jobs = load_instance(&a.input)?;
    let out = run(a.algo, &a.input.display().to_string(), &jobs, &params);
    if let (Some(path), Some(s)) = (&a.schedule, &out.schedule) {
        write(Some(path), &write_schedule(s, out.alpha.as_deref()))?;
    }
    let text = serde_json::to_string_pretty(&out.record).expect("record serializes") + "\n";
    write(a.out.as_deref(), &text)?;
    if let Some(f) = &out.record.failure {
        eprintln!("{}", json!({ "error": f }));
        return Ok(if f.kind == "validation" { exit::VALIDATION } else { exit::ALGORITHM });
    }
    if out.validation_failed() {
        eprintln!("{}", json!({ "error": { "kind": "validation", "message": "schedule failed validation" } }));
        return Ok(exit::VALIDATION);
    }
    Ok(exit::OK)
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let jobs = load_instance(&a.instance)?;
    let file = parse_schedule(&read(&a.schedule)?).map_err(|e| usage(format!("{}: {e}", a.schedule.display())))?;
    let rep = validate_schedule(&jobs, &file.schedule, a.tol).map_err(|e| usage(e.to_string()))?;
    let violations: Vec<_> = rep
        .violations
        .iter()
        .map(|v| json!({ "kind": format!("{:?}", v.kind), "job": v.job, "interval": v.interval, "magnitude": v.magnitude }))
        .collect();
    let text = json!({ "feasible": rep.feasible, "tol": a.tol, "violations": violations });
    println!("{}", serde_json::to_string_pretty(&text).expect("report serializes"));
    Ok(if rep.feasible { exit::OK } else { exit::VALIDATION })
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let params = a.params.params();
    params.validate().map_err(usage)?;
    let files = expand(&a.inputs).map_err(usage)?;
    if files.is_empty() {
        return Err(usage("no instance files match the given patterns"));
    }
    if a.algos.is_empty() {
        return Err(usage("no algorithms given"));
    }
    let records = compare(&files, &a.algos, &params, a.workers);
    let names: Vec<String> = a.algos.iter().map(|x| x.name().to_string()).collect();
    let mut buf = Vec::new();
    write_csv(&mut buf, &records, &names, !a.no_timing).map_err(|e| usage(e.to_string()))?;
    write(a.out.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))?;
    let failed = records.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", records.len());
    }
    Ok(exit::OK)
}

fn cmd_plot(a: PlotArgs) -> CmdResult {
    let file = parse_schedule(&read(&a.schedule)?).map_err(|e| usage(format!("{}: {e}", a.schedule.display())))?;
    let mut opts = SvgOptions { width: a.width, height: a.height, duals: None };
    if a.duals {
        let path = a.instance.as_deref().expect("clap enforces --instance");
        let jobs = load_instance(path)?;
        let alpha = file.alpha.clone().ok_or_else(|| usage("schedule has no alpha field; --duals needs a line schedule"))?;
        if alpha.len() != jobs.len() {
            return Err(usage("alpha length differs from the instance size"));
        }
        let alpha = AlphaVector::new(alpha).map_err(|e| usage(e.to_string()))?;
        let ls = build_line_schedule(&jobs, &alpha).map_err(|e| usage(e.to_string()))?;
        opts.duals = Some(DualOverlay {
            lines: alpha.iter().zip(jobs.iter()).map(|(a, j)| (*a, j.volume())).collect(),
            gamma: ls.gamma,
        });
    }
    write(Some(&a.out), &render(&file.schedule, &opts))?;
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Plot(a) => cmd_plot(a),
    };
    let code = match res {
        Ok(c) => c,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
