//! `parity-bench`: projections, decoding and operation-count benchmarks from
//! the command line.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 on data errors
//! (unreadable or malformed input files, inconsistent dimensions).

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_fix::admm::{awgn_llr, BuiltinProjector, ProjectorKind, XUpdateSign};
use parity_fix::bench::{self, BenchRow, BenchSpec, PlotColumn};
use parity_fix::{baselines, fix, oracle, parse_alist, Algorithm, DecoderConfig, LlrVector, ParityKind};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "parity-bench", version, about = "Parity-polytope projection, ADMM decoding and op-count benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Project a vector onto a parity polytope and print the result and trace.
    Project(ProjectArgs),
    /// Decode one frame with the ADMM LP decoder.
    Decode(DecodeArgs),
    /// Mean operation counts per dimension and algorithm.
    BenchOps(BenchArgs),
    /// Probability that the box projection leaves the even polytope.
    BenchProb(BenchArgs),
    /// Mean component-fixing iterations in the hard case.
    BenchIters(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Even,
    Odd,
}

impl From<KindArg> for ParityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Even => ParityKind::Even,
            KindArg::Odd => ParityKind::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProjectorArg {
    Fix,
    ZhangSiegel,
    WassonDraper,
    Oracle,
}

impl From<ProjectorArg> for ProjectorKind {
    fn from(p: ProjectorArg) -> Self {
        match p {
            ProjectorArg::Fix => ProjectorKind::Algorithm(Algorithm::Fix),
            ProjectorArg::ZhangSiegel => ProjectorKind::Algorithm(Algorithm::ZhangSiegel),
            ProjectorArg::WassonDraper => ProjectorKind::Algorithm(Algorithm::WassonDraper),
            ProjectorArg::Oracle => ProjectorKind::Oracle,
        }
    }
}

#[derive(Args, Debug)]
struct ProjectArgs {
    /// Input coordinates.
    #[arg(required = true, allow_negative_numbers = true)]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value = "even")]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "fix")]
    algo: ProjectorArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum XUpdateArg {
    Standard,
    Reversed,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Parity-check matrix in alist format.
    #[arg(long)]
    alist: PathBuf,
    /// Comma- or space-separated LLRs.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["llr_file", "received", "all_zero"])]
    llr: Option<String>,
    /// File of whitespace- or comma-separated LLRs.
    #[arg(long, conflicts_with_all = ["received", "all_zero"])]
    llr_file: Option<PathBuf>,
    /// Received BPSK samples (0 -> +1); needs --sigma.
    #[arg(long, allow_hyphen_values = true, requires = "sigma", conflicts_with = "all_zero")]
    received: Option<String>,
    /// Noiseless all-zero frame; LLRs are 2/sigma^2 (sigma defaults to 1).
    #[arg(long)]
    all_zero: bool,
    /// AWGN noise standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Primal and dual residual tolerance.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long, value_enum, default_value = "standard")]
    x_update: XUpdateArg,
    #[arg(long, value_enum, default_value = "fix")]
    projector: ProjectorArg,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Dimensions: `LO..=HI`, `LO-HI` or a single `N`.
    #[arg(long, default_value = "2..=50", value_parser = parse_degrees)]
    degrees: RangeInclusive<usize>,
    /// Half-width a of the input distribution U[-a, a).
    #[arg(long, default_value_t = 10.0)]
    range: f64,
    #[arg(long, default_value_t = bench::DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated algorithms (fix, zhang-siegel, wasson-draper).
    #[arg(long, default_value = "fix,zhang-siegel,wasson-draper", value_parser = parse_algos)]
    algos: AlgoList,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    svg_out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Debug)]
struct AlgoList(Vec<Algorithm>);

fn parse_degrees(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid degree `{}`", t.trim()));
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let n = num(s)?;
        (n, n)
    };
    if lo > hi || lo < 2 || hi > 64 {
        return Err(format!("degrees {lo}..={hi} must satisfy 2 <= lo <= hi <= 64"));
    }
    Ok(lo..=hi)
}

fn parse_algos(s: &str) -> Result<AlgoList, String> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let a: Algorithm = name.parse().map_err(|e: parity_fix::opcount::UnknownAlgorithm| e.to_string())?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err("no algorithm given".into());
    }
    Ok(AlgoList(out))
}

fn fmt_vec(v: &[f64]) -> String {
    // `+ 0.0` turns -0 into 0
    v.iter().map(|x| (x + 0.0).to_string()).collect::<Vec<_>>().join(" ")
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn parse_numbers(text: &str, origin: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v: f64 = tok
                .parse()
                .map_err(|_| CliError::Data(format!("{origin}:{}: invalid number `{tok}`", lineno + 1)))?;
            out.push(v);
        }
    }
    Ok(out)
}

fn run_project(args: &ProjectArgs, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    if let Some(i) = args.x.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Data(format!("coordinate {} is not finite", i + 1)));
    }
    let kind = args.kind.into();
    let io = |e: std::io::Error| CliError::Data(e.to_string());
    match args.algo {
        ProjectorArg::Fix => {
            let p = fix::project(&args.x, kind);
            writeln!(out, "{}", fmt_vec(&p.z)).map_err(io)?;
            writeln!(
                out,
                "iterations={} fixed={:?} terminated_by={:?}",
                p.trace.iterations, p.trace.fixes_per_iteration, p.trace.terminated_by
            )
            .map_err(io)?;
        }
        other => {
            let z = match other {
                ProjectorArg::ZhangSiegel => baselines::project_zhang_siegel(&args.x, kind),
                ProjectorArg::WassonDraper => baselines::project_wasson_draper(&args.x, kind),
                _ => oracle::project(&args.x, kind),
            };
            writeln!(out, "{}", fmt_vec(&z)).map_err(io)?;
        }
    }
    Ok(())
}

fn run_decode(args: &DecodeArgs, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let alist_name = args.alist.display().to_string();
    let h = parse_alist(&read_file(&args.alist)?).map_err(|e| CliError::Data(format!("{alist_name}: {e}")))?;
    let data = |e: parity_fix::admm::DecodeError| CliError::Data(e.to_string());
    if let Some(s) = args.sigma {
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::Usage(format!("--sigma must be positive, got {s}")));
        }
    }
    let llr = if let Some(text) = &args.llr {
        LlrVector::new(parse_numbers(text, "--llr")?).map_err(data)?
    } else if let Some(path) = &args.llr_file {
        let name = path.display().to_string();
        LlrVector::new(parse_numbers(&read_file(path)?, &name)?).map_err(data)?
    } else if let Some(text) = &args.received {
        let y = parse_numbers(text, "--received")?;
        awgn_llr(&y, args.sigma.expect("clap enforces --sigma")).map_err(data)?
    } else if args.all_zero {
        awgn_llr(&vec![1.0; h.n()], args.sigma.unwrap_or(1.0)).map_err(data)?
    } else {
        return Err(CliError::Usage(
            "one of --llr, --llr-file, --received or --all-zero is required".into(),
        ));
    };
    let cfg = DecoderConfig {
        rho: args.rho,
        max_iterations: args.max_iters,
        primal_tolerance: args.tol,
        dual_tolerance: args.tol,
        x_update_sign: match args.x_update {
            XUpdateArg::Standard => XUpdateSign::StandardAdmm,
            XUpdateArg::Reversed => XUpdateSign::Reversed,
        },
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = parity_fix::decode(&llr, &h, &cfg, BuiltinProjector::new(args.projector.into())).map_err(data)?;
    let word: Vec<String> = outcome.hard_decision.iter().map(u8::to_string).collect();
    let io = |e: std::io::Error| CliError::Data(e.to_string());
    writeln!(out, "{}", word.join(" ")).map_err(io)?;
    writeln!(out, "status={:?}", outcome.status).map_err(io)?;
    writeln!(out, "iterations={}", outcome.iterations).map_err(io)?;
    Ok(())
}

#[derive(Clone, Copy)]
enum BenchKind {
    Ops,
    Prob,
    Iters,
}

fn run_bench(which: BenchKind, args: &BenchArgs, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let spec = BenchSpec {
        algorithms: args.algos.0.clone(),
        degrees: args.degrees.clone(),
        half_range: args.range,
        trials: args.trials,
        seed: args.seed,
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if args.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let usage = |e: bench::BenchError| CliError::Usage(e.to_string());
    let (rows, column, title): (Vec<BenchRow>, _, _) = match which {
        BenchKind::Ops => (
            bench::run_op_bench(&spec, args.workers).map_err(usage)?,
            PlotColumn::LowOps,
            "Mean low-complexity operations",
        ),
        BenchKind::Prob => (
            bench::run_probability(&spec, args.workers).map_err(usage)?,
            PlotColumn::HardCaseFraction,
            "Probability that the box projection is not in the polytope",
        ),
        BenchKind::Iters => (
            bench::run_iteration_stats(&spec, args.workers).map_err(usage)?,
            PlotColumn::Iterations,
            "Mean iterations in the hard case",
        ),
    };
    let csv = bench::to_csv(&rows);
    let write_to = |path: &Path, text: &str| {
        fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    };
    match &args.csv_out {
        Some(path) => write_to(path, &csv)?,
        None => out.write_all(csv.as_bytes()).map_err(|e| CliError::Data(e.to_string()))?,
    }
    if let Some(path) = &args.svg_out {
        write_to(path, &bench::to_svg(&rows, column, title))?;
    }
    if matches!(which, BenchKind::Ops) {
        if let Some((d, s)) = bench::savings_vs_best_baseline(&rows)
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
        {
            eprintln!(
                "max total-op savings of Fix vs the cheaper baseline: {:.1}% at d={d}",
                100.0 * s
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Project(a) => run_project(a, &mut out),
        Command::Decode(a) => run_decode(a, &mut out),
        Command::BenchOps(a) => run_bench(BenchKind::Ops, a, &mut out),
        Command::BenchProb(a) => run_bench(BenchKind::Prob, a, &mut out),
        Command::BenchIters(a) => run_bench(BenchKind::Iters, a, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
