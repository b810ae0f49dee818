//! `pddc`: run the PDD synthesis pipeline on policy tables.

mod check;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdd_core::gen::{grid_world, random_policy, GridSpec, RandomSpec};
use pdd_core::pipeline::{run_pipeline, PipelineOptions, PipelineResult, Stage};
use pdd_core::policy::{load_policy, Format, Policy};
use pdd_core::reorder::{ReorderMode, ReorderOptions};
use pdd_core::report::{dd_to_dot, dt_to_dot, ComparisonReport, ComparisonRow};
use pdd_core::{build_bbbdd, check_consistent, BbBdd, Error};

#[derive(Parser)]
#[command(name = "pddc", version, about = "Synthesize predicate decision diagrams from policy tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn, compile and shrink each input; write a comparison report.
    Run(RunArgs),
    /// Write a generated benchmark policy.
    Gen(GenArgs),
    /// Run the invariant checks on an input policy.
    Check(CheckArgs),
    /// Write the DOT rendering of the tree or of one pipeline stage.
    Dot(DotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

impl From<TableFormat> for Format {
    fn from(f: TableFormat) -> Format {
        match f {
            TableFormat::Csv => Format::Csv,
            TableFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReorderArg {
    Sift,
    Exhaustive,
    Auto,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Baseline {
    Bbbdd,
    None,
}

/// Options shared by every command that runs the pipeline.
#[derive(Args, Clone)]
struct PipelineArgs {
    /// Input table format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    input_format: Option<TableFormat>,
    /// Stages after compilation, comma separated (plain, reordered, consistent, careset).
    #[arg(long, value_delimiter = ',')]
    stages: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "auto")]
    reorder: ReorderArg,
    /// Largest variable count searched exhaustively.
    #[arg(long, default_value_t = 8)]
    exhaustive_max_vars: usize,
    #[arg(long, value_enum, default_value = "on")]
    careset: Switch,
    /// Stop splitting where all samples share an action.
    #[arg(long)]
    safe_early_stopping: bool,
    /// Forced order of predicate variables, e.g. `p1,p0`.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Report format; inferred from `--out` when omitted, CSV otherwise.
    #[arg(long, value_enum)]
    format: Option<TableFormat>,
    #[arg(long, value_enum, default_value = "bbbdd")]
    baseline: Baseline,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving DOT files for the tree and every stage.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Print the inconsistent paths found before the consistency stage.
    #[arg(long)]
    explain_inconsistency: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Grid,
    Patrol,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid side length.
    #[arg(long, default_value_t = 8)]
    size: usize,
    /// Obstacle count; defaults to a third of the side.
    #[arg(long)]
    obstacles: Option<usize>,
    /// Goal count for grids.
    #[arg(long)]
    goals: Option<usize>,
    #[arg(long, default_value_t = 4)]
    vars: usize,
    #[arg(long, default_value_t = 8)]
    domain: usize,
    #[arg(long, default_value_t = 6)]
    actions: usize,
    #[arg(long, default_value_t = 64)]
    rows: usize,
    /// Output format; inferred from `--out` when omitted.
    #[arg(long, value_enum)]
    format: Option<TableFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DotArgs {
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Stage to render; the last stage run when omitted.
    #[arg(long)]
    stage: Option<String>,
    /// Render the decision tree instead of a diagram.
    #[arg(long)]
    tree: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error bound to an exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    /// Classifies a library error raised while processing `context`.
    pub fn from_core(context: &str, e: Error) -> Self {
        let message = format!("{context}: {e}");
        match e {
            Error::OrderViolation { .. }
            | Error::ManagerMismatch
            | Error::KindMismatch
            | Error::MissingPredicate(_)
            | Error::ConflictingLift(_, _) => CliError::internal(message),
            _ => CliError::input(message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_policy(path: &Path, format: Option<TableFormat>) -> CliResult<Policy> {
    let name = path.display().to_string();
    let format = match format {
        Some(f) => f.into(),
        None => Format::from_path(path)
            .ok_or_else(|| CliError::input(format!("{name}: unknown extension, expected .csv or .json")))?,
    };
    let file = fs::File::open(path).map_err(|e| CliError::input(format!("{name}: {e}")))?;
    load_policy(file, format).map_err(|e| CliError::from_core(&name, e))
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn output_format(explicit: Option<TableFormat>, out: Option<&Path>) -> Format {
    explicit
        .map(Format::from)
        .or_else(|| out.and_then(Format::from_path))
        .unwrap_or(Format::Csv)
}

impl PipelineArgs {
    fn options(&self) -> CliResult<PipelineOptions> {
        let mut stages = match &self.stages {
            Some(list) => list
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Stage>().map_err(|e| CliError::input(format!("--stages: {e}"))))
                .collect::<CliResult<Vec<_>>>()?,
            None => vec![Stage::Reordered, Stage::Consistent, Stage::CareSet],
        };
        if self.reorder == ReorderArg::None {
            stages.retain(|s| *s != Stage::Reordered);
        }
        if self.careset == Switch::Off {
            stages.retain(|s| *s != Stage::CareSet);
        }
        let mode = match self.reorder {
            ReorderArg::Sift => ReorderMode::SiftConverge,
            ReorderArg::Exhaustive => ReorderMode::Exhaustive,
            ReorderArg::Auto | ReorderArg::None => ReorderMode::Auto,
        };
        let forced_order = self
            .order
            .as_ref()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        s.trim()
                            .strip_prefix('p')
                            .and_then(|d| d.parse::<u32>().ok())
                            .ok_or_else(|| CliError::input(format!("--order: `{s}` is not a predicate variable like p0")))
                    })
                    .collect::<CliResult<Vec<_>>>()
            })
            .transpose()?;
        Ok(PipelineOptions {
            learn: pdd_core::LearnOptions {
                safe_early_stopping: self.safe_early_stopping,
                ..Default::default()
            },
            stages,
            reorder: ReorderOptions {
                mode,
                exhaustive_max_vars: self.exhaustive_max_vars,
            },
            forced_order,
            reconsistent_after_reorder: true,
        })
    }
}

fn controller_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

struct Processed {
    name: String,
    policy: Policy,
    run: PipelineResult,
    baseline: Option<(BbBdd, f64)>,
}

fn process(path: &Path, args: &RunArgs) -> CliResult<Processed> {
    let name = path.display().to_string();
    let policy = read_policy(path, args.pipeline.input_format)?;
    let opts = args.pipeline.options()?;
    let run = run_pipeline(&policy, &opts).map_err(|e| CliError::from_core(&name, e))?;
    check::verify_run(&policy, &run).map_err(|e| CliError::internal(format!("{name}: {e}")))?;
    let baseline = match args.baseline {
        Baseline::Bbbdd => {
            let t = Instant::now();
            let bb = build_bbbdd(&policy).map_err(|e| CliError::from_core(&name, e))?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            check::verify_baseline(&policy, &bb).map_err(|e| CliError::internal(format!("{name}: {e}")))?;
            Some((bb, ms))
        }
        Baseline::None => None,
    };
    Ok(Processed {
        name: controller_name(path),
        policy,
        run,
        baseline,
    })
}

fn explain(p: &Processed) {
    let Some(art) = p.run.artifacts.iter().take_while(|a| a.stage != Stage::Consistent).last() else {
        return;
    };
    let report = check_consistent(&art.manager, art.root, &art.gamma);
    eprintln!(
        "{}: {} inconsistent path prefix(es) in the {} diagram{}",
        p.name,
        report.paths.len(),
        art.stage,
        if report.truncated { " (enumeration truncated)" } else { "" }
    );
    for path in &report.paths {
        eprintln!("{}", path.to_json(&art.gamma, p.policy.vars()));
    }
}

fn write_dots(dir: &Path, p: &Processed) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let write = |file: String, text: String| {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    };
    write(format!("{}.dt.dot", p.name), dt_to_dot(&p.run.tree, p.policy.vars()))?;
    for art in &p.run.artifacts {
        write(
            format!("{}.{}.dot", p.name, art.stage),
            dd_to_dot(&art.manager, art.root, &art.gamma, p.policy.vars()),
        )?;
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> CliResult<()> {
    // One manager per input; inputs are processed in parallel and the
    // report is assembled in input order.
    let results: Vec<CliResult<Processed>> = std::thread::scope(|scope| {
        let handles: Vec<_> = args.inputs.iter().map(|p| scope.spawn(|| process(p, &args))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::internal("worker panicked"))))
            .collect()
    });
    let processed = results.into_iter().collect::<CliResult<Vec<_>>>()?;

    let mut report = ComparisonReport::default();
    for p in &processed {
        if args.explain_inconsistency {
            explain(p);
        }
        if let Some(dir) = &args.dot {
            write_dots(dir, p)?;
        }
        let baseline = p.baseline.as_ref().map(|(b, t)| (b, *t));
        report.rows.push(ComparisonRow::new(&p.name, &p.policy, &p.run, baseline));
    }
    let text = match output_format(args.format, args.out.as_deref()) {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_gen(args: GenArgs) -> CliResult<()> {
    let policy = match args.kind {
        GenKind::Grid | GenKind::Patrol => {
            let base = if args.kind == GenKind::Grid {
                GridSpec::square(args.size, args.seed)
            } else {
                GridSpec::patrol(args.size, args.seed)
            };
            grid_world(GridSpec {
                obstacles: args.obstacles.unwrap_or(base.obstacles),
                goals: args.goals.unwrap_or(base.goals),
                ..base
            })
        }
        GenKind::Random => random_policy(RandomSpec {
            max_vars: args.vars,
            max_domain: args.domain,
            max_actions: args.actions,
            max_rows: args.rows,
            seed: args.seed,
        }),
    }
    .map_err(|e| CliError::from_core("gen", e))?;
    let text = match output_format(args.format, args.out.as_deref()) {
        Format::Csv => policy.to_csv(),
        Format::Json => policy.to_json(),
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_check(args: CheckArgs) -> CliResult<()> {
    let name = args.input.display().to_string();
    let policy = read_policy(&args.input, args.pipeline.input_format)?;
    let opts = args.pipeline.options()?;
    let lines = check::run_suite(&policy, &opts, args.seed).map_err(|e| CliError::from_core(&name, e))?;
    let mut failed = 0;
    for (label, outcome) in &lines {
        match outcome {
            Ok(detail) => println!("PASS {label}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {label}: {detail}");
            }
        }
    }
    if failed > 0 {
        return Err(CliError::internal(format!("{name}: {failed} check(s) failed")));
    }
    Ok(())
}

fn cmd_dot(args: DotArgs) -> CliResult<()> {
    let name = args.input.display().to_string();
    let policy = read_policy(&args.input, args.pipeline.input_format)?;
    let mut opts = args.pipeline.options()?;
    let stage = args
        .stage
        .as_deref()
        .map(|s| s.parse::<Stage>().map_err(|e| CliError::input(format!("--stage: {e}"))))
        .transpose()?;
    if let Some(s) = stage {
        if s != Stage::Plain && !opts.stages.contains(&s) {
            opts.stages.push(s);
        }
    }
    let run = run_pipeline(&policy, &opts).map_err(|e| CliError::from_core(&name, e))?;
    let text = if args.tree {
        dt_to_dot(&run.tree, policy.vars())
    } else {
        let art = match stage {
            Some(s) => run.artifact(s).expect("requested stage was run"),
            None => run.last(),
        };
        dd_to_dot(&art.manager, art.root, &art.gamma, policy.vars())
    };
    write_output(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
        Command::Dot(a) => cmd_dot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
