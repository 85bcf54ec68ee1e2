use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infocausality::analysis::{verify_appendix_inequality, BoundConvention};
use infocausality::protocol::{BobQuery, BoxSource, GameConfig};
use infocausality::Correlation;
use infocausality_cli::behavior_file::load_behavior;
use infocausality_cli::config::ExperimentConfig;
use infocausality_cli::emit::{self, Emit};
use infocausality_cli::reports::{analyze, play, GameCsvRow, PolytopeReport, Report};
use infocausality_cli::reproduce::reproduce_paper;
use infocausality_cli::sweep::sweep;

/// No-signaling boxes, the information-causality guessing game, and the
/// numbers around it.
#[derive(Parser)]
#[command(name = "infocausality", version)]
struct Cli {
    /// Base seed for Monte Carlo runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play the guessing game with a depth-n pyramid of boxes.
    Game(GameArgs),
    /// Entropy verdicts, violation threshold and sufficient depth for one E.
    Analyze(AnalyzeArgs),
    /// Check that E = 1/sqrt2 never violates, three independent ways.
    Appendix {
        #[arg(long, default_value_t = 64)]
        n_max: u32,
    },
    /// Deterministic tables, polytope vertices and behavior classification.
    Polytope(PolytopeArgs),
    /// Recompute every published worked number.
    Reproduce,
    /// Run a grid of games from a config file.
    Sweep {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct GameArgs {
    /// Pyramid depth; Alice holds 2^n bits.
    #[arg(long)]
    n: u32,
    /// Isotropic box strength E in [-1, 1].
    #[arg(long = "E", visible_alias = "e", allow_negative_numbers = true, required_unless_present = "behavior")]
    e: Option<f64>,
    /// Behavior file to use instead of an isotropic box.
    #[arg(long, conflicts_with = "e")]
    behavior: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Message bits, one pyramid each.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Fixed indices Bob asks for, comma separated (m of them).
    #[arg(long, value_delimiter = ',')]
    guess_set: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Query::Path)]
    query: Query,
    /// Write one JSON line per round here.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Query {
    Path,
    EveryBox,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long = "E", visible_alias = "e", allow_negative_numbers = true)]
    e: f64,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 64)]
    scan_n_max: u32,
    /// Which `a` defines the sufficient depth; both when omitted.
    #[arg(long, value_enum)]
    a_convention: Option<Convention>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    #[value(name = "two_e_squared", alias = "two_E_squared")]
    TwoESquared,
    #[value(name = "delta_from_tsirelson")]
    DeltaFromTsirelson,
}

#[derive(Args)]
struct PolytopeArgs {
    #[arg(long)]
    enumerate: bool,
    /// Behavior file to classify.
    #[arg(long, value_name = "FILE")]
    classify: Option<PathBuf>,
    #[arg(long)]
    classical_optimum: bool,
}

struct Output {
    emit: Emit,
    out: Option<PathBuf>,
}

impl Output {
    fn json(&self, report: &Report) -> anyhow::Result<()> {
        Ok(emit::write(self.out.as_deref(), &emit::json(report)?)?)
    }

    fn report<T: serde::Serialize>(&self, report: &Report, rows: &[T]) -> anyhow::Result<()> {
        match self.emit {
            Emit::Json => self.json(report),
            Emit::Csv => Ok(emit::write(self.out.as_deref(), &emit::csv(rows)?)?),
        }
    }
}

fn game(args: GameArgs, seed: u64, output: &Output) -> anyhow::Result<()> {
    let source = match (&args.behavior, args.e) {
        (Some(path), _) => BoxSource::Behavior(load_behavior(path)?),
        (None, Some(e)) => BoxSource::Isotropic(Correlation::new(e)?),
        (None, None) => bail!("either --E or --behavior is required"),
    };
    let cfg = GameConfig {
        depth: args.n,
        source,
        trials: args.trials,
        seed,
        messages: args.m,
        bob_query: match args.query {
            Query::Path => BobQuery::Path,
            Query::EveryBox => BobQuery::EveryBox,
        },
    };
    cfg.validate()?;
    let mut transcript = match &args.transcript {
        Some(path) => Some(BufWriter::new(create(path)?)),
        None => None,
    };
    let result = play(&cfg, args.guess_set.as_deref(), transcript.as_mut().map(|w| w as &mut dyn Write))?;
    let row = GameCsvRow::from(&result);
    output.report(&Report::Game(result), &[row])
}

fn create(path: &Path) -> anyhow::Result<File> {
    File::create(path).with_context(|| format!("cannot create {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut output = Output { emit: cli.emit.unwrap_or_default(), out: cli.out };
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Game(args) => game(args, seed, &output),
        Command::Analyze(args) => {
            let conventions: Vec<BoundConvention> = match args.a_convention {
                Some(Convention::TwoESquared) => vec![BoundConvention::TwoESquared],
                Some(Convention::DeltaFromTsirelson) => vec![BoundConvention::DeltaFromTsirelson],
                None => vec![BoundConvention::TwoESquared, BoundConvention::DeltaFromTsirelson],
            };
            let report = analyze(Correlation::new(args.e)?, args.n, args.scan_n_max, &conventions);
            let scan = report.scan.clone();
            output.report(&Report::Analyze(report), &scan)
        }
        Command::Appendix { n_max } => {
            let report = verify_appendix_inequality(n_max)?;
            let rows = report.rows.clone();
            let holds = report.all_hold;
            output.report(&Report::Appendix(report), &rows)?;
            if !holds {
                bail!("the inequality failed for some depth");
            }
            Ok(())
        }
        Command::Polytope(args) => {
            let nothing = !args.enumerate && args.classify.is_none() && !args.classical_optimum;
            let classify_input = match &args.classify {
                Some(path) => Some((path.display().to_string(), load_behavior(path)?)),
                None => None,
            };
            let report =
                PolytopeReport::build(args.enumerate || nothing, classify_input, args.classical_optimum || nothing);
            let summary = report.summary();
            output.report(&Report::Polytope(report), &summary)
        }
        Command::Reproduce => {
            let rows = reproduce_paper();
            output.report(&Report::Reproduce { rows: rows.clone() }, &rows)
        }
        Command::Sweep { config } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if cli.emit.is_none() {
                output.emit = cfg.format.unwrap_or_default();
            }
            if output.out.is_none() {
                output.out = cfg.out.clone();
            }
            let report = sweep(&cfg)?;
            let rows = report.rows.clone();
            output.report(&Report::Sweep(report), &rows)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
