use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use playprof::compare::{execute, write_outputs, InputSource, MethodOutcome, RunConfig, SolverOverrides};
use playprof::telemetry::{
    generate_population, interpolate_missing, legality_report, load_telemetry, write_telemetry_csv, SyntheticSpec,
};
use playprof::{Error, ExpansionSchedule, Method, RandomSeed};

#[derive(Parser)]
#[command(name = "playprof", version, about = "Compare factorization-based player clustering methods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected methods on one dataset and write all artifacts.
    Compare(CompareArgs),
    /// Write a synthetic population to CSV, with its schedule, spec and planted columns.
    Generate(GenerateArgs),
    /// Ingest a telemetry CSV and report schedule legality of the raw curves.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CompareArgs {
    /// Telemetry CSV with columns player_id,day_index,level.
    #[arg(long, conflicts_with = "synthetic", requires = "schedule")]
    input: Option<PathBuf>,
    /// Level-cap schedule CSV with columns day_index,level_cap.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Synthetic population spec (TOML).
    #[arg(long, conflicts_with = "schedule")]
    synthetic: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of kmeans,cmeans,nmf,pca,archetypal.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Fuzzifier exponent for c-means.
    #[arg(long)]
    fuzzifier: Option<f64>,
    /// Mean-center before PCA.
    #[arg(long)]
    center_pca: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Spec file; the built-in default population is used when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compare(args) => compare(args),
        Command::Generate(args) => generate(args),
        Command::Validate(args) => validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Validation { rows, .. } = &e {
                let shown: Vec<String> = rows.iter().take(20).map(u64::to_string).collect();
                eprintln!("  offending lines: {}{}", shown.join(", "), if rows.len() > 20 { ", ..." } else { "" });
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Dimension(_) | Error::Arity(_) => 2,
        Error::Parse { .. } | Error::Validation { .. } | Error::EmptyInput(_) | Error::Io { .. } | Error::Format { .. } => 3,
        Error::Domain(_) | Error::NonFinite { .. } | Error::Degenerate { .. } | Error::Numerical(_) => 4,
    }
}

fn compare(args: CompareArgs) -> playprof::Result<()> {
    let input = match (args.input, args.schedule, args.synthetic) {
        (Some(csv), Some(schedule), None) => InputSource::Telemetry { csv, schedule },
        (None, None, Some(spec)) => InputSource::SyntheticFile { spec },
        (None, Some(_), None) => {
            return Err(config_error("input", "--schedule needs --input"));
        }
        _ => return Err(config_error("input", "pass either --input with --schedule, or --synthetic")),
    };
    let mut config = RunConfig::new(input, args.out);
    if let Some(names) = args.methods {
        config.methods = names.iter().map(|s| s.trim().parse()).collect::<playprof::Result<Vec<Method>>>()?;
    }
    config.k = args.k;
    config.seed = args.seed;
    config.solver = SolverOverrides {
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        fuzzifier_m: args.fuzzifier,
        center_pca: args.center_pca.then_some(true),
    };

    let run = execute(&config)?;
    write_outputs(&run, &config.output_dir)?;

    let summary = &run.report.dataset;
    eprintln!("{} days x {} players, k = {}", summary.days, summary.players, config.k);
    for m in &run.report.methods {
        match &m.outcome {
            MethodOutcome::Completed {
                reconstruction_error,
                iterations,
                converged,
                legality,
                ..
            } => eprintln!(
                "{:<11} error {:<14.6} iterations {:<4} converged {:<5} legality {:.3}  ({:.1} ms)",
                m.method.as_str(),
                reconstruction_error,
                iterations,
                converged,
                legality.aggregate_legality,
                m.wall_time_ms
            ),
            MethodOutcome::Skipped { reason } => eprintln!("{:<11} skipped: {reason}", m.method.as_str()),
        }
    }
    eprintln!("wrote {}", config.output_dir.display());
    Ok(())
}

fn generate(args: GenerateArgs) -> playprof::Result<()> {
    let mut spec = match &args.spec {
        Some(path) => SyntheticSpec::load(path)?,
        None => SyntheticSpec::default(),
    };
    if let Some(seed) = args.seed {
        spec.seed = RandomSeed(seed);
    }
    let started = Instant::now();
    let (telemetry, planted) = generate_population(&spec)?;
    let out = &args.out;
    std::fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    write_telemetry_csv(&telemetry, out.join("telemetry.csv"))?;
    write_text(&out.join("schedule.csv"), &spec.schedule.to_csv_string())?;
    write_text(&out.join("spec.toml"), &spec.to_toml_string())?;
    let mut planted_csv = String::from("archetype,column,player_id\n");
    for (a, &col) in planted.iter().enumerate() {
        planted_csv.push_str(&format!("{a},{col},{}\n", telemetry.player_ids()[col]));
    }
    write_text(&out.join("planted.csv"), &planted_csv)?;
    eprintln!(
        "{} players over {} days ({:.1}% observed) in {:.1} ms",
        telemetry.players(),
        telemetry.days(),
        100.0 * telemetry.observed_fraction(),
        started.elapsed().as_secs_f64() * 1e3
    );
    Ok(())
}

fn validate(args: ValidateArgs) -> playprof::Result<()> {
    let schedule = ExpansionSchedule::load(&args.schedule)?;
    let raw = load_telemetry(&args.input, &schedule)?;
    let observed = raw.observed_fraction();
    let t = interpolate_missing(raw)?;
    let report = legality_report(t.matrix(), &schedule, t.day_axis())?;
    let illegal: Vec<&str> = report
        .per_vector
        .iter()
        .zip(t.player_ids())
        .filter(|(v, _)| !v.is_legal)
        .map(|(_, id)| id.as_str())
        .collect();
    println!("players: {}", t.players());
    println!("days: {} ({}..={})", t.days(), t.day_axis()[0], t.day_axis()[t.days() - 1]);
    println!("observed_fraction: {observed}");
    println!("legal_players: {}", t.players() - illegal.len());
    println!("aggregate_legality: {}", report.aggregate_legality);
    for id in illegal.iter().take(20) {
        println!("illegal: {id}");
    }
    if illegal.len() > 20 {
        println!("illegal: ... {} more", illegal.len() - 20);
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> playprof::Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn config_error(field: &str, message: &str) -> Error {
    Error::Config {
        field: field.to_owned(),
        message: message.to_owned(),
    }
}
