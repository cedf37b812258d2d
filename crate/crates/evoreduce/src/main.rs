use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use evoreduce::data::{load_csv, LabelSelector};
use evoreduce::experiment::{
    emit_report, run_experiment, run_lines, summary_table, ExperimentConfig,
};
use evoreduce::learners::LearnerKind;
use evoreduce::nsga2::EngineConfig;
use evoreduce::Error;

/// Evolutionary feature selection with embedded binary discretization.
///
/// Runs a repeated multi-objective search over a CSV dataset and writes a
/// summary table plus a JSON report to the output directory.
#[derive(Parser, Debug)]
#[command(name = "evoreduce", version)]
struct Cli {
    /// CSV dataset path (optional `<path>.manifest` declares column kinds)
    #[arg(long)]
    data: PathBuf,

    /// Label column: "last", a 0-based index, or a header name
    #[arg(long, default_value = "last")]
    label_col: String,

    /// Final-evaluation learner: nb, c45, or svm
    #[arg(long, default_value = "nb")]
    learner: String,

    /// Wrapper learner during the search ("same" reuses --learner)
    #[arg(long, default_value = "same")]
    wrapper: String,

    /// Independent repetitions of the whole search
    #[arg(long, default_value_t = 10)]
    runs: usize,

    /// Stratified folds for both the wrapper and the final evaluation
    #[arg(long, default_value_t = 10)]
    folds: usize,

    /// Population size
    #[arg(long, default_value_t = 50)]
    pop: usize,

    /// Generation budget
    #[arg(long, default_value_t = 1000)]
    gens: usize,

    /// Crossover probability per offspring pair
    #[arg(long, default_value_t = 0.8)]
    cx_rate: f64,

    /// Per-gene mutation probability (default 1/n)
    #[arg(long)]
    mut_rate: Option<f64>,

    /// Stall tolerance on front-1 objective means
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,

    /// Wall-clock seconds without improvement before stopping
    #[arg(long, default_value_t = 600.0)]
    stall_secs: f64,

    /// Master seed; all run seeds derive from it
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Output directory (default: $EVOREDUCE_OUT, then ./out)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write front.tsv with every run's final front-1 rows
    #[arg(long)]
    emit_front: bool,

    /// Stream per-generation engine log lines to stderr
    #[arg(long)]
    log_generations: bool,

    /// Append wrapper-score columns to the summary table
    #[arg(long)]
    report_wrapper_score: bool,
}

fn parse_learner(name: &str) -> Result<LearnerKind, Error> {
    LearnerKind::parse(name).ok_or_else(|| Error::InvalidConfig {
        detail: format!("unknown learner '{}' (expected nb, c45, or svm)", name),
    })
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    let filter = if cli.log_generations { "evoreduce=debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(filter)).init();

    let selector = LabelSelector::parse(&cli.label_col);
    let dataset = load_csv(&cli.data, &selector)?;
    let learner = parse_learner(&cli.learner)?;
    let wrapper_learner = match cli.wrapper.as_str() {
        "same" => None,
        other => Some(parse_learner(other)?),
    };

    let data_name = cli
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".to_string());
    let mut config = ExperimentConfig::new(data_name, learner);
    config.wrapper_learner = wrapper_learner;
    config.runs = cli.runs;
    config.folds = cli.folds;
    config.wrapper_folds = cli.folds;
    config.master_seed = cli.seed;
    config.report_wrapper_score = cli.report_wrapper_score;
    config.engine = EngineConfig {
        population: cli.pop,
        generations: cli.gens,
        crossover_rate: cli.cx_rate,
        mutation_rate: cli.mut_rate,
        tolerance: cli.tol,
        max_stall_secs: cli.stall_secs,
        ..EngineConfig::default()
    };

    let outcome = run_experiment(&dataset, &config)?;

    let out_dir = cli.out.unwrap_or_else(|| {
        std::env::var_os("EVOREDUCE_OUT")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"))
    });
    let paths = emit_report(&outcome, &out_dir, cli.report_wrapper_score, cli.emit_front)?;

    print!("{}", run_lines(&outcome));
    print!("{}", summary_table(&outcome.summary, cli.report_wrapper_score));
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}
