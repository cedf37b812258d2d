//! Repeated-run experiment protocol and report emission.
//!
//! One experiment runs the engine `runs` times with seeds derived from a
//! single master seed, picks one solution per run, scores it and the
//! all-features baseline with an independent stratified cross-validation,
//! and aggregates everything into a one-row summary table plus a JSON
//! report. Reports carry no timing data, so a fixed master seed reproduces
//! them byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::{Dataset, FoldPlan};
use crate::encoding::{transform, DecodedView};
use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::nsga2::{evolve, EngineConfig, Individual};
use crate::wrapper::{cv_fold_accuracies, WrapperConfig};

/// Substream labels for [`derive_seed`].
pub const STREAM_ENGINE: u64 = 1;
pub const STREAM_WRAPPER_FOLDS: u64 = 2;
pub const STREAM_FINAL_EVAL: u64 = 3;

/// Mix (master, run, stream) into an independent 64-bit seed with the
/// splitmix64 finalizer.
pub fn derive_seed(master: u64, run: u64, stream: u64) -> u64 {
    let mut z = master
        ^ run.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ stream.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Dataset name used in the report's first column and file prefix.
    pub data_name: String,
    pub learner: LearnerKind,
    /// Wrapper learner during the search; `None` means same as `learner`.
    pub wrapper_learner: Option<LearnerKind>,
    pub runs: usize,
    /// Folds for the independent final evaluation.
    pub folds: usize,
    /// Folds inside the wrapper objective.
    pub wrapper_folds: usize,
    pub engine: EngineConfig,
    pub master_seed: u64,
    /// Append wrapper-score columns to the summary table.
    pub report_wrapper_score: bool,
}

impl ExperimentConfig {
    pub fn new(data_name: impl Into<String>, learner: LearnerKind) -> ExperimentConfig {
        ExperimentConfig {
            data_name: data_name.into(),
            learner,
            wrapper_learner: None,
            runs: 10,
            folds: 10,
            wrapper_folds: 10,
            engine: EngineConfig::default(),
            master_seed: 42,
            report_wrapper_score: false,
        }
    }

    pub fn wrapper_kind(&self) -> LearnerKind {
        self.wrapper_learner.unwrap_or(self.learner)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig { detail: "runs must be ≥ 1".into() });
        }
        if self.folds < 2 || self.wrapper_folds < 2 {
            return Err(Error::InvalidConfig { detail: "folds must be ≥ 2".into() });
        }
        self.engine.validate()
    }
}

/// Pick one solution from a sorted final population: smallest wrapper
/// error, ties by larger gain, then fewer selected attributes, then lowest
/// index.
pub fn select_best_solution(population: &[Individual]) -> usize {
    assert!(!population.is_empty(), "selection from an empty population");
    let mut best: Option<usize> = None;
    for (i, ind) in population.iter().enumerate() {
        if ind.rank != 1 {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let cur = &population[b];
                let sel_i = ind.chromosome.genes.iter().filter(|g| g.select).count();
                let sel_b = cur.chromosome.genes.iter().filter(|g| g.select).count();
                (ind.objectives.f2, ind.objectives.f1, sel_i)
                    < (cur.objectives.f2, cur.objectives.f1, sel_b)
            }
        };
        if better {
            best = Some(i);
        }
    }
    best.expect("a sorted population always has a front-1 member")
}

/// Accuracy of `learner` on the view-transformed dataset under a fresh
/// stratified `folds`-fold plan seeded by `seed`.
pub fn evaluate_final(
    dataset: &Dataset,
    view: &DecodedView,
    learner: LearnerKind,
    folds: usize,
    seed: u64,
) -> Result<f64> {
    let transformed = transform(dataset, view)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = FoldPlan::stratified(&transformed.labels, folds, &mut rng)?;
    let accs = cv_fold_accuracies(&transformed, &plan, learner)?;
    Ok(accs.iter().sum::<f64>() / accs.len() as f64)
}

/// One front-1 member of a run's final population.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontRow {
    pub rank: usize,
    pub gain: f64,
    pub error: f64,
    pub selected: usize,
    pub discretized: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub front_count: usize,
    pub selected: usize,
    pub discretized: usize,
    pub gain: f64,
    pub wrapper_error: f64,
    pub proposed_accuracy: f64,
    pub baseline_accuracy: f64,
    pub generations_run: usize,
    pub termination: String,
    pub front1: Vec<FrontRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub data: String,
    pub features: usize,
    pub runs: usize,
    pub selected_mean: f64,
    pub discretized_mean: f64,
    pub fronts_mean: f64,
    pub baseline_mean: f64,
    pub baseline_std: f64,
    pub proposed_mean: f64,
    pub proposed_std: f64,
    pub wrapper_mean: f64,
    pub wrapper_std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub data: String,
    pub learner: String,
    pub wrapper: String,
    pub runs: usize,
    pub folds: usize,
    pub wrapper_folds: usize,
    pub master_seed: u64,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

fn mean(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count();
    xs.sum::<f64>() / n as f64
}

fn sample_std(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = xs.clone().count();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs.clone());
    (xs.map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Run the whole protocol. Any failing run aborts the experiment; no
/// partial aggregates are produced.
pub fn run_experiment(dataset: &Dataset, config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let wrapper_kind = config.wrapper_kind();
    let mut records = Vec::with_capacity(config.runs);
    for run in 0..config.runs {
        let wrapper = WrapperConfig {
            folds: config.wrapper_folds,
            fold_seed: derive_seed(config.master_seed, run as u64, STREAM_WRAPPER_FOLDS),
            ..WrapperConfig::new(wrapper_kind)
        };
        let engine_seed = derive_seed(config.master_seed, run as u64, STREAM_ENGINE);
        let result = evolve(dataset, &config.engine, &wrapper, engine_seed)?;

        let best = select_best_solution(&result.population);
        let chosen = &result.population[best];
        let view = chosen.chromosome.decode(&dataset.attributes);

        let eval_seed = derive_seed(config.master_seed, run as u64, STREAM_FINAL_EVAL);
        let proposed =
            evaluate_final(dataset, &view, config.learner, config.folds, eval_seed)?;
        let baseline = evaluate_final(
            dataset,
            &DecodedView::identity(dataset.attributes.len()),
            config.learner,
            config.folds,
            eval_seed,
        )?;

        let front1 = result.fronts[0]
            .iter()
            .map(|&i| {
                let ind = &result.population[i];
                let sel = ind.chromosome.genes.iter().filter(|g| g.select).count();
                let v = ind.chromosome.decode(&dataset.attributes);
                FrontRow {
                    rank: 1,
                    gain: ind.objectives.gain(),
                    error: ind.objectives.f2,
                    selected: sel,
                    discretized: v.cuts.len(),
                }
            })
            .collect();
        records.push(RunRecord {
            run,
            front_count: result.fronts.len(),
            selected: view.selected.len(),
            discretized: view.cuts.len(),
            gain: chosen.objectives.gain(),
            wrapper_error: chosen.objectives.f2,
            proposed_accuracy: proposed,
            baseline_accuracy: baseline,
            generations_run: result.generations_run,
            termination: result.termination.name().to_string(),
            front1,
        });
    }

    let summary = Summary {
        data: config.data_name.clone(),
        features: dataset.attributes.len(),
        runs: config.runs,
        selected_mean: mean(records.iter().map(|r| r.selected as f64)),
        discretized_mean: mean(records.iter().map(|r| r.discretized as f64)),
        fronts_mean: mean(records.iter().map(|r| r.front_count as f64)),
        baseline_mean: mean(records.iter().map(|r| r.baseline_accuracy)),
        baseline_std: sample_std(records.iter().map(|r| r.baseline_accuracy)),
        proposed_mean: mean(records.iter().map(|r| r.proposed_accuracy)),
        proposed_std: sample_std(records.iter().map(|r| r.proposed_accuracy)),
        wrapper_mean: mean(records.iter().map(|r| 1.0 - r.wrapper_error)),
        wrapper_std: sample_std(records.iter().map(|r| 1.0 - r.wrapper_error)),
    };
    Ok(ExperimentOutcome {
        data: config.data_name.clone(),
        learner: config.learner.name().to_string(),
        wrapper: wrapper_kind.name().to_string(),
        runs: config.runs,
        folds: config.folds,
        wrapper_folds: config.wrapper_folds,
        master_seed: config.master_seed,
        records,
        summary,
    })
}

/// Render the one-row summary table. Counts use two decimals, accuracies
/// three.
pub fn summary_table(summary: &Summary, with_wrapper_score: bool) -> String {
    let mut header = String::from(
        "Data\tFeatures\tSelected\tDiscretized\tNo. of fronts\tAccuracy\tStd.\tProposed Accuracy\tStd.",
    );
    let mut row = format!(
        "{}\t{}\t{:.2}\t{:.2}\t{:.2}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
        summary.data,
        summary.features,
        summary.selected_mean,
        summary.discretized_mean,
        summary.fronts_mean,
        summary.baseline_mean,
        summary.baseline_std,
        summary.proposed_mean,
        summary.proposed_std,
    );
    if with_wrapper_score {
        header.push_str("\tWrapper Score\tStd.");
        row.push_str(&format!("\t{:.3}\t{:.3}", summary.wrapper_mean, summary.wrapper_std));
    }
    format!("{}\n{}\n", header, row)
}

/// Write `summary.tsv` and `report.json` (and `front.tsv` when requested)
/// under `dir`, creating it if missing. Returns the paths written.
pub fn emit_report(
    outcome: &ExperimentOutcome,
    dir: &Path,
    with_wrapper_score: bool,
    emit_front: bool,
) -> Result<Vec<PathBuf>> {
    let io_err =
        |path: &Path, source: std::io::Error| Error::Io { path: path.to_path_buf(), source };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();

    let tsv_path = dir.join("summary.tsv");
    fs::write(&tsv_path, summary_table(&outcome.summary, with_wrapper_score))
        .map_err(|e| io_err(&tsv_path, e))?;
    written.push(tsv_path);

    let json_path = dir.join("report.json");
    let mut json = serde_json::to_string_pretty(outcome).expect("report serialization");
    json.push('\n');
    fs::write(&json_path, json).map_err(|e| io_err(&json_path, e))?;
    written.push(json_path);

    if emit_front {
        let front_path = dir.join("front.tsv");
        let mut out = String::from("run\trank\tgain\terror\tselected\tdiscretized\n");
        for record in &outcome.records {
            for row in &record.front1 {
                out.push_str(&format!(
                    "{}\t{}\t{:.6}\t{:.6}\t{}\t{}\n",
                    record.run, row.rank, row.gain, row.error, row.selected, row.discretized
                ));
            }
        }
        fs::write(&front_path, out).map_err(|e| io_err(&front_path, e))?;
        written.push(front_path);
    }
    Ok(written)
}

/// Per-run one-line progress summaries for interactive output.
pub fn run_lines(outcome: &ExperimentOutcome) -> String {
    let mut out = String::new();
    for r in &outcome.records {
        out.push_str(&format!(
            "run {}\tfronts {}\tselected {}\tdiscretized {}\tgain {:.4}\twrapper_err {:.4}\tacc {:.4}\tbaseline {:.4}\tgens {}\tstop {}\n",
            r.run,
            r.front_count,
            r.selected,
            r.discretized,
            r.gain,
            r.wrapper_error,
            r.proposed_accuracy,
            r.baseline_accuracy,
            r.generations_run,
            r.termination,
        ));
    }
    out
}
