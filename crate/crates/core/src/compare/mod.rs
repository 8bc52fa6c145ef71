//! Side-by-side comparison of every method on one dataset: errors,
//! legality of the basis vectors, hard-assignment histograms, and
//! plot-ready exports.

mod export;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

pub use export::{export_assignment_histogram, export_basis_vectors, export_labels, write_report_json};

use crate::error::{Error, Result};
use crate::factorize::{FactorizationResult, Method, SolverOptions};
use crate::matrix::RandomSeed;
use crate::telemetry::{
    generate_population, hard_assign, interpolate_missing, legality_report, load_telemetry, ExpansionSchedule,
    LegalityReport, SyntheticSpec, TelemetryMatrix,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSource {
    Telemetry { csv: PathBuf, schedule: PathBuf },
    SyntheticFile { spec: PathBuf },
    Synthetic { spec: Box<SyntheticSpec> },
}

/// Per-run overrides of [`SolverOptions`] fields.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolverOverrides {
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub fuzzifier_m: Option<f64>,
    pub center_pca: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: InputSource,
    pub methods: Vec<Method>,
    pub k: usize,
    pub seed: u64,
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub solver: SolverOverrides,
}

impl RunConfig {
    pub fn new(input: InputSource, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input,
            methods: Method::ALL.to_vec(),
            k: 8,
            seed: 0,
            output_dir: output_dir.into(),
            solver: SolverOverrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::config("methods", "at least one method is required"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::config("methods", format!("`{m}` listed twice")));
            }
        }
        if self.k < 2 {
            return Err(Error::config("k", "must be at least 2"));
        }
        self.solver_options().validate_fields()
    }

    pub fn solver_options(&self) -> SolverOptions {
        let base = SolverOptions::default();
        SolverOptions {
            k: self.k,
            max_iterations: self.solver.max_iterations.unwrap_or(base.max_iterations),
            tolerance: self.solver.tolerance.unwrap_or(base.tolerance),
            fuzzifier_m: self.solver.fuzzifier_m.unwrap_or(base.fuzzifier_m),
            center_pca: self.solver.center_pca.unwrap_or(base.center_pca),
            seed: RandomSeed(self.seed),
        }
    }
}

impl SolverOptions {
    fn validate_fields(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations", "must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("tolerance", "must be positive"));
        }
        if !(self.fuzzifier_m > 1.0) {
            return Err(Error::config("fuzzifier_m", "must be > 1"));
        }
        Ok(())
    }
}

/// Interpolated data ready for factorization.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub telemetry: TelemetryMatrix,
    pub schedule: ExpansionSchedule,
    /// Column indices of planted archetypes (synthetic inputs only).
    pub planted: Option<Vec<usize>>,
    pub observed_fraction: f64,
}

pub fn load_dataset(input: &InputSource) -> Result<Dataset> {
    let (raw, schedule, planted) = match input {
        InputSource::Telemetry { csv, schedule } => {
            let schedule = ExpansionSchedule::load(schedule)?;
            (load_telemetry(csv, &schedule)?, schedule, None)
        }
        InputSource::SyntheticFile { spec } => {
            let spec = SyntheticSpec::load(spec)?;
            let (t, planted) = generate_population(&spec)?;
            (t, spec.schedule, Some(planted))
        }
        InputSource::Synthetic { spec } => {
            let (t, planted) = generate_population(spec)?;
            (t, spec.schedule.clone(), Some(planted))
        }
    };
    let observed_fraction = raw.observed_fraction();
    Ok(Dataset {
        telemetry: interpolate_missing(raw)?,
        schedule,
        planted,
        observed_fraction,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MethodOutcome {
    Completed {
        reconstruction_error: f64,
        iterations: usize,
        converged: bool,
        legality: LegalityReport,
        histogram: Vec<usize>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodReport {
    pub method: Method,
    #[serde(flatten)]
    pub outcome: MethodOutcome,
    pub notes: Vec<String>,
    /// Machine-dependent, so it stays out of the written report.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

impl MethodReport {
    pub fn histogram(&self) -> Option<&[usize]> {
        match &self.outcome {
            MethodOutcome::Completed { histogram, .. } => Some(histogram),
            MethodOutcome::Skipped { .. } => None,
        }
    }

    pub fn reconstruction_error(&self) -> Option<f64> {
        match self.outcome {
            MethodOutcome::Completed { reconstruction_error, .. } => Some(reconstruction_error),
            MethodOutcome::Skipped { .. } => None,
        }
    }

    pub fn legality(&self) -> Option<&LegalityReport> {
        match &self.outcome {
            MethodOutcome::Completed { legality, .. } => Some(legality),
            MethodOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub days: usize,
    pub players: usize,
    pub first_day: u32,
    pub last_day: u32,
    pub observed_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planted_indices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub dataset: DatasetSummary,
    pub seed: u64,
    pub k: usize,
    pub schedule: ExpansionSchedule,
    /// Residuals are reported as `‖V − WH‖_F`, not squared.
    pub error_metric: &'static str,
    pub config: RunConfig,
    pub methods: Vec<MethodReport>,
}

impl ComparisonReport {
    pub fn method(&self, m: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == m)
    }
}

/// Everything a comparison run produced, before it is written out.
#[derive(Debug, Clone)]
pub struct ComparisonRun {
    pub report: ComparisonReport,
    pub dataset: Dataset,
    pub results: Vec<FactorizationResult>,
    pub labels: Vec<(Method, Vec<usize>)>,
}

/// Runs every requested method and writes all artifacts to the output
/// directory.
pub fn run_compare(config: &RunConfig) -> Result<ComparisonReport> {
    let run = execute(config)?;
    write_outputs(&run, &config.output_dir)?;
    Ok(run.report)
}

/// Runs the comparison without touching the filesystem for output.
pub fn execute(config: &RunConfig) -> Result<ComparisonRun> {
    config.validate()?;
    let dataset = load_dataset(&config.input)?;
    let v = dataset.telemetry.matrix();
    let opts = config.solver_options();
    let negative = v.values().iter().any(|&x| x < 0.0);

    let mut methods = Vec::new();
    let mut results = Vec::new();
    let mut labels = Vec::new();
    for &method in &config.methods {
        let mut notes = notes_for(method, &opts);
        if method == Method::Nmf && negative {
            methods.push(MethodReport {
                method,
                outcome: MethodOutcome::Skipped {
                    reason: "input contains negative values; NMF needs a non-negative matrix".into(),
                },
                notes,
                wall_time_ms: 0.0,
            });
            continue;
        }
        let started = Instant::now();
        let result = crate::factorize(method, v, &opts)?;
        let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        if !result.converged {
            notes.push(format!("stopped at the iteration limit ({})", opts.max_iterations));
        }
        let legality = legality_report(&result.w, &dataset.schedule, dataset.telemetry.day_axis())?;
        let assignment = hard_assign(v, &result)?;
        methods.push(MethodReport {
            method,
            outcome: MethodOutcome::Completed {
                reconstruction_error: result.reconstruction_error,
                iterations: result.iterations,
                converged: result.converged,
                legality,
                histogram: assignment.histogram,
            },
            notes,
            wall_time_ms,
        });
        labels.push((method, assignment.labels));
        results.push(result);
    }

    let t = &dataset.telemetry;
    let report = ComparisonReport {
        dataset: DatasetSummary {
            days: t.days(),
            players: t.players(),
            first_day: t.day_axis()[0],
            last_day: *t.day_axis().last().unwrap(),
            observed_fraction: dataset.observed_fraction,
            planted_indices: dataset.planted.clone(),
        },
        seed: config.seed,
        k: config.k,
        schedule: dataset.schedule.clone(),
        error_metric: "frobenius_norm",
        config: config.clone(),
        methods,
    };
    Ok(ComparisonRun {
        report,
        dataset,
        results,
        labels,
    })
}

fn notes_for(method: Method, opts: &SolverOptions) -> Vec<String> {
    match method {
        Method::Cmeans => vec![format!(
            "fuzzifier m = {} and relative-change tolerance {} are conventional defaults, not reported values",
            opts.fuzzifier_m, opts.tolerance
        )],
        Method::Pca if opts.center_pca => vec!["mean-centered; centering vector added back for assignment".into()],
        Method::Pca => vec!["uncentered truncated singular decomposition".into()],
        Method::Archetypal => vec![format!("first vertex drawn with seed {}", opts.seed.0)],
        _ => Vec::new(),
    }
}

/// Writes `report.json`, `histogram.csv`, and per-method `basis_*.csv` and
/// `labels_*.csv` files.
pub fn write_outputs(run: &ComparisonRun, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let t = &run.dataset.telemetry;
    for result in &run.results {
        export_basis_vectors(result, t.day_axis(), dir.join(format!("basis_{}.csv", result.method)))?;
    }
    for (method, labels) in &run.labels {
        export_labels(t.player_ids(), labels, dir.join(format!("labels_{method}.csv")))?;
    }
    export_assignment_histogram(&run.report, dir.join("histogram.csv"))?;
    write_report_json(&run.report, dir.join("report.json"))
}
