//! Planning and execution of the two sweeps, plus the aggregations built on
//! their record sets.
//!
//! Every run draws from its own stream of the master seed. The stream id
//! packs the cell coordinates:
//!
//! ```text
//! bit 63      mode
//! bits 60..63 algorithm
//! bits 55..60 function (0-based)
//! bits 48..55 configuration index
//! bits 0..48  run index
//! ```
//!
//! so results do not depend on which worker executes a run or in which order.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use bsa_core::stats::{wilcoxon_signed_rank, WilcoxonResult};
use bsa_core::{
    Algorithm, BoundaryPolicy, FunctionId, RandomSource, RunSettings, SearchSpace, Target,
};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentSpec, Metric, Mode};
use crate::error::{LabError, Result};
use crate::report::{ComparisonRow, ComparisonTable};

pub const ANNOTATION_OUTSIDE_DOMAIN: &str = "override-exceeds-domain";
pub const ANNOTATION_MINIMIZER_OUTSIDE: &str = "minimizer-outside-box";

/// Result of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub function: FunctionId,
    pub mode: Mode,
    /// Configuration label: `D10`, `D30`, ... or `R1`, `R2`, ...
    pub config: String,
    /// Run index within the cell; runs with equal index are paired.
    pub seed: usize,
    pub dims: usize,
    pub stream: u64,
    pub best_value: f64,
    pub evaluations: u64,
    pub evals_to_target: Option<u64>,
    pub wall_time_s: f64,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

/// Identity of a run inside an experiment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunKey {
    pub mode: Mode,
    pub algorithm: Algorithm,
    pub function: FunctionId,
    pub config: String,
    pub seed: usize,
}

impl RunRecord {
    pub fn key(&self) -> RunKey {
        RunKey {
            mode: self.mode,
            algorithm: self.algorithm,
            function: self.function,
            config: self.config.clone(),
            seed: self.seed,
        }
    }
}

/// One planned run.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub mode: Mode,
    pub config_index: usize,
    pub config: String,
    pub algorithm: Algorithm,
    pub function: FunctionId,
    pub dims: usize,
    pub space: SearchSpace,
    pub seed: usize,
    pub annotation: Option<String>,
}

impl Task {
    pub fn key(&self) -> RunKey {
        RunKey {
            mode: self.mode,
            algorithm: self.algorithm,
            function: self.function,
            config: self.config.clone(),
            seed: self.seed,
        }
    }

    pub fn stream(&self) -> u64 {
        stream_id(
            self.mode,
            self.algorithm,
            self.function,
            self.config_index,
            self.seed,
        )
    }
}

pub fn stream_id(
    mode: Mode,
    algorithm: Algorithm,
    function: FunctionId,
    config_index: usize,
    run: usize,
) -> u64 {
    debug_assert!(config_index < 128 && (run as u64) < (1 << 48));
    mode.index() << 63
        | algorithm.index() << 60
        | ((function.number() - 1) as u64) << 55
        | (config_index as u64) << 48
        | run as u64
}

/// Labels of the configurations of `mode` under `spec`.
pub fn config_labels(spec: &ExperimentSpec, mode: Mode) -> Vec<String> {
    match mode {
        Mode::DimensionSweep => spec.dims.iter().map(|d| format!("D{d}")).collect(),
        Mode::RangeSweep => (1..=spec.ranges.len()).map(|i| format!("R{i}")).collect(),
    }
}

fn range_annotation(function: FunctionId, space: &SearchSpace) -> Result<Option<String>> {
    let canonical = function.at_dims(2)?.default_space;
    let mut notes = Vec::new();
    if !canonical.encloses(space) {
        notes.push(ANNOTATION_OUTSIDE_DOMAIN);
    }
    if !function.minimizers(2).iter().any(|p| space.contains(p)) {
        notes.push(ANNOTATION_MINIMIZER_OUTSIDE);
    }
    Ok((!notes.is_empty()).then(|| notes.join(";")))
}

/// All runs of `mode`, ordered by (algorithm, function, config, run).
pub fn plan_mode(spec: &ExperimentSpec, mode: Mode) -> Result<Vec<Task>> {
    let labels = config_labels(spec, mode);
    let mut cells = Vec::new();
    for &function in &spec.functions {
        for (ci, label) in labels.iter().enumerate() {
            let (dims, space, annotation) = match mode {
                Mode::DimensionSweep => {
                    let d = if function.scalable() {
                        spec.dims[ci]
                    } else {
                        2
                    };
                    (d, function.at_dims(d)?.default_space, None)
                }
                Mode::RangeSweep => {
                    let h = spec.ranges[ci];
                    let space = SearchSpace::uniform(2, -h, h)?;
                    let note = range_annotation(function, &space)?;
                    (2, space, note)
                }
            };
            cells.push((function, ci, label.clone(), dims, space, annotation));
        }
    }
    let mut tasks = Vec::with_capacity(spec.algorithms.len() * cells.len() * spec.runs);
    for &algorithm in &spec.algorithms {
        for (function, ci, label, dims, space, annotation) in &cells {
            for seed in 0..spec.runs {
                tasks.push(Task {
                    mode,
                    config_index: *ci,
                    config: label.clone(),
                    algorithm,
                    function: *function,
                    dims: *dims,
                    space: space.clone(),
                    seed,
                    annotation: annotation.clone(),
                });
            }
        }
    }
    Ok(tasks)
}

/// All runs of every mode in `spec`, modes in the order given.
pub fn plan(spec: &ExperimentSpec) -> Result<Vec<Task>> {
    let mut all = Vec::new();
    for &mode in &spec.modes {
        all.extend(plan_mode(spec, mode)?);
    }
    Ok(all)
}

/// Executes a single planned run.
pub fn execute_task(spec: &ExperimentSpec, task: &Task) -> Result<RunRecord> {
    let objective = task.function.at_dims(task.dims)?;
    let global_min = objective.global_min_value;
    let settings = RunSettings {
        pop_size: spec.pop_size,
        max_iterations: spec.iterations,
        target: Some(Target {
            value: global_min,
            epsilon: spec.success_epsilon,
            halt: spec.halt_on_target(),
        }),
        boundary: BoundaryPolicy::Regenerate,
        record_trace: false,
    };
    let stream = task.stream();
    let mut rng = RandomSource::new(spec.master_seed, stream);
    let start = Instant::now();
    let outcome = task
        .algorithm
        .minimize(&objective, &task.space, &settings, &mut rng)?;
    let wall_time_s = if spec.timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    Ok(RunRecord {
        algorithm: task.algorithm,
        function: task.function,
        mode: task.mode,
        config: task.config.clone(),
        seed: task.seed,
        dims: task.dims,
        stream,
        best_value: outcome.best_value,
        evaluations: outcome.evaluations,
        evals_to_target: outcome.evals_to_target,
        wall_time_s,
        success: (outcome.best_value - global_min).abs() <= spec.success_epsilon,
        annotation: task.annotation.clone(),
    })
}

/// Runs `tasks` on `spec.jobs` workers. `on_record` is called on the calling
/// thread as each run finishes, in completion order; the returned records
/// follow task order. Tasks whose key is in `skip` are not run and are left
/// out of the result.
pub fn execute<F>(
    spec: &ExperimentSpec,
    tasks: &[Task],
    skip: &HashSet<RunKey>,
    mut on_record: F,
) -> Result<Vec<RunRecord>>
where
    F: FnMut(&RunRecord) -> Result<()>,
{
    let pending: Vec<&Task> = tasks.iter().filter(|t| !skip.contains(&t.key())).collect();
    let mut slots: Vec<Option<RunRecord>> = vec![None; pending.len()];
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let workers = spec.jobs.clamp(1, pending.len().max(1));
    let mut failure: Option<LabError> = None;

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord>)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (pending, next, stop) = (&pending, &next, &stop);
            scope.spawn(move || {
                while !stop.load(Ordering::Relaxed) {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(task) = pending.get(i) else { break };
                    if tx.send((i, execute_task(spec, task))).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        for (i, result) in rx {
            if failure.is_some() {
                continue;
            }
            match result.and_then(|r| on_record(&r).map(|()| r)) {
                Ok(record) => slots[i] = Some(record),
                Err(e) => {
                    stop.store(true, Ordering::Relaxed);
                    failure = Some(e);
                }
            }
        }
    });

    if let Some(e) = failure {
        return Err(e);
    }
    Ok(slots
        .into_iter()
        .map(|r| r.expect("every pending task produced a record"))
        .collect())
}

fn run_mode(spec: &ExperimentSpec, mode: Mode) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let tasks = plan_mode(spec, mode)?;
    execute(spec, &tasks, &HashSet::new(), |_| Ok(()))
}

/// Scalable functions at each of `spec.dims` on their default boxes;
/// fixed two-dimensional functions run at D = 2 in every cell.
pub fn run_dimension_sweep(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    run_mode(spec, Mode::DimensionSweep)
}

/// Every function at D = 2 inside each box `[-h, h]^2` of `spec.ranges`.
pub fn run_range_sweep(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    run_mode(spec, Mode::RangeSweep)
}

/// Success counts for one group of records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessRatio {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub config: String,
    /// `None` when the group spans every function of the configuration.
    pub function: Option<FunctionId>,
    pub runs: usize,
    pub successes: usize,
}

impl SuccessRatio {
    pub fn success_ratio(&self) -> f64 {
        self.successes as f64 / self.runs as f64
    }

    pub fn failure_ratio(&self) -> f64 {
        (self.runs - self.successes) as f64 / self.runs as f64
    }
}

fn ratios<K: Ord>(
    records: &[RunRecord],
    key: impl Fn(&RunRecord) -> K,
    per_function: bool,
) -> Vec<SuccessRatio> {
    let mut groups: BTreeMap<K, SuccessRatio> = BTreeMap::new();
    for r in records {
        let g = groups.entry(key(r)).or_insert_with(|| SuccessRatio {
            algorithm: r.algorithm,
            mode: r.mode,
            config: r.config.clone(),
            function: per_function.then_some(r.function),
            runs: 0,
            successes: 0,
        });
        g.runs += 1;
        g.successes += usize::from(r.success);
    }
    groups.into_values().collect()
}

/// Fraction of successful (function, run) cells per algorithm and
/// configuration. Groups without records do not appear.
pub fn success_ratio(records: &[RunRecord]) -> Vec<SuccessRatio> {
    ratios(
        records,
        |r| (r.algorithm, r.mode, config_order(&r.config)),
        false,
    )
}

/// Like [`success_ratio`] but also split by function.
pub fn success_ratio_by_function(records: &[RunRecord]) -> Vec<SuccessRatio> {
    ratios(
        records,
        |r| (r.algorithm, r.mode, config_order(&r.config), r.function),
        true,
    )
}

/// Prefix, number and remainder of a config label.
pub type ConfigOrder = (String, u64, String);

/// Sort key placing `D10` before `D30` and `R2` before `R10`.
pub fn config_order(label: &str) -> ConfigOrder {
    let split = label
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(label.len());
    let (head, tail) = label.split_at(split);
    (
        head.to_string(),
        tail.parse().unwrap_or(u64::MAX),
        label.to_string(),
    )
}

/// How per-run metrics are derived for the paired comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonOptions {
    pub metric: Metric,
    pub alpha: f64,
    /// Value given to runs that never reached the target, or `None` to leave
    /// their metric undefined.
    pub censor_value: Option<f64>,
}

/// Censored time for runs that did not succeed.
pub const CENSORED_TIME_S: f64 = 1e9;

impl ComparisonOptions {
    pub fn for_spec(spec: &ExperimentSpec) -> Self {
        let censor_value = spec.censor.then(|| match spec.metric {
            Metric::Evals => {
                let settings = RunSettings {
                    pop_size: spec.pop_size,
                    max_iterations: spec.iterations,
                    ..RunSettings::default()
                };
                let cap = Algorithm::ALL
                    .iter()
                    .map(|a| a.max_evaluations(&settings))
                    .max()
                    .unwrap_or(0);
                (cap + 1) as f64
            }
            Metric::Time | Metric::Best => CENSORED_TIME_S,
        });
        Self {
            metric: spec.metric,
            alpha: 0.05,
            censor_value,
        }
    }

    /// The quantity compared for `record`; lower is better.
    pub fn metric_of(&self, record: &RunRecord) -> Option<f64> {
        match self.metric {
            Metric::Best => Some(record.best_value),
            Metric::Evals => record
                .evals_to_target
                .map(|e| e as f64)
                .or(self.censor_value),
            Metric::Time => {
                if record.success {
                    Some(record.wall_time_s)
                } else {
                    self.censor_value
                }
            }
        }
    }
}

/// Comparison tables, one per (mode, configuration), and the cells that
/// could not be compared.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSet {
    pub tables: Vec<ComparisonTable>,
    pub warnings: Vec<String>,
}

impl ComparisonSet {
    /// Verdict tally per competitor over every table.
    pub fn totals(&self) -> Vec<(Algorithm, bsa_core::stats::VerdictSummary)> {
        let mut totals: Vec<(Algorithm, bsa_core::stats::VerdictSummary)> = Vec::new();
        for table in &self.tables {
            for (alg, summary) in table.competitors.iter().zip(table.footer()) {
                match totals.iter_mut().find(|(a, _)| a == alg) {
                    Some((_, t)) => {
                        t.plus += summary.plus;
                        t.equal += summary.equal;
                        t.minus += summary.minus;
                    }
                    None => totals.push((*alg, summary)),
                }
            }
        }
        totals
    }
}

type Cell<'a> = BTreeMap<Algorithm, BTreeMap<usize, &'a RunRecord>>;

/// Pairs BSA against every other algorithm, run by run, on each problem that
/// every algorithm solved at least once and for which the metric is defined
/// on all runs. A `+` verdict means BSA is significantly better.
pub fn pairwise_bsa_comparison(
    records: &[RunRecord],
    options: &ComparisonOptions,
) -> Result<ComparisonSet> {
    if !records.iter().any(|r| r.algorithm == Algorithm::Bsa) {
        return Err(LabError::Config(
            "pairwise comparison needs BSA records".to_string(),
        ));
    }
    let competitors: Vec<Algorithm> = {
        let mut v: Vec<Algorithm> = records
            .iter()
            .map(|r| r.algorithm)
            .filter(|a| *a != Algorithm::Bsa)
            .collect();
        v.sort();
        v.dedup();
        v
    };

    // (mode, config) -> function -> algorithm -> run -> record
    let mut grid: BTreeMap<(Mode, ConfigOrder), BTreeMap<FunctionId, Cell>> = BTreeMap::new();
    for r in records {
        grid.entry((r.mode, config_order(&r.config)))
            .or_default()
            .entry(r.function)
            .or_default()
            .entry(r.algorithm)
            .or_default()
            .insert(r.seed, r);
    }

    let mut warnings = Vec::new();
    let mut tables = Vec::new();
    for ((mode, (_, _, config)), functions) in grid {
        let mut rows = Vec::new();
        for (function, cell) in functions {
            let problem = format!("{mode} {config} {function}");
            let Some(bsa_runs) = cell.get(&Algorithm::Bsa) else {
                warnings.push(format!("{problem}: no BSA records, skipped"));
                continue;
            };
            let missing: Vec<&str> = competitors
                .iter()
                .filter(|a| !cell.contains_key(a))
                .map(|a| a.name())
                .collect();
            if !missing.is_empty() {
                warnings.push(format!(
                    "{problem}: no records for {}, skipped",
                    missing.join(", ")
                ));
                continue;
            }
            let solved = cell.values().all(|runs| {
                runs.values().any(|r| r.success)
                    && runs.values().all(|r| options.metric_of(r).is_some())
            });
            if !solved {
                continue;
            }
            let mut results = Vec::with_capacity(competitors.len());
            for alg in &competitors {
                results.push(compare_cell(
                    &problem,
                    bsa_runs,
                    &cell[alg],
                    *alg,
                    options,
                    &mut warnings,
                )?);
            }
            rows.push(ComparisonRow { function, results });
        }
        tables.push(ComparisonTable {
            mode,
            config,
            metric: options.metric,
            alpha: options.alpha,
            competitors: competitors.clone(),
            rows,
        });
    }
    Ok(ComparisonSet { tables, warnings })
}

fn compare_cell(
    problem: &str,
    bsa: &BTreeMap<usize, &RunRecord>,
    other: &BTreeMap<usize, &RunRecord>,
    alg: Algorithm,
    options: &ComparisonOptions,
    warnings: &mut Vec<String>,
) -> Result<Option<WilcoxonResult>> {
    if bsa.keys().ne(other.keys()) {
        warnings.push(format!(
            "{problem}: BSA and {alg} have different run indices, skipped"
        ));
        return Ok(None);
    }
    let pick = |runs: &BTreeMap<usize, &RunRecord>| -> Vec<f64> {
        runs.values()
            .map(|r| {
                options
                    .metric_of(r)
                    .expect("solved cells define the metric")
            })
            .collect()
    };
    // Competitor first: positive differences are runs where BSA is lower.
    let result = wilcoxon_signed_rank(&pick(other), &pick(bsa), options.alpha)?;
    Ok(Some(result))
}
