//! Output directory layout and resumable record storage.
//!
//! ```text
//! manifest.json                  spec, spec hash, stream layout, versions
//! records.jsonl                  one record per line, appended as runs finish
//! records.csv                    all records in plan order
//! descriptives.csv               per-cell statistics
//! success_ratio.csv              per-function success ratios
//! wilcoxon_<mode>_<config>.md    comparison tables
//! wilcoxon.csv                   the same comparisons in long format
//! ```
//!
//! A rerun into the same directory with the same spec hash reuses every
//! record already in `records.jsonl` and only executes the missing runs.

use std::collections::{HashMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentSpec, CONFIG_VERSION};
use crate::error::{LabError, Result};
use crate::harness::{self, ComparisonOptions, ComparisonSet, RunKey, RunRecord};
use crate::report::{self, fmt_float, Format};

pub const RECORDS_CSV_HEADER: &str =
    "algorithm,function,mode,config,seed,best_value,evaluations,evals_to_target,wall_time_s,success";

pub fn render_records_csv(records: &[RunRecord]) -> String {
    let mut s = String::with_capacity(96 * (records.len() + 1));
    s.push_str(RECORDS_CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.function,
            r.mode,
            r.config,
            r.seed,
            fmt_float(r.best_value),
            r.evaluations,
            r.evals_to_target.map(|e| e.to_string()).unwrap_or_default(),
            fmt_float(r.wall_time_s),
            r.success
        ));
    }
    s
}

/// A `records.csv` row as read back.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRecord {
    pub algorithm: String,
    pub function: String,
    pub mode: String,
    pub config: String,
    pub seed: usize,
    pub best_value: f64,
    pub evaluations: u64,
    pub evals_to_target: Option<u64>,
    pub wall_time_s: f64,
    pub success: bool,
}

pub fn read_records_csv(path: &Path) -> Result<Vec<CsvRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| format_error(path, e))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| format_error(path, e)))
        .collect()
}

fn format_error(path: &Path, e: impl std::fmt::Display) -> LabError {
    LabError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config_version: u32,
    pub config_format: String,
    pub spec_hash: String,
    pub master_seed: u64,
    pub stream_layout: String,
    pub rng: String,
    pub spec: ExperimentSpec,
    pub planned_runs: usize,
    pub completed_runs: usize,
}

impl Manifest {
    fn new(spec: &ExperimentSpec, planned: usize, completed: usize) -> Self {
        // The worker count and timing switch do not change which records
        // exist, so they are left out of the manifest as well as the hash.
        let mut spec = spec.clone();
        spec.jobs = 1;
        Self {
            tool: "bsa-lab".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_version: CONFIG_VERSION,
            config_format: "toml".to_string(),
            spec_hash: spec.hash(),
            master_seed: spec.master_seed,
            stream_layout: "mode<<63 | algorithm<<60 | (function-1)<<55 | config<<48 | run"
                .to_string(),
            rng: "ChaCha8 seeded with master_seed, one stream per run".to_string(),
            spec,
            planned_runs: planned,
            completed_runs: completed,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| LabError::io(path, e))
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    write_file(&dir.join("manifest.json"), &(text + "\n"))
}

pub fn read_manifest(dir: &Path) -> Result<Option<Manifest>> {
    let path = dir.join("manifest.json");
    match fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| format_error(&path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(LabError::io(path, e)),
    }
}

/// Reads `records.jsonl`, dropping a trailing line cut short by an
/// interruption. A malformed line elsewhere is an error.
pub fn read_jsonl(path: &Path) -> Result<Vec<RunRecord>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(LabError::io(path, e)),
    };
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| LabError::io(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(r) => out.push(r),
            Err(_) if i + 1 == lines.len() => break,
            Err(e) => {
                return Err(format_error(path, format!("line {}: {e}", i + 1)));
            }
        }
    }
    Ok(out)
}

/// Outcome of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    /// Records taken over from an earlier invocation.
    pub resumed: usize,
    pub executed: usize,
}

/// Runs (or finishes) the experiment in `dir`, appending each record to
/// `records.jsonl` as soon as it exists.
pub fn run_experiment<P>(
    spec: &ExperimentSpec,
    dir: &Path,
    mut progress: P,
) -> Result<ExperimentResult>
where
    P: FnMut(usize, usize),
{
    spec.validate()?;
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let tasks = harness::plan(spec)?;
    let jsonl = dir.join("records.jsonl");

    let mut previous: HashMap<RunKey, RunRecord> = HashMap::new();
    if let Some(m) = read_manifest(dir)? {
        if m.spec_hash == spec.hash() {
            for r in read_jsonl(&jsonl)? {
                previous.insert(r.key(), r);
            }
        }
    }
    let planned: HashSet<RunKey> = tasks.iter().map(|t| t.key()).collect();
    previous.retain(|k, _| planned.contains(k));
    let skip: HashSet<RunKey> = previous.keys().cloned().collect();

    // Rewrite the log so it holds exactly the reusable records, then append.
    {
        let mut w = BufWriter::new(File::create(&jsonl).map_err(|e| LabError::io(&jsonl, e))?);
        for t in &tasks {
            if let Some(r) = previous.get(&t.key()) {
                let line = serde_json::to_string(r).expect("record serializes");
                writeln!(w, "{line}").map_err(|e| LabError::io(&jsonl, e))?;
            }
        }
        w.flush().map_err(|e| LabError::io(&jsonl, e))?;
    }
    write_manifest(dir, &Manifest::new(spec, tasks.len(), previous.len()))?;

    let mut log = OpenOptions::new()
        .append(true)
        .open(&jsonl)
        .map_err(|e| LabError::io(&jsonl, e))?;
    let total = tasks.len();
    let mut done = previous.len();
    let fresh = harness::execute(spec, &tasks, &skip, |r| {
        let line = serde_json::to_string(r).expect("record serializes") + "\n";
        log.write_all(line.as_bytes())
            .and_then(|()| log.flush())
            .map_err(|e| LabError::io(&jsonl, e))?;
        done += 1;
        progress(done, total);
        Ok(())
    })?;

    let executed = fresh.len();
    let resumed = previous.len();
    let mut fresh = fresh.into_iter();
    let records: Vec<RunRecord> = tasks
        .iter()
        .map(|t| match previous.remove(&t.key()) {
            Some(r) => r,
            None => fresh.next().expect("one fresh record per pending task"),
        })
        .collect();
    write_manifest(dir, &Manifest::new(spec, total, records.len()))?;
    Ok(ExperimentResult {
        records,
        resumed,
        executed,
    })
}

/// Paths of the report files written by [`write_reports`].
#[derive(Debug, Clone)]
pub struct ReportFiles {
    pub comparison: ComparisonSet,
    pub written: Vec<PathBuf>,
}

/// Writes every report derived from `records` into `dir`.
pub fn write_reports(
    spec: &ExperimentSpec,
    records: &[RunRecord],
    dir: &Path,
) -> Result<ReportFiles> {
    let mut written = Vec::new();
    let mut put = |name: &str, text: &str| -> Result<()> {
        let path = dir.join(name);
        write_file(&path, text)?;
        written.push(path);
        Ok(())
    };
    put("records.csv", &render_records_csv(records))?;
    let desc = report::descriptives(records)?;
    put(
        "descriptives.csv",
        &report::render_descriptives(&desc, Format::Csv),
    )?;
    put(
        "success_ratio.csv",
        &report::render_success_ratio(&harness::success_ratio_by_function(records), Format::Csv),
    )?;

    let comparison = if records
        .iter()
        .any(|r| r.algorithm == bsa_core::Algorithm::Bsa)
    {
        harness::pairwise_bsa_comparison(records, &ComparisonOptions::for_spec(spec))?
    } else {
        ComparisonSet {
            tables: Vec::new(),
            warnings: vec!["no BSA records: comparison tables skipped".to_string()],
        }
    };
    for table in &comparison.tables {
        put(
            &table.file_name(),
            &report::render_comparison(table, Format::Markdown),
        )?;
    }
    put(
        "wilcoxon.csv",
        &report::render_comparisons_csv(&comparison.tables),
    )?;
    Ok(ReportFiles {
        comparison,
        written,
    })
}
