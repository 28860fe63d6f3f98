//! The `bsa` command line.

use std::io::Write;
use std::path::PathBuf;

use bsa_core::benchmarks::registry;
use bsa_core::{Algorithm, FunctionId, RandomSource, RunSettings, Target};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{resolve, FileConfig, Metric, Overrides, Profile};
use crate::error::{LabError, Result};
use crate::report::fmt_float;
use crate::store;
use crate::validate;

/// Exit code for a failed `validate`.
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bsa",
    version,
    about = "Backtracking search optimization experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured sweeps and write every report.
    Run(RunArgs),
    /// Run one algorithm on one function and print the result.
    Solve(SolveArgs),
    /// Check the benchmark registry, the Wilcoxon tables and determinism.
    Validate,
    /// Print the benchmark registry.
    ListFunctions {
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_profile)]
    pub profile: Option<Profile>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub pop_size: Option<usize>,
    /// Success threshold on |best - global minimum|.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_metric)]
    pub metric: Option<Metric>,
    /// Comma-separated algorithms (bsa,de,pso,abc,ff).
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// Comma-separated function codes or names (F14,sphere,...).
    #[arg(long, value_delimiter = ',')]
    pub functions: Option<Vec<String>>,
    /// Comma-separated modes (dimension-sweep,range-sweep).
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    /// Record wall_time_s as 0 so record files are byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Leave the metric of unsuccessful runs undefined.
    #[arg(long)]
    pub no_censor: bool,
    /// Suppress progress output.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub algorithm: String,
    pub function: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 30)]
    pub pop_size: usize,
    /// Stop once |best - global minimum| reaches this value.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Write the convergence trace to this CSV file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            profile: self.profile,
            algorithms: self.algorithms.clone(),
            functions: self.functions.clone(),
            modes: self.modes.clone(),
            runs: self.runs,
            iterations: self.iterations,
            pop_size: self.pop_size,
            epsilon: self.epsilon,
            metric: self.metric,
            censor: self.no_censor.then_some(false),
            seed: self.seed,
            jobs: self.jobs,
            timing: self.no_timing.then_some(false),
            out: self.out.clone(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Run(args) => cmd_run(&args, out, err),
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Validate => {
            let report = validate::validate();
            writeln!(out, "{report}").map_err(stdout_error)?;
            Ok(if report.passed() { 0 } else { EXIT_VALIDATION })
        }
        Command::ListFunctions { json } => cmd_list(json, out),
    }
}

fn stdout_error(e: std::io::Error) -> LabError {
    LabError::io("<stdout>", e)
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let (spec, dir) = resolve(&file, &args.overrides())?;
    let quiet = args.quiet;
    let mut last_pct = usize::MAX;
    let result = store::run_experiment(&spec, &dir, |done, total| {
        let pct = done * 100 / total.max(1);
        if !quiet && pct != last_pct {
            last_pct = pct;
            let _ = write!(err, "\r{done}/{total} runs ({pct}%)");
            if done == total {
                let _ = writeln!(err);
            }
        }
    })?;
    let reports = store::write_reports(&spec, &result.records, &dir)?;
    for w in &reports.comparison.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_error);
    w(
        out,
        format!(
            "{} records ({} resumed, {} executed) in {}",
            result.records.len(),
            result.resumed,
            result.executed,
            dir.display()
        ),
    )?;
    for table in &reports.comparison.tables {
        let cells: Vec<String> = table
            .competitors
            .iter()
            .zip(table.footer())
            .map(|(a, s)| format!("{a} {s}"))
            .collect();
        w(
            out,
            format!(
                "{} {} ({} problems) +/=/-: {}",
                table.mode,
                table.config,
                table.rows.len(),
                cells.join("  ")
            ),
        )?;
    }
    let totals: Vec<String> = reports
        .comparison
        .totals()
        .into_iter()
        .map(|(a, s)| format!("{a} {s}"))
        .collect();
    if !totals.is_empty() {
        w(out, format!("overall BSA vs +/=/-: {}", totals.join("  ")))?;
    }
    Ok(0)
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let function: FunctionId = args.function.parse()?;
    let objective = function.at_dims(args.dim)?;
    let settings = RunSettings {
        pop_size: args.pop_size,
        max_iterations: args.iterations,
        target: args
            .epsilon
            .map(|eps| Target::new(objective.global_min_value, eps)),
        record_trace: true,
        ..RunSettings::default()
    };
    let mut rng = RandomSource::new(args.seed, 0);
    let outcome = algorithm.minimize(&objective, &objective.default_space, &settings, &mut rng)?;

    if let Some(path) = &args.trace {
        let mut text = String::from("iteration,best_fitness,amplitude\n");
        for row in &outcome.trace {
            text.push_str(&format!(
                "{},{},{}\n",
                row.iteration,
                fmt_float(row.best_fitness),
                row.amplitude.map(fmt_float).unwrap_or_default()
            ));
        }
        std::fs::write(path, text).map_err(|e| LabError::io(path, e))?;
    }

    let initial = outcome.trace.first().map_or(f64::NAN, |r| r.best_fitness);
    let lines = [
        format!("algorithm        {algorithm}"),
        format!(
            "function         {} {} (D={})",
            function.code(),
            function.name(),
            args.dim
        ),
        format!("seed             {}", args.seed),
        format!("initial best     {}", fmt_float(initial)),
        format!("best value       {}", fmt_float(outcome.best_value)),
        format!("global minimum   {}", fmt_float(objective.global_min_value)),
        format!("best point       {:?}", outcome.best_coords),
        format!("evaluations      {}", outcome.evaluations),
        format!("iterations       {}", outcome.iterations),
        format!(
            "evals to target  {}",
            outcome
                .evals_to_target
                .map_or("-".to_string(), |e| e.to_string())
        ),
    ];
    for l in lines {
        writeln!(out, "{l}").map_err(stdout_error)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct FunctionEntry {
    id: &'static str,
    name: &'static str,
    scalable: bool,
    low: f64,
    up: f64,
    global_min_d2: f64,
    hardness_pct: f64,
}

pub fn cmd_list(json: bool, out: &mut dyn Write) -> Result<i32> {
    let entries: Vec<FunctionEntry> = registry()
        .iter()
        .map(|f| FunctionEntry {
            id: f.id.code(),
            name: f.name,
            scalable: f.scalable,
            low: f.default_space.low()[0],
            up: f.default_space.up()[0],
            global_min_d2: f.global_min_value,
            hardness_pct: f.hardness_pct,
        })
        .collect();
    let text = if json {
        serde_json::to_string_pretty(&entries).expect("registry serializes")
    } else {
        let mut s = format!(
            "{:<4} {:<15} {:<9} {:>22} {:>20} {:>9}\n",
            "id", "name", "scalable", "box", "min (D=2)", "hardness"
        );
        for e in &entries {
            s.push_str(&format!(
                "{:<4} {:<15} {:<9} {:>22} {:>20.10} {:>8.2}%\n",
                e.id,
                e.name,
                if e.scalable { "yes" } else { "no" },
                format!("[{:.4}, {:.4}]", e.low, e.up),
                e.global_min_d2,
                e.hardness_pct
            ));
        }
        s.pop();
        s
    };
    writeln!(out, "{text}").map_err(stdout_error)?;
    Ok(0)
}
