//! Experiment specification and its layered configuration:
//! CLI overrides take precedence over the config file, which takes
//! precedence over the profile defaults.
//!
//! The config file is TOML with flat keys:
//!
//! ```toml
//! version = 1
//! profile = "smoke"
//! algorithms = ["bsa", "de"]
//! functions = ["F14"]
//! modes = ["dimension-sweep", "range-sweep"]
//! dims = [10, 30, 60]
//! ranges = [5.0, 250.0, 500.0]   # half-widths of the symmetric boxes
//! runs = 10
//! iterations = 500
//! pop_size = 30
//! epsilon = 1e-6
//! metric = "evals"               # best | evals | time
//! censor = true
//! seed = 42
//! jobs = 4
//! timing = true
//! out = "results"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bsa_core::{Algorithm, FunctionId};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

/// Version of the config dialect, recorded in `manifest.json`.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Scalable functions at each dimension of `dims`, default boxes.
    DimensionSweep,
    /// Every function at D = 2 inside each symmetric box of `ranges`.
    RangeSweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::DimensionSweep => "dimension-sweep",
            Mode::RangeSweep => "range-sweep",
        }
    }

    pub fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimension-sweep" | "dimension" | "dims" => Ok(Mode::DimensionSweep),
            "range-sweep" | "range" | "ranges" => Ok(Mode::RangeSweep),
            _ => Err(LabError::Config(format!(
                "unknown mode {s:?} (expected dimension-sweep or range-sweep)"
            ))),
        }
    }
}

/// Per-run quantity fed to the paired comparison. Lower is better for all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Final best objective value.
    Best,
    /// Objective evaluations until the success epsilon was first reached.
    Evals,
    /// Wall time of runs that reached the success epsilon (runs halt there).
    Time,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Best => "best",
            Metric::Evals => "evals",
            Metric::Time => "time",
        }
    }
}

impl FromStr for Metric {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(Metric::Best),
            "evals" => Ok(Metric::Evals),
            "time" => Ok(Metric::Time),
            _ => Err(LabError::Config(format!(
                "unknown metric {s:?} (expected best, evals or time)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// 30 runs, 2000 iterations, population 30.
    Paper,
    /// 10 runs, 500 iterations, population 30.
    Smoke,
}

impl FromStr for Profile {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "smoke" => Ok(Profile::Smoke),
            _ => Err(LabError::Config(format!(
                "unknown profile {s:?} (expected paper or smoke)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub algorithms: Vec<Algorithm>,
    pub functions: Vec<FunctionId>,
    pub modes: Vec<Mode>,
    pub dims: Vec<usize>,
    /// Half-widths `h` of the boxes `[-h, h]^2` used by the range sweep.
    pub ranges: Vec<f64>,
    pub runs: usize,
    pub iterations: usize,
    pub pop_size: usize,
    pub success_epsilon: f64,
    pub metric: Metric,
    /// Give runs that never reached the target a common worst value
    /// instead of leaving their metric undefined.
    pub censor: bool,
    pub master_seed: u64,
    /// Worker threads. Never affects results.
    pub jobs: usize,
    /// Measure wall time. When false every `wall_time_s` is 0 and the
    /// record files are byte-reproducible.
    pub timing: bool,
}

impl ExperimentSpec {
    pub fn from_profile(profile: Profile) -> Self {
        let (runs, iterations) = match profile {
            Profile::Paper => (30, 2000),
            Profile::Smoke => (10, 500),
        };
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            functions: FunctionId::ALL.to_vec(),
            modes: vec![Mode::DimensionSweep, Mode::RangeSweep],
            dims: vec![10, 30, 60],
            ranges: vec![5.0, 250.0, 500.0],
            runs,
            iterations,
            pop_size: 30,
            success_epsilon: 1e-6,
            metric: Metric::Evals,
            censor: true,
            master_seed: 42,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(LabError::Config(m.to_string()));
        if self.algorithms.is_empty() {
            return fail("algorithms: at least one algorithm is required");
        }
        if self.functions.is_empty() {
            return fail("functions: at least one function is required");
        }
        if self.modes.is_empty() {
            return fail("modes: at least one mode is required");
        }
        if self.runs == 0 {
            return fail("runs: must be at least 1");
        }
        if self.pop_size == 0 {
            return fail("pop_size: must be at least 1");
        }
        if !(self.success_epsilon >= 0.0 && self.success_epsilon.is_finite()) {
            return fail("epsilon: must be a finite non-negative number");
        }
        if self.jobs == 0 {
            return fail("jobs: must be at least 1");
        }
        if self.modes.contains(&Mode::DimensionSweep)
            && (self.dims.is_empty() || self.dims.contains(&0))
        {
            return fail("dims: need at least one positive dimension");
        }
        if self.modes.contains(&Mode::RangeSweep)
            && (self.ranges.is_empty() || self.ranges.iter().any(|h| !(*h > 0.0 && h.is_finite())))
        {
            return fail("ranges: need at least one positive half-width");
        }
        if self.dims.len() > 127 || self.ranges.len() > 127 {
            return fail("at most 127 dims or ranges are supported");
        }
        Ok(())
    }

    /// Hash of everything that determines the record set. `jobs` and
    /// `timing` are excluded.
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            version: &'a str,
            algorithms: &'a [Algorithm],
            functions: &'a [FunctionId],
            dims: &'a [usize],
            ranges: &'a [f64],
            runs: usize,
            iterations: usize,
            pop_size: usize,
            success_epsilon: f64,
            halt_on_target: bool,
            master_seed: u64,
        }
        let key = Key {
            version: env!("CARGO_PKG_VERSION"),
            algorithms: &self.algorithms,
            functions: &self.functions,
            dims: &self.dims,
            ranges: &self.ranges,
            runs: self.runs,
            iterations: self.iterations,
            pop_size: self.pop_size,
            success_epsilon: self.success_epsilon,
            halt_on_target: self.halt_on_target(),
            master_seed: self.master_seed,
        };
        let bytes = serde_json::to_vec(&key).expect("spec key serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Runs stop at the success epsilon when the metric measures the cost
    /// of getting there; for `best` they use the whole budget.
    pub fn halt_on_target(&self) -> bool {
        self.metric != Metric::Best
    }
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub version: Option<u32>,
    pub profile: Option<Profile>,
    pub algorithms: Option<Vec<String>>,
    pub functions: Option<Vec<String>>,
    pub modes: Option<Vec<String>>,
    pub dims: Option<Vec<usize>>,
    pub ranges: Option<Vec<f64>>,
    pub runs: Option<usize>,
    pub iterations: Option<usize>,
    pub pop_size: Option<usize>,
    pub epsilon: Option<f64>,
    pub metric: Option<Metric>,
    pub censor: Option<bool>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub timing: Option<bool>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: FileConfig =
            toml::from_str(text).map_err(|e| LabError::Config(e.to_string().trim().to_string()))?;
        if let Some(v) = cfg.version {
            if v != CONFIG_VERSION {
                return Err(LabError::Config(format!(
                    "version: unsupported config version {v} (expected {CONFIG_VERSION})"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(m) => LabError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub profile: Option<Profile>,
    pub algorithms: Option<Vec<String>>,
    pub functions: Option<Vec<String>>,
    pub modes: Option<Vec<String>>,
    pub runs: Option<usize>,
    pub iterations: Option<usize>,
    pub pop_size: Option<usize>,
    pub epsilon: Option<f64>,
    pub metric: Option<Metric>,
    pub censor: Option<bool>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub timing: Option<bool>,
    pub out: Option<PathBuf>,
}

fn parse_list<T: FromStr>(key: &str, items: &[String]) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|e| LabError::Config(format!("{key}: {e}")))
        })
        .collect()
}

/// Resolves profile defaults, then the file, then the CLI. Returns the spec
/// and the output directory.
pub fn resolve(file: &FileConfig, cli: &Overrides) -> Result<(ExperimentSpec, PathBuf)> {
    let profile = cli.profile.or(file.profile).unwrap_or(Profile::Smoke);
    let mut spec = ExperimentSpec::from_profile(profile);

    macro_rules! layer {
        ($field:ident, $key:ident) => {
            if let Some(v) = cli.$key.clone().or_else(|| file.$key.clone()) {
                spec.$field = v;
            }
        };
    }
    layer!(runs, runs);
    layer!(iterations, iterations);
    layer!(pop_size, pop_size);
    layer!(success_epsilon, epsilon);
    layer!(metric, metric);
    layer!(censor, censor);
    layer!(master_seed, seed);
    layer!(jobs, jobs);
    layer!(timing, timing);
    if let Some(d) = &file.dims {
        spec.dims = d.clone();
    }
    if let Some(r) = &file.ranges {
        spec.ranges = r.clone();
    }
    if let Some(a) = cli.algorithms.as_ref().or(file.algorithms.as_ref()) {
        spec.algorithms = parse_list("algorithms", a)?;
    }
    if let Some(f) = cli.functions.as_ref().or(file.functions.as_ref()) {
        spec.functions = parse_list("functions", f)?;
    }
    if let Some(m) = cli.modes.as_ref().or(file.modes.as_ref()) {
        spec.modes = parse_list("modes", m)?;
    }
    spec.algorithms.dedup();
    spec.validate()?;
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    Ok((spec, out))
}
