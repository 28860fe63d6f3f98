//! Table rendering: descriptive statistics, paired comparison tables and
//! success-ratio data.
//!
//! Markdown is for reading; CSV and JSON keep full float precision so they
//! reparse to the same numbers. The one lossy form is the markdown p-value,
//! which prints `<0.0001` below `1e-4`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use bsa_core::stats::{describe, DescriptiveStats, VerdictSummary, WilcoxonResult};
use bsa_core::{Algorithm, FunctionId};
use serde::Serialize;

use crate::config::{Metric, Mode};
use crate::error::Result;
use crate::harness::{config_order, ConfigOrder, RunRecord, SuccessRatio};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

/// Float text that parses back to the same value; `inf`, `-inf` and `NaN`
/// for the non-finite ones.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Four decimals, or `<0.0001` for anything smaller.
pub fn format_p_value(p: f64) -> String {
    if p < 1e-4 {
        "<0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}

/// Rank sums are integers or halves (from mid-ranks).
pub fn format_rank_sum(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        format!("{r:.1}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub function: FunctionId,
    /// One entry per competitor of the table; `None` when the pair could
    /// not be formed.
    pub results: Vec<Option<WilcoxonResult>>,
}

/// BSA against each competitor on the problems of one (mode, config).
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub mode: Mode,
    pub config: String,
    pub metric: Metric,
    pub alpha: f64,
    pub competitors: Vec<Algorithm>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    /// Verdict tallies, one per competitor column.
    pub fn footer(&self) -> Vec<VerdictSummary> {
        (0..self.competitors.len())
            .map(|c| {
                let mut s = VerdictSummary::default();
                for row in &self.rows {
                    if let Some(r) = &row.results[c] {
                        s.add(r.verdict);
                    }
                }
                s
            })
            .collect()
    }

    pub fn file_name(&self) -> String {
        format!("wilcoxon_{}_{}.md", self.mode, self.config)
    }
}

pub fn render_comparison(table: &ComparisonTable, format: Format) -> String {
    match format {
        Format::Markdown => comparison_markdown(table),
        Format::Csv => render_comparisons_csv(std::slice::from_ref(table)),
        Format::Json => comparison_json(std::slice::from_ref(table)),
    }
}

fn comparison_markdown(t: &ComparisonTable) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# BSA vs competitors: {} {} (metric {}, alpha {})\n",
        t.mode,
        t.config,
        t.metric.as_str(),
        t.alpha
    );
    let mut header = String::from("| Function |");
    let mut rule = String::from("|---|");
    for alg in &t.competitors {
        let _ = write!(header, " {alg} p-value | {alg} R+ | {alg} R- | {alg} Win |");
        rule.push_str("---:|---:|---:|:---:|");
    }
    if t.competitors.is_empty() {
        header.push_str(" Win |");
        rule.push_str(":---:|");
    }
    let _ = writeln!(s, "{header}\n{rule}");
    for row in &t.rows {
        let mut line = format!("| {} |", row.function);
        for r in &row.results {
            match r {
                Some(r) => {
                    let _ = write!(
                        line,
                        " {} | {} | {} | {} |",
                        format_p_value(r.p_value),
                        format_rank_sum(r.r_plus),
                        format_rank_sum(r.r_minus),
                        r.verdict
                    );
                }
                None => line.push_str(" n/a | | | |"),
            }
        }
        let _ = writeln!(s, "{line}");
    }
    let mut footer = String::from("| +/=/- |");
    let summaries = t.footer();
    if summaries.is_empty() {
        footer.push_str(" 0/0/0 |");
    }
    for summary in summaries {
        let _ = write!(footer, " | | | {summary} |");
    }
    let _ = writeln!(s, "{footer}");
    s
}

pub const COMPARISON_CSV_HEADER: &str =
    "mode,config,function,competitor,p_value,r_plus,r_minus,n_effective,method,win";

/// Long format: one line per (table, problem, competitor).
pub fn render_comparisons_csv(tables: &[ComparisonTable]) -> String {
    let mut s = format!("{COMPARISON_CSV_HEADER}\n");
    for t in tables {
        for row in &t.rows {
            for (alg, r) in t.competitors.iter().zip(&row.results) {
                let Some(r) = r else { continue };
                let method = match r.method {
                    bsa_core::stats::Method::Exact => "exact",
                    bsa_core::stats::Method::NormalApprox => "normal-approx",
                };
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    t.mode,
                    t.config,
                    row.function,
                    alg,
                    fmt_float(r.p_value),
                    fmt_float(r.r_plus),
                    fmt_float(r.r_minus),
                    r.n_effective,
                    method,
                    r.verdict
                );
            }
        }
    }
    s
}

fn comparison_json(tables: &[ComparisonTable]) -> String {
    #[derive(Serialize)]
    struct Entry<'a> {
        mode: Mode,
        config: &'a str,
        function: &'a str,
        competitor: &'a str,
        #[serde(flatten)]
        result: &'a WilcoxonResult,
    }
    let mut entries = Vec::new();
    for t in tables {
        for row in &t.rows {
            for (alg, r) in t.competitors.iter().zip(&row.results) {
                if let Some(result) = r {
                    entries.push(Entry {
                        mode: t.mode,
                        config: &t.config,
                        function: row.function.code(),
                        competitor: alg.name(),
                        result,
                    });
                }
            }
        }
    }
    serde_json::to_string_pretty(&entries).expect("comparison serializes")
}

/// Measures for one (algorithm, function, mode, config) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptiveRow {
    pub algorithm: Algorithm,
    pub function: FunctionId,
    pub mode: Mode,
    pub config: String,
    pub stats: DescriptiveStats,
}

/// Groups records by cell and summarises their final best values.
pub fn descriptives(records: &[RunRecord]) -> Result<Vec<DescriptiveRow>> {
    type Key = (Algorithm, Mode, ConfigOrder, FunctionId);
    type Columns = (Vec<f64>, Vec<f64>, Vec<bool>);
    let mut cells: BTreeMap<Key, Columns> = BTreeMap::new();
    for r in records {
        let cell = cells
            .entry((r.algorithm, r.mode, config_order(&r.config), r.function))
            .or_default();
        cell.0.push(r.best_value);
        cell.1.push(r.wall_time_s);
        cell.2.push(r.success);
    }
    cells
        .into_iter()
        .map(|((algorithm, mode, (_, _, config), function), (v, t, s))| {
            Ok(DescriptiveRow {
                algorithm,
                function,
                mode,
                config,
                stats: describe(&v, &t, &s)?,
            })
        })
        .collect()
}

pub const DESCRIPTIVES_CSV_HEADER: &str =
    "algorithm,function,mode,config,mean,std,best,worst,avg_time_s,n_success,n_fail";

pub fn render_descriptives(rows: &[DescriptiveRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = format!("{DESCRIPTIVES_CSV_HEADER}\n");
            for r in rows {
                let st = &r.stats;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.algorithm,
                    r.function,
                    r.mode,
                    r.config,
                    fmt_float(st.mean),
                    fmt_float(st.std_dev),
                    fmt_float(st.best),
                    fmt_float(st.worst),
                    fmt_float(st.avg_time),
                    st.n_success,
                    st.n_fail
                );
            }
            s
        }
        Format::Markdown => {
            let mut s = String::from(
                "| Algorithm | Function | Mode | Config | Mean | Std | Best | Worst | Avg time (s) | Success | Fail |\n\
                 |---|---|---|---|---:|---:|---:|---:|---:|---:|---:|\n",
            );
            for r in rows {
                let st = &r.stats;
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {:.6e} | {:.6e} | {:.6e} | {:.6e} | {:.4} | {} | {} |",
                    r.algorithm,
                    r.function,
                    r.mode,
                    r.config,
                    st.mean,
                    st.std_dev,
                    st.best,
                    st.worst,
                    st.avg_time,
                    st.n_success,
                    st.n_fail
                );
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                algorithm: &'a str,
                function: &'a str,
                mode: Mode,
                config: &'a str,
                mean: f64,
                std: f64,
                best: f64,
                worst: f64,
                avg_time_s: f64,
                n_success: usize,
                n_fail: usize,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    algorithm: r.algorithm.name(),
                    function: r.function.code(),
                    mode: r.mode,
                    config: &r.config,
                    mean: r.stats.mean,
                    std: r.stats.std_dev,
                    best: r.stats.best,
                    worst: r.stats.worst,
                    avg_time_s: r.stats.avg_time,
                    n_success: r.stats.n_success,
                    n_fail: r.stats.n_fail,
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("descriptives serialize")
        }
    }
}

pub const SUCCESS_RATIO_CSV_HEADER: &str =
    "algorithm,mode,config,function,runs,success_ratio,failure_ratio";

/// Long-format, plot-ready ratio rows. Groups spanning every function are
/// labelled `all`.
pub fn render_success_ratio(rows: &[SuccessRatio], format: Format) -> String {
    let function = |r: &SuccessRatio| r.function.map_or("all", FunctionId::code);
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                algorithm: &'a str,
                mode: Mode,
                config: &'a str,
                function: &'a str,
                runs: usize,
                success_ratio: f64,
                failure_ratio: f64,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    algorithm: r.algorithm.name(),
                    mode: r.mode,
                    config: &r.config,
                    function: function(r),
                    runs: r.runs,
                    success_ratio: r.success_ratio(),
                    failure_ratio: r.failure_ratio(),
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("ratios serialize")
        }
        Format::Csv | Format::Markdown => {
            let mut s = format!("{SUCCESS_RATIO_CSV_HEADER}\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.algorithm,
                    r.mode,
                    r.config,
                    function(r),
                    r.runs,
                    fmt_float(r.success_ratio()),
                    fmt_float(r.failure_ratio())
                );
            }
            s
        }
    }
}
