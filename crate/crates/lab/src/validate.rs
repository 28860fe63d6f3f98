//! Self-checks run by `bsa validate`.

use std::fmt;

use bsa_core::benchmarks::{registry, ObjectiveFunction};
use bsa_core::stats::{exact_null_counts, wilcoxon_signed_rank};
use bsa_core::{Algorithm, FunctionId, Objective, RandomSource, RunSettings, SearchSpace};

/// Random points drawn per function when looking for values below the
/// registered minimum.
pub const SAMPLES_PER_FUNCTION: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub functions_total: usize,
    pub functions_validated: usize,
    /// Codes of the functions that failed, e.g. `F14`.
    pub failed_functions: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {}: {}", c.name, c.detail)?;
        }
        writeln!(
            f,
            "{}/{} functions validated",
            self.functions_validated, self.functions_total
        )?;
        if !self.failed_functions.is_empty() {
            writeln!(f, "failed functions: {}", self.failed_functions.join(", "))?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "validation passed"
            } else {
                "validation FAILED"
            }
        )
    }
}

/// False for NaN as well as for a gap above `tol`.
fn within(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Problems found with one registry entry; empty when it checks out.
fn function_problems(f: &ObjectiveFunction, rng: &mut RandomSource) -> Vec<String> {
    let mut problems = Vec::new();
    let tol = f.id.min_tolerance();
    if f.global_min_points.is_empty() {
        problems.push("no minimizer listed".to_string());
    }
    for p in &f.global_min_points {
        let v = f.evaluate(p);
        if !within(v, f.global_min_value, tol) {
            problems.push(format!(
                "f({p:?}) = {v} but the registered minimum is {}",
                f.global_min_value
            ));
        }
        if !f.default_space.contains(p) {
            problems.push(format!("minimizer {p:?} lies outside the default box"));
        }
    }
    if !within(
        f.published_min,
        f.global_min_value,
        f.id.published_tolerance(),
    ) {
        problems.push(format!(
            "registered minimum {} differs from the published {}",
            f.global_min_value, f.published_min
        ));
    }
    let mut lowest = f64::INFINITY;
    let mut x = vec![0.0; f.dims];
    for _ in 0..SAMPLES_PER_FUNCTION {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = rng.uniform(f.default_space.low()[j], f.default_space.up()[j]);
        }
        lowest = lowest.min(f.evaluate(&x));
    }
    if lowest < f.global_min_value - tol {
        problems.push(format!(
            "sampled value {lowest} undercuts the registered minimum {}",
            f.global_min_value
        ));
    }
    if f.scalable {
        for d in [10, 30, 60] {
            match f.with_dims(d) {
                Ok(g) => {
                    for p in &g.global_min_points {
                        let v = g.evaluate(p);
                        if !within(v, g.global_min_value, tol) {
                            problems.push(format!("at D={d} the minimizer gives {v}"));
                        }
                    }
                }
                Err(e) => problems.push(format!("D={d}: {e}")),
            }
        }
    }
    problems
}

fn check_wilcoxon(report: &mut ValidationReport) {
    let mut mismatches = Vec::new();
    for n in 1..=12usize {
        let counts = exact_null_counts(n);
        let mut brute = vec![0u64; counts.len()];
        for mask in 0u32..1 << n {
            let s: usize = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).sum();
            brute[s] += 1;
        }
        if brute != counts {
            mismatches.push(format!("null counts differ at n={n}"));
            continue;
        }
        let total = n * (n + 1) / 2;
        for mask in 0u32..1 << n {
            // Difference of magnitude (rank) with the sign from the mask.
            let a: Vec<f64> = (0..n)
                .map(|b| {
                    if mask >> b & 1 == 1 {
                        (b + 1) as f64
                    } else {
                        -((b + 1) as f64)
                    }
                })
                .collect();
            let zeros = vec![0.0; n];
            let r_plus: usize = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).sum();
            let t = r_plus.min(total - r_plus);
            let tail: u64 = brute[..=t].iter().sum();
            let expected = (2.0 * tail as f64 / (1u64 << n) as f64).min(1.0);
            match wilcoxon_signed_rank(&a, &zeros, 0.05) {
                Ok(r) if r.p_value == expected && r.r_plus == r_plus as f64 => {}
                Ok(r) => {
                    mismatches.push(format!(
                        "n={n} mask={mask:#b}: p {} vs {expected}",
                        r.p_value
                    ));
                    break;
                }
                Err(e) => {
                    mismatches.push(format!("n={n}: {e}"));
                    break;
                }
            }
        }
    }
    let detail = if mismatches.is_empty() {
        "exact p-values equal enumeration for every sign pattern, n = 1..12".to_string()
    } else {
        mismatches.join("; ")
    };
    report.push("wilcoxon", mismatches.is_empty(), detail);
}

fn check_determinism(report: &mut ValidationReport) {
    let Ok(sphere) = FunctionId::Sphere.at_dims(2) else {
        report.push("determinism", false, "Sphere unavailable at D=2");
        return;
    };
    let space: SearchSpace = sphere.default_space.clone();
    let settings = RunSettings {
        pop_size: 10,
        max_iterations: 50,
        ..RunSettings::default()
    };
    let mut failures = Vec::new();
    for alg in Algorithm::ALL {
        let run = |stream| {
            alg.minimize(
                &sphere,
                &space,
                &settings,
                &mut RandomSource::new(7, stream),
            )
        };
        match (run(1), run(1), run(2)) {
            (Ok(a), Ok(b), Ok(c)) => {
                if a != b {
                    failures.push(format!("{alg}: same seed gave different runs"));
                }
                if a.best_coords == c.best_coords {
                    failures.push(format!("{alg}: distinct streams gave the same run"));
                }
            }
            _ => failures.push(format!("{alg}: run failed")),
        }
    }
    let detail = if failures.is_empty() {
        "every algorithm is reproducible per stream".to_string()
    } else {
        failures.join("; ")
    };
    report.push("determinism", failures.is_empty(), detail);
}

/// Checks `functions` (normally the registry) plus the statistical and
/// determinism probes.
pub fn validate_with_registry(functions: &[ObjectiveFunction]) -> ValidationReport {
    let mut report = ValidationReport {
        functions_total: functions.len(),
        ..ValidationReport::default()
    };
    let mut rng = RandomSource::new(0x5eed, 0);
    for f in functions {
        let problems = function_problems(f, &mut rng);
        let name = format!("{} {}", f.id.code(), f.name);
        if problems.is_empty() {
            report.functions_validated += 1;
            report.push(
                name,
                true,
                format!("minimum {} confirmed", f.global_min_value),
            );
        } else {
            report.failed_functions.push(f.id.code().to_string());
            report.push(name, false, problems.join("; "));
        }
    }
    check_wilcoxon(&mut report);
    check_determinism(&mut report);
    report
}

pub fn validate() -> ValidationReport {
    validate_with_registry(&registry())
}
