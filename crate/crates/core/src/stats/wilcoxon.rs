use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest effective sample size for which the exact null distribution is
/// used (the table has `n(n+1)/2 + 1` entries).
pub const EXACT_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Method {
    Exact,
    NormalApprox,
}

/// Outcome of a pairwise comparison: `Plus` means the first sample is
/// significantly larger (more positive rank mass), `Minus` the opposite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Plus,
    Equal,
    Minus,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Plus => "+",
            Verdict::Equal => "=",
            Verdict::Minus => "-",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WilcoxonResult {
    pub r_plus: f64,
    pub r_minus: f64,
    /// Pairs left after dropping zero differences.
    pub n_effective: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub method: Method,
    pub verdict: Verdict,
}

/// Number of sign assignments of ranks `1..=n` whose positive rank sum is
/// `s`, for every `s` in `0..=n(n+1)/2`.
pub fn exact_null_counts(n: usize) -> Vec<u64> {
    let max = n * (n + 1) / 2;
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    let mut reach = 0;
    for rank in 1..=n {
        reach += rank;
        for s in (rank..=reach).rev() {
            counts[s] += counts[s - rank];
        }
    }
    counts
}

fn exact_p(n: usize, statistic: f64) -> f64 {
    let counts = exact_null_counts(n);
    // With distinct ranks the statistic is an integer.
    let t = statistic as usize;
    let tail: u64 = counts[..=t].iter().sum();
    let total = libm::ldexp(1.0, n as i32);
    (2.0 * tail as f64 / total).min(1.0)
}

fn normal_p(n: usize, r_plus: f64, tie_groups: &[usize]) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let ties: f64 = tie_groups
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((r_plus - mean).abs() - 0.5).max(0.0) / libm::sqrt(var);
    libm::erfc(z / core::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided paired signed-rank test on `d_i = a_i − b_i`.
///
/// Zero differences are dropped, absolute differences get mid-ranks, and the
/// p-value comes from the exact null distribution when there are no tied
/// ranks and at most [`EXACT_LIMIT`] pairs remain; otherwise from the normal
/// approximation with tie and continuity corrections.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::InvalidSample(alloc::format!(
            "paired samples need equal non-zero lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut diffs = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        if d.is_nan() {
            return Err(Error::InvalidSample(alloc::format!(
                "difference of {x} and {y} is NaN"
            )));
        }
        if d != 0.0 {
            diffs.push(d);
        }
    }
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            r_plus: 0.0,
            r_minus: 0.0,
            n_effective: 0,
            p_value: 1.0,
            method: Method::Exact,
            verdict: Verdict::Equal,
        });
    }

    diffs.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    let mut r_plus = 0.0;
    let mut r_minus = 0.0;
    let mut tie_groups = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && diffs[j].abs() == diffs[i].abs() {
            j += 1;
        }
        // Ranks i+1 ..= j share their average.
        let rank = (i + 1 + j) as f64 / 2.0;
        for d in &diffs[i..j] {
            if *d > 0.0 {
                r_plus += rank;
            } else {
                r_minus += rank;
            }
        }
        if j - i > 1 {
            tie_groups.push(j - i);
        }
        i = j;
    }

    let (p_value, method) = if tie_groups.is_empty() && n <= EXACT_LIMIT {
        (exact_p(n, r_plus.min(r_minus)), Method::Exact)
    } else {
        (normal_p(n, r_plus, &tie_groups), Method::NormalApprox)
    };
    let verdict = if p_value >= alpha {
        Verdict::Equal
    } else if r_plus > r_minus {
        Verdict::Plus
    } else {
        Verdict::Minus
    };
    Ok(WilcoxonResult {
        r_plus,
        r_minus,
        n_effective: n,
        p_value,
        method,
        verdict,
    })
}

/// Tally of verdicts, rendered as `plus/equal/minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerdictSummary {
    pub plus: usize,
    pub equal: usize,
    pub minus: usize,
}

impl VerdictSummary {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Plus => self.plus += 1,
            Verdict::Equal => self.equal += 1,
            Verdict::Minus => self.minus += 1,
        }
    }
}

impl fmt::Display for VerdictSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.plus, self.equal, self.minus)
    }
}

pub fn verdict_summary<'a, I>(results: I) -> VerdictSummary
where
    I: IntoIterator<Item = &'a WilcoxonResult>,
{
    let mut s = VerdictSummary::default();
    for r in results {
        s.add(r.verdict);
    }
    s
}
