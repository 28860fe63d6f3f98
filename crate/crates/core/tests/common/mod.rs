#![allow(dead_code)]

use std::cell::Cell;

use bsa_core::Objective;

/// Wraps an objective and counts calls independently of the optimizer.
pub struct Counting<O> {
    pub inner: O,
    pub calls: Cell<u64>,
}

impl<O> Counting<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: Cell::new(0),
        }
    }
}

impl<O: Objective> Objective for Counting<O> {
    fn dims(&self) -> usize {
        self.inner.dims()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.calls.set(self.calls.get() + 1);
        self.inner.evaluate(x)
    }
}

/// Kolmogorov–Smirnov statistic of `samples` against U(lo, hi), computed
/// from the sorted sample.
pub fn ks_uniform(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, x)| {
            let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            let above = (i + 1) as f64 / n - cdf;
            let below = cdf - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Two-sided p-value from enumerating all 2^n sign patterns of ranks 1..=n.
pub fn brute_force_p(n: usize, r_plus: usize) -> f64 {
    let total_sum = n * (n + 1) / 2;
    let observed = r_plus.min(total_sum - r_plus);
    let mut at_most = 0u64;
    for mask in 0u32..(1u32 << n) {
        let s: usize = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).sum();
        if s <= observed {
            at_most += 1;
        }
    }
    (2.0 * at_most as f64 / (1u64 << n) as f64).min(1.0)
}
