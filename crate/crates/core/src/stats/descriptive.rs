use crate::error::{Error, Result};

/// The seven per-cell measures. `std_dev` is the population standard
/// deviation (divides by `n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptiveStats {
    pub mean: f64,
    pub std_dev: f64,
    pub best: f64,
    pub worst: f64,
    pub avg_time: f64,
    pub n_success: usize,
    pub n_fail: usize,
}

pub fn describe(samples: &[f64], times: &[f64], successes: &[bool]) -> Result<DescriptiveStats> {
    if samples.is_empty() {
        return Err(Error::InvalidSample("no samples".into()));
    }
    if times.len() != samples.len() || successes.len() != samples.len() {
        return Err(Error::InvalidSample(alloc::format!(
            "length mismatch: {} samples, {} times, {} flags",
            samples.len(),
            times.len(),
            successes.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let best = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n_success = successes.iter().filter(|&&s| s).count();
    Ok(DescriptiveStats {
        // Rounding can push the mean of a constant sample a hair outside
        // [best, worst].
        mean: mean.clamp(best, worst),
        std_dev: libm::sqrt(var),
        best,
        worst,
        avg_time: times.iter().sum::<f64>() / n,
        n_success,
        n_fail: samples.len() - n_success,
    })
}
