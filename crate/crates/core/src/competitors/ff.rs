use alloc::vec::Vec;

use crate::error::Result;
use crate::objective::{Evaluator, Objective, Progress, RunOutcome, RunSettings};
use crate::population::{initialize_population, repair_point};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

use super::{CompetitorConfig, CompetitorParams};

/// Firefly algorithm: each firefly moves towards every brighter one with
/// attractiveness `beta0·exp(−gamma·r²)` plus `alpha·(u − ½)·width` noise;
/// `alpha` is multiplied by `alpha_decay` after each sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfParams {
    pub beta0: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub alpha_decay: f64,
}

impl Default for FfParams {
    fn default() -> Self {
        Self {
            beta0: 1.0,
            gamma: 1.0,
            alpha: 0.2,
            alpha_decay: 0.97,
        }
    }
}

pub fn ff_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    run: &RunSettings,
    params: FfParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    CompetitorConfig {
        run: run.clone(),
        params: CompetitorParams::Ff(params),
    }
    .minimize(objective, space, rng)
}

fn attractiveness(beta0: f64, gamma: f64, r2: f64) -> f64 {
    if r2 == 0.0 {
        beta0
    } else {
        beta0 * libm::exp(-gamma * r2)
    }
}

pub(super) fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    settings: &RunSettings,
    params: &FfParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = settings.pop_size;
    let d = space.dims();
    let mut eval = Evaluator::new(objective, settings.target);
    let mut progress = Progress::new(settings.record_trace);

    let mut flies: Vec<Vec<f64>> = initialize_population(n, space, rng)?
        .into_members()
        .into_iter()
        .map(|m| m.coords)
        .collect();
    let mut light: Vec<f64> = flies.iter().map(|x| eval.point(x)).collect();
    progress.observe(0, &eval, None);

    let mut alpha = params.alpha;
    let mut iteration = 0;
    while iteration < settings.max_iterations && !eval.should_halt() {
        iteration += 1;
        // Brightness and positions of the other flies are taken from the
        // start of the sweep.
        let snapshot = flies.clone();
        let snapshot_light = light.clone();
        for i in 0..n {
            let mut x = snapshot[i].clone();
            let mut pulled = false;
            for j in 0..n {
                if snapshot_light[j] >= snapshot_light[i] {
                    continue;
                }
                pulled = true;
                let other = &snapshot[j];
                let r2: f64 = x.iter().zip(other).map(|(a, b)| (a - b) * (a - b)).sum();
                let beta = attractiveness(params.beta0, params.gamma, r2);
                for k in 0..d {
                    let noise = alpha * (rng.uniform01() - 0.5) * space.width(k);
                    x[k] += beta * (other[k] - x[k]) + noise;
                }
            }
            if !pulled {
                continue;
            }
            repair_point(&mut x, space, settings.boundary, rng);
            let moved = x
                .iter()
                .zip(&flies[i])
                .any(|(a, b)| a.to_bits() != b.to_bits());
            if moved {
                light[i] = eval.point(&x);
                flies[i] = x;
            }
        }
        alpha *= params.alpha_decay;
        progress.observe(iteration, &eval, None);
    }
    Ok(eval.into_outcome(iteration, progress.target_iteration, progress.trace))
}
