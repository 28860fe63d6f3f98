use alloc::vec::Vec;

use crate::error::Result;
use crate::objective::{Evaluator, Objective, Progress, RunOutcome, RunSettings};
use crate::population::{initialize_population, random_point, repair_point};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

use super::{CompetitorConfig, CompetitorParams};

/// Canonical artificial bee colony. `pop_size` is the number of food
/// sources; there are as many employed bees and onlookers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AbcParams {
    /// Failed improvements before a source is abandoned. `None` means
    /// `pop_size * D`; `Some(f64::INFINITY)` disables scouts.
    pub trial_limit: Option<f64>,
}

pub fn abc_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    run: &RunSettings,
    params: AbcParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    CompetitorConfig {
        run: run.clone(),
        params: CompetitorParams::Abc(params),
    }
    .minimize(objective, space, rng)
}

/// `v = x` except in one random dimension `j`, where
/// `v_j = x_j + φ·(x_j − partner_j)` with `φ ~ U(−1, 1)`. Returns the
/// candidate and `j`.
pub fn abc_neighbor(x: &[f64], partner: &[f64], rng: &mut RandomSource) -> (Vec<f64>, usize) {
    let j = rng.below(x.len());
    let phi = rng.uniform(-1.0, 1.0);
    let mut v = x.to_vec();
    v[j] = x[j] + phi * (x[j] - partner[j]);
    (v, j)
}

/// Selection weight: `1/(1+f)` for `f >= 0`, `1+|f|` otherwise.
fn quality(f: f64) -> f64 {
    if f >= 0.0 {
        1.0 / (1.0 + f)
    } else {
        1.0 + f.abs()
    }
}

struct Colony {
    sources: Vec<Vec<f64>>,
    fitness: Vec<f64>,
    trials: Vec<f64>,
}

impl Colony {
    fn try_improve<O: Objective + ?Sized>(
        &mut self,
        i: usize,
        space: &SearchSpace,
        settings: &RunSettings,
        eval: &mut Evaluator<'_, O>,
        rng: &mut RandomSource,
    ) {
        let n = self.sources.len();
        let k = if n == 1 {
            0
        } else {
            let mut k = rng.below(n - 1);
            if k >= i {
                k += 1;
            }
            k
        };
        let (mut v, _) = abc_neighbor(&self.sources[i], &self.sources[k], rng);
        repair_point(&mut v, space, settings.boundary, rng);
        let f = eval.point(&v);
        if f < self.fitness[i] {
            self.sources[i] = v;
            self.fitness[i] = f;
            self.trials[i] = 0.0;
        } else {
            self.trials[i] += 1.0;
        }
    }
}

pub(super) fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    settings: &RunSettings,
    params: &AbcParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = settings.pop_size;
    let limit = params.trial_limit.unwrap_or((n * space.dims()) as f64);
    let mut eval = Evaluator::new(objective, settings.target);
    let mut progress = Progress::new(settings.record_trace);

    let sources: Vec<Vec<f64>> = initialize_population(n, space, rng)?
        .into_members()
        .into_iter()
        .map(|m| m.coords)
        .collect();
    let fitness = sources.iter().map(|x| eval.point(x)).collect();
    let mut colony = Colony {
        sources,
        fitness,
        trials: alloc::vec![0.0; n],
    };
    progress.observe(0, &eval, None);

    let mut iteration = 0;
    while iteration < settings.max_iterations && !eval.should_halt() {
        iteration += 1;
        for i in 0..n {
            colony.try_improve(i, space, settings, &mut eval, rng);
        }

        let weights: Vec<f64> = colony.fitness.iter().map(|&f| quality(f)).collect();
        let total: f64 = weights.iter().sum();
        for _ in 0..n {
            let i = roulette(&weights, total, rng);
            colony.try_improve(i, space, settings, &mut eval, rng);
        }

        let mut scout = 0;
        for i in 1..n {
            if colony.trials[i] > colony.trials[scout] {
                scout = i;
            }
        }
        if colony.trials[scout] > limit {
            let x = random_point(space, rng);
            colony.fitness[scout] = eval.point(&x);
            colony.sources[scout] = x;
            colony.trials[scout] = 0.0;
        }
        progress.observe(iteration, &eval, None);
    }
    Ok(eval.into_outcome(iteration, progress.target_iteration, progress.trace))
}

fn roulette(weights: &[f64], total: f64, rng: &mut RandomSource) -> usize {
    if !(total > 0.0 && total.is_finite()) {
        return rng.below(weights.len());
    }
    let r = rng.uniform01() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return i;
        }
    }
    weights.len() - 1
}
