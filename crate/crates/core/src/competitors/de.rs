use alloc::vec::Vec;

use crate::error::Result;
use crate::objective::{Evaluator, Objective, Progress, RunOutcome, RunSettings};
use crate::population::{boundary_control, initialize_population, Individual, Population};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

use super::{CompetitorConfig, CompetitorParams};

/// DE/rand/1/bin parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeParams {
    pub f_weight: f64,
    pub crossover_rate: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            f_weight: 0.5,
            crossover_rate: 0.9,
        }
    }
}

pub fn de_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    run: &RunSettings,
    params: DeParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    CompetitorConfig {
        run: run.clone(),
        params: CompetitorParams::De(params),
    }
    .minimize(objective, space, rng)
}

/// Three donor indices, distinct from each other and from `i` whenever the
/// population is large enough (N >= 4); smaller populations draw with
/// replacement.
fn donors(i: usize, n: usize, rng: &mut RandomSource) -> [usize; 3] {
    if n < 4 {
        return [rng.below(n), rng.below(n), rng.below(n)];
    }
    let mut picked = [i; 3];
    for k in 0..3 {
        loop {
            let r = rng.below(n);
            if r != i && !picked[..k].contains(&r) {
                picked[k] = r;
                break;
            }
        }
    }
    picked
}

pub(super) fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    settings: &RunSettings,
    params: &DeParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = settings.pop_size;
    let d = space.dims();
    let mut eval = Evaluator::new(objective, settings.target);
    let mut progress = Progress::new(settings.record_trace);
    let mut pop = initialize_population(n, space, rng)?;
    eval.population(&mut pop);
    progress.observe(0, &eval, None);

    let mut iteration = 0;
    while iteration < settings.max_iterations && !eval.should_halt() {
        iteration += 1;
        let trials: Vec<Individual> = (0..n)
            .map(|i| {
                let [r1, r2, r3] = donors(i, n, rng);
                let jrand = rng.below(d);
                let x = &pop.member(i).coords;
                let (a, b, c) = (
                    &pop.member(r1).coords,
                    &pop.member(r2).coords,
                    &pop.member(r3).coords,
                );
                let coords = (0..d)
                    .map(|j| {
                        if j == jrand || rng.uniform01() < params.crossover_rate {
                            a[j] + params.f_weight * (b[j] - c[j])
                        } else {
                            x[j]
                        }
                    })
                    .collect();
                Individual::new(coords)
            })
            .collect();
        let mut trial = Population::new(trials)?;
        boundary_control(&mut trial, space, settings.boundary, rng)?;
        eval.population(&mut trial);
        pop = crate::bsa::selection_two(&pop, &trial)?;
        progress.observe(iteration, &eval, None);
    }
    Ok(eval.into_outcome(iteration, progress.target_iteration, progress.trace))
}
