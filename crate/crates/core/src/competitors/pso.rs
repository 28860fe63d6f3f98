use alloc::vec::Vec;

use crate::error::Result;
use crate::objective::{Evaluator, Objective, Progress, RunOutcome, RunSettings};
use crate::population::{initialize_population, repair_point};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

use super::{CompetitorConfig, CompetitorParams};

/// Global-best PSO with inertia weight. The defaults (0.729, 1.49445) are
/// the constriction-equivalent coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity is clamped to this fraction of each dimension's width.
    pub velocity_clamp_fraction: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_clamp_fraction: 0.5,
        }
    }
}

pub fn pso_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    run: &RunSettings,
    params: PsoParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    CompetitorConfig {
        run: run.clone(),
        params: CompetitorParams::Pso(params),
    }
    .minimize(objective, space, rng)
}

pub(super) fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    settings: &RunSettings,
    params: &PsoParams,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = settings.pop_size;
    let d = space.dims();
    let vmax: Vec<f64> = (0..d)
        .map(|j| params.velocity_clamp_fraction * space.width(j))
        .collect();
    let mut eval = Evaluator::new(objective, settings.target);
    let mut progress = Progress::new(settings.record_trace);

    let mut positions: Vec<Vec<f64>> = initialize_population(n, space, rng)?
        .into_members()
        .into_iter()
        .map(|m| m.coords)
        .collect();
    let mut velocities = alloc::vec![alloc::vec![0.0; d]; n];
    let mut personal: Vec<(Vec<f64>, f64)> = positions
        .iter()
        .map(|x| (x.clone(), eval.point(x)))
        .collect();
    let mut global = best_of(&personal);
    progress.observe(0, &eval, None);

    let mut iteration = 0;
    while iteration < settings.max_iterations && !eval.should_halt() {
        iteration += 1;
        for i in 0..n {
            let (x, v) = (&mut positions[i], &mut velocities[i]);
            for j in 0..d {
                let r1 = rng.uniform01();
                let r2 = rng.uniform01();
                let vj = params.inertia * v[j]
                    + params.cognitive * r1 * (personal[i].0[j] - x[j])
                    + params.social * r2 * (personal[global].0[j] - x[j]);
                v[j] = vj.clamp(-vmax[j], vmax[j]);
                x[j] += v[j];
            }
            if !space.contains(x) {
                let before = x.clone();
                repair_point(x, space, settings.boundary, rng);
                for j in 0..d {
                    if x[j].to_bits() != before[j].to_bits() {
                        v[j] = 0.0;
                    }
                }
            }
        }
        for (i, x) in positions.iter().enumerate() {
            let f = eval.point(x);
            if f < personal[i].1 {
                personal[i] = (x.clone(), f);
            }
        }
        global = best_of(&personal);
        progress.observe(iteration, &eval, None);
    }
    Ok(eval.into_outcome(iteration, progress.target_iteration, progress.trace))
}

fn best_of(personal: &[(Vec<f64>, f64)]) -> usize {
    let mut best = 0;
    for (i, p) in personal.iter().enumerate().skip(1) {
        if p.1 < personal[best].1 {
            best = i;
        }
    }
    best
}
