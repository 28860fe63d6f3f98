//! Standard backtracking search optimisation.
//!
//! One generation runs selection-I (refresh and shuffle the historical
//! population), mutation `Mutant = P + F·(oldP − P)`, crossover through a
//! binary map, boundary repair, evaluation and greedy selection-II.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::amplitude::AmplitudeStrategy;
use crate::error::{Error, Result};
use crate::objective::{Evaluator, Objective, Progress, RunOutcome, RunSettings};
use crate::population::{boundary_control, initialize_population, Individual, Population};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CrossoverMode {
    /// Per row, a fair coin picks between a mix-rate-capped random subset of
    /// columns and a single random column.
    #[default]
    DualStrategy,
    /// Always the mix-rate-capped random subset.
    MixrateOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsaConfig {
    pub run: RunSettings,
    pub amplitude: AmplitudeStrategy,
    /// Upper bound on the fraction of columns per row that take mutant values.
    pub mix_rate: f64,
    pub crossover_mode: CrossoverMode,
}

impl Default for BsaConfig {
    fn default() -> Self {
        Self {
            run: RunSettings::default(),
            amplitude: AmplitudeStrategy::default(),
            mix_rate: 1.0,
            crossover_mode: CrossoverMode::DualStrategy,
        }
    }
}

impl BsaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.run.pop_size == 0 {
            return Err(Error::InvalidConfig("pop_size must be at least 1".into()));
        }
        if !(self.mix_rate > 0.0 && self.mix_rate <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "mix_rate must lie in (0, 1], got {}",
                self.mix_rate
            )));
        }
        self.amplitude.validate()
    }
}

/// `N × D` partition of trial cells between the current population and the
/// mutant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverMap {
    rows: usize,
    cols: usize,
    from_mutant: Vec<bool>,
}

impl CrossoverMap {
    /// Every cell takes from the current population.
    pub fn all_current(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            from_mutant: vec![false; rows * cols],
        }
    }

    pub fn all_mutant(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            from_mutant: vec![true; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn takes_mutant(&self, i: usize, j: usize) -> bool {
        self.from_mutant[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, from_mutant: bool) {
        self.from_mutant[i * self.cols + j] = from_mutant;
    }

    /// Number of mutant-carrying cells in row `i`.
    pub fn mutant_count(&self, i: usize) -> usize {
        self.from_mutant[i * self.cols..(i + 1) * self.cols]
            .iter()
            .filter(|&&m| m)
            .count()
    }
}

/// Historical population, current population and the iteration counter.
#[derive(Debug, Clone, PartialEq)]
pub struct BsaState {
    pub current: Population,
    pub historical: Population,
    pub iteration: usize,
}

/// Selection-I: with probability ½ (`a < b`, `a, b ~ U(0,1)`) the historical
/// population becomes a copy of the current one; then its member order is
/// shuffled.
pub fn selection_one(state: &mut BsaState, rng: &mut RandomSource) {
    let a = rng.uniform01();
    let b = rng.uniform01();
    if a < b {
        state.historical = state.current.clone();
    }
    rng.shuffle(state.historical.members_mut());
}

/// `Mutant_ij = P_ij + F·(oldP_ij − P_ij)`.
pub fn mutate(current: &Population, historical: &Population, amplitude: f64) -> Result<Population> {
    current.check_shape(historical)?;
    let members = current
        .members()
        .iter()
        .zip(historical.members())
        .map(|(p, old)| {
            Individual::new(
                p.coords
                    .iter()
                    .zip(&old.coords)
                    .map(|(&x, &o)| x + amplitude * (o - x))
                    .collect(),
            )
        })
        .collect();
    Population::new(members)
}

/// Builds the crossover map. In the mix-rate branch a row gets
/// `max(1, ceil(mix_rate·u·d))` distinct random columns (`u ~ U(0,1)`);
/// the single-column branch marks one random column.
pub fn make_crossover_map(
    n: usize,
    d: usize,
    mix_rate: f64,
    mode: CrossoverMode,
    rng: &mut RandomSource,
) -> CrossoverMap {
    let mut map = CrossoverMap::all_current(n, d);
    let mut columns: Vec<usize> = (0..d).collect();
    for i in 0..n {
        let subset = match mode {
            CrossoverMode::MixrateOnly => true,
            CrossoverMode::DualStrategy => rng.uniform01() < 0.5,
        };
        if subset {
            let u = rng.uniform01();
            let k = (libm::ceil(mix_rate * u * d as f64) as usize).clamp(1, d);
            for (slot, c) in columns.iter_mut().enumerate() {
                *c = slot;
            }
            rng.shuffle(&mut columns);
            for &j in &columns[..k] {
                map.set(i, j, true);
            }
        } else {
            let j = rng.below(d);
            map.set(i, j, true);
        }
    }
    map
}

/// `T_ij = P_ij` where the map takes from the current population, else
/// `Mutant_ij`.
pub fn crossover(
    current: &Population,
    mutant: &Population,
    map: &CrossoverMap,
) -> Result<Population> {
    current.check_shape(mutant)?;
    if map.rows() != current.len() || map.cols() != current.dims() {
        return Err(Error::InvalidConfig(format!(
            "map is {}x{} but population is {}x{}",
            map.rows(),
            map.cols(),
            current.len(),
            current.dims()
        )));
    }
    let members = current
        .members()
        .iter()
        .zip(mutant.members())
        .enumerate()
        .map(|(i, (p, m))| {
            Individual::new(
                (0..p.coords.len())
                    .map(|j| {
                        if map.takes_mutant(i, j) {
                            m.coords[j]
                        } else {
                            p.coords[j]
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Population::new(members)
}

/// Selection-II: member `i` becomes `trial_i` only when it is strictly
/// better; ties keep the incumbent.
pub fn selection_two(current: &Population, trial: &Population) -> Result<Population> {
    current.check_shape(trial)?;
    let mut members = Vec::with_capacity(current.len());
    for (i, (c, t)) in current.members().iter().zip(trial.members()).enumerate() {
        let cf = c.fitness.ok_or(Error::Unevaluated(i))?;
        let tf = t.fitness.ok_or(Error::Unevaluated(i))?;
        members.push(if tf < cf { t.clone() } else { c.clone() });
    }
    let mut next = Population::new(members)?;
    next.generation = current.generation + 1;
    Ok(next)
}

/// What one generation produced, for tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generation {
    pub amplitude: f64,
    pub evaluations: usize,
}

/// A BSA run that can be advanced one generation at a time.
pub struct Bsa<'a, O: ?Sized> {
    space: &'a SearchSpace,
    config: &'a BsaConfig,
    eval: Evaluator<'a, O>,
    state: BsaState,
}

impl<'a, O: Objective + ?Sized> Bsa<'a, O> {
    /// Draws `P` and `oldP` uniformly and evaluates `P`.
    pub fn new(
        objective: &'a O,
        space: &'a SearchSpace,
        config: &'a BsaConfig,
        rng: &mut RandomSource,
    ) -> Result<Self> {
        config.validate()?;
        space.check_dims(objective.dims())?;
        let n = config.run.pop_size;
        let mut current = initialize_population(n, space, rng)?;
        let historical = initialize_population(n, space, rng)?;
        let mut eval = Evaluator::new(objective, config.run.target);
        eval.population(&mut current);
        Ok(Self {
            space,
            config,
            eval,
            state: BsaState {
                current,
                historical,
                iteration: 0,
            },
        })
    }

    pub fn state(&self) -> &BsaState {
        &self.state
    }

    pub fn evaluator(&self) -> &Evaluator<'a, O> {
        &self.eval
    }

    pub fn step(&mut self, rng: &mut RandomSource) -> Result<Generation> {
        let cfg = self.config;
        let policy = cfg.run.boundary;
        self.state.iteration += 1;

        selection_one(&mut self.state, rng);
        let amplitude = cfg
            .amplitude
            .draw(self.state.iteration, cfg.run.max_iterations, rng);
        let mut mutant = mutate(&self.state.current, &self.state.historical, amplitude)?;
        boundary_control(&mut mutant, self.space, policy, rng)?;
        let map = make_crossover_map(
            self.state.current.len(),
            self.state.current.dims(),
            cfg.mix_rate,
            cfg.crossover_mode,
            rng,
        );
        let mut trial = crossover(&self.state.current, &mutant, &map)?;
        boundary_control(&mut trial, self.space, policy, rng)?;
        let evaluations = self.eval.population(&mut trial);
        self.state.current = selection_two(&self.state.current, &trial)?;
        Ok(Generation {
            amplitude,
            evaluations,
        })
    }

    pub(crate) fn finish(self, progress: Progress) -> RunOutcome {
        let iterations = self.state.iteration;
        self.eval
            .into_outcome(iterations, progress.target_iteration, progress.trace)
    }
}

/// Runs BSA until `max_iterations` generations have completed or the
/// configured target halts the run.
pub fn bsa_minimize<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &BsaConfig,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let mut run = Bsa::new(objective, space, config, rng)?;
    let mut progress = Progress::new(config.run.record_trace);
    progress.observe(0, run.evaluator(), None);
    while run.state().iteration < config.run.max_iterations && !run.evaluator().should_halt() {
        let g = run.step(rng)?;
        progress.observe(run.state().iteration, run.evaluator(), Some(g.amplitude));
    }
    Ok(run.finish(progress))
}
