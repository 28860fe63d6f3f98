//! Objective functions, fitness accounting and the result of one run.

use alloc::vec::Vec;

use crate::population::{BoundaryPolicy, Population};

/// A real-valued function to be minimised.
pub trait Objective {
    fn dims(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dims(&self) -> usize {
        (**self).dims()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        (**self).evaluate(x)
    }
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    dims: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnObjective<F> {
    pub fn new(dims: usize, f: F) -> Self {
        Self { dims, f }
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for FnObjective<F> {
    fn dims(&self) -> usize {
        self.dims
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// A value to reach: `|best - value| <= epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub value: f64,
    pub epsilon: f64,
    /// Stop the run as soon as the target is reached. When false the hit is
    /// still recorded but the run uses its full iteration budget.
    pub halt: bool,
}

impl Target {
    pub fn new(value: f64, epsilon: f64) -> Self {
        Self {
            value,
            epsilon,
            halt: true,
        }
    }

    pub fn reached_by(&self, fitness: f64) -> bool {
        (fitness - self.value).abs() <= self.epsilon
    }
}

/// Budget and bookkeeping options shared by every optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub pop_size: usize,
    pub max_iterations: usize,
    pub target: Option<Target>,
    pub boundary: BoundaryPolicy,
    pub record_trace: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            pop_size: 30,
            max_iterations: 2000,
            target: None,
            boundary: BoundaryPolicy::Regenerate,
            record_trace: false,
        }
    }
}

/// One row of a convergence trace. Iteration 0 is the initial population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_fitness: f64,
    /// Amplitude factor used by BSA in this iteration.
    pub amplitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub best_coords: Vec<f64>,
    pub best_value: f64,
    pub evaluations: u64,
    /// Completed iterations, not counting initialisation.
    pub iterations: usize,
    /// Evaluation index (1-based) at which the target was first reached.
    pub evals_to_target: Option<u64>,
    /// Iteration in which the target was first reached (0 = initialisation).
    pub target_iteration: Option<usize>,
    /// Objective outputs that were not finite and were mapped to +inf.
    pub anomalies: u64,
    pub trace: Vec<TraceRow>,
}

/// Counts evaluations, maps non-finite fitness to `+inf` and tracks the
/// best point ever evaluated along with the first target hit.
pub struct Evaluator<'a, O: ?Sized> {
    objective: &'a O,
    target: Option<Target>,
    evaluations: u64,
    anomalies: u64,
    best_coords: Vec<f64>,
    best_value: f64,
    evals_to_target: Option<u64>,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    pub fn new(objective: &'a O, target: Option<Target>) -> Self {
        Self {
            objective,
            target,
            evaluations: 0,
            anomalies: 0,
            best_coords: Vec::new(),
            best_value: f64::INFINITY,
            evals_to_target: None,
        }
    }

    /// Evaluates one point.
    pub fn point(&mut self, x: &[f64]) -> f64 {
        let mut v = self.objective.evaluate(x);
        self.evaluations += 1;
        if !v.is_finite() {
            v = f64::INFINITY;
            self.anomalies += 1;
        }
        if v < self.best_value || self.best_coords.is_empty() {
            self.best_value = v;
            self.best_coords.clear();
            self.best_coords.extend_from_slice(x);
        }
        if self.evals_to_target.is_none() && self.target.is_some_and(|t| t.reached_by(v)) {
            self.evals_to_target = Some(self.evaluations);
        }
        v
    }

    /// Evaluates every member whose fitness is unset, in member order.
    /// Returns the number of objective calls made.
    pub fn population(&mut self, pop: &mut Population) -> usize {
        let mut calls = 0;
        for m in pop.members_mut() {
            if m.fitness.is_none() {
                m.fitness = Some(self.point(&m.coords));
                calls += 1;
            }
        }
        calls
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn anomalies(&self) -> u64 {
        self.anomalies
    }

    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    pub fn best_coords(&self) -> &[f64] {
        &self.best_coords
    }

    pub fn target_reached(&self) -> bool {
        self.evals_to_target.is_some()
    }

    pub fn should_halt(&self) -> bool {
        self.target_reached() && self.target.is_some_and(|t| t.halt)
    }

    pub fn into_outcome(
        self,
        iterations: usize,
        target_iteration: Option<usize>,
        trace: Vec<TraceRow>,
    ) -> RunOutcome {
        RunOutcome {
            best_coords: self.best_coords,
            best_value: self.best_value,
            evaluations: self.evaluations,
            iterations,
            evals_to_target: self.evals_to_target,
            target_iteration,
            anomalies: self.anomalies,
            trace,
        }
    }
}

/// Iteration-loop bookkeeping shared by the optimizer drivers.
pub(crate) struct Progress {
    record: bool,
    pub(crate) trace: Vec<TraceRow>,
    pub(crate) target_iteration: Option<usize>,
}

impl Progress {
    pub(crate) fn new(record: bool) -> Self {
        Self {
            record,
            trace: Vec::new(),
            target_iteration: None,
        }
    }

    pub(crate) fn observe<O: Objective + ?Sized>(
        &mut self,
        iteration: usize,
        eval: &Evaluator<'_, O>,
        amplitude: Option<f64>,
    ) {
        if self.target_iteration.is_none() && eval.target_reached() {
            self.target_iteration = Some(iteration);
        }
        if self.record {
            self.trace.push(TraceRow {
                iteration,
                best_fitness: eval.best_value(),
                amplitude,
            });
        }
    }
}
