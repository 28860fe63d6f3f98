//! Backtracking search optimisation (BSA) and the machinery needed to
//! compare it against other population-based optimizers.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`population`]: search spaces, populations, uniform initialisation,
//!   boundary repair and cached fitness evaluation;
//! - [`bsa`]: the standard BSA generation (selection-I, mutation,
//!   crossover, selection-II) and a driver loop;
//! - [`competitors`]: DE/rand/1/bin, inertia-weight PSO, ABC and Firefly
//!   over the same contracts;
//! - [`benchmarks`]: sixteen classic test functions with their minima;
//! - [`stats`]: descriptive statistics and the paired Wilcoxon
//!   signed-rank test with an exact null distribution.
#![no_std]

extern crate alloc;

pub mod amplitude;
pub mod benchmarks;
pub mod bsa;
pub mod competitors;
mod error;
pub mod objective;
pub mod population;
pub mod rng;
pub mod space;
pub mod stats;

pub use amplitude::AmplitudeStrategy;
pub use benchmarks::{registry, FunctionId, ObjectiveFunction};
pub use bsa::{bsa_minimize, BsaConfig, CrossoverMode};
pub use competitors::{Algorithm, CompetitorConfig, CompetitorParams};
pub use error::{Error, Result};
pub use objective::{Evaluator, Objective, RunOutcome, RunSettings, Target, TraceRow};
pub use population::{BoundaryPolicy, Individual, Population};
pub use rng::RandomSource;
pub use space::SearchSpace;
