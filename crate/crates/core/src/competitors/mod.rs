//! Reference competitors sharing the BSA contracts: the same search space,
//! boundary repair, evaluation accounting and run outcome.
//!
//! Evaluations per iteration: DE and PSO `N`; ABC `2N` plus at most one
//! scout; Firefly at most `N` (fireflies that do not move are not
//! re-evaluated).

use alloc::format;

use crate::bsa::{bsa_minimize, BsaConfig};
use crate::error::{Error, Result};
use crate::objective::{Objective, RunOutcome, RunSettings};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

mod abc;
mod de;
mod ff;
mod pso;

pub use abc::{abc_minimize, abc_neighbor, AbcParams};
pub use de::{de_minimize, DeParams};
pub use ff::{ff_minimize, FfParams};
pub use pso::{pso_minimize, PsoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Algorithm {
    Bsa,
    De,
    Pso,
    Abc,
    Ff,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Bsa,
        Algorithm::De,
        Algorithm::Pso,
        Algorithm::Abc,
        Algorithm::Ff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bsa => "BSA",
            Algorithm::De => "DE",
            Algorithm::Pso => "PSO",
            Algorithm::Abc => "ABC",
            Algorithm::Ff => "FF",
        }
    }

    /// Small stable integer used when deriving random streams.
    pub fn index(self) -> u64 {
        self as u64
    }

    /// Upper bound on objective calls for a full run of `settings`.
    pub fn max_evaluations(self, settings: &RunSettings) -> u64 {
        let n = settings.pop_size as u64;
        let per_iter = match self {
            Algorithm::Abc => 2 * n + 1,
            _ => n,
        };
        n + per_iter * settings.max_iterations as u64
    }

    /// Runs the algorithm with its default parameters.
    pub fn minimize<O: Objective + ?Sized>(
        self,
        objective: &O,
        space: &SearchSpace,
        settings: &RunSettings,
        rng: &mut RandomSource,
    ) -> Result<RunOutcome> {
        match self {
            Algorithm::Bsa => {
                let cfg = BsaConfig {
                    run: settings.clone(),
                    ..BsaConfig::default()
                };
                bsa_minimize(objective, space, &cfg, rng)
            }
            other => {
                let cfg = CompetitorConfig::with_defaults(other, settings.clone())?;
                cfg.minimize(objective, space, rng)
            }
        }
    }
}

impl core::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown algorithm {s:?} (expected one of bsa, de, pso, abc, ff)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompetitorParams {
    De(DeParams),
    Pso(PsoParams),
    Abc(AbcParams),
    Ff(FfParams),
}

impl CompetitorParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            CompetitorParams::De(_) => Algorithm::De,
            CompetitorParams::Pso(_) => Algorithm::Pso,
            CompetitorParams::Abc(_) => Algorithm::Abc,
            CompetitorParams::Ff(_) => Algorithm::Ff,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad =
            |name: &str, v: f64| Err(Error::InvalidConfig(format!("{name} out of range: {v}")));
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        match self {
            CompetitorParams::De(p) => {
                if !nonneg(p.f_weight) {
                    return bad("f_weight", p.f_weight);
                }
                if !(0.0..=1.0).contains(&p.crossover_rate) {
                    return bad("crossover_rate", p.crossover_rate);
                }
            }
            CompetitorParams::Pso(p) => {
                if !(0.0..1.0).contains(&p.inertia) {
                    return bad("inertia", p.inertia);
                }
                if !nonneg(p.cognitive) {
                    return bad("cognitive", p.cognitive);
                }
                if !nonneg(p.social) {
                    return bad("social", p.social);
                }
                if !(p.velocity_clamp_fraction > 0.0 && p.velocity_clamp_fraction.is_finite()) {
                    return bad("velocity_clamp_fraction", p.velocity_clamp_fraction);
                }
            }
            CompetitorParams::Abc(p) => {
                if let Some(limit) = p.trial_limit {
                    if limit.is_nan() || limit <= 0.0 {
                        return bad("trial_limit", limit);
                    }
                }
            }
            CompetitorParams::Ff(p) => {
                if !nonneg(p.beta0) {
                    return bad("beta0", p.beta0);
                }
                if p.gamma.is_nan() || p.gamma < 0.0 {
                    return bad("gamma", p.gamma);
                }
                if !nonneg(p.alpha) {
                    return bad("alpha", p.alpha);
                }
                if !(p.alpha_decay > 0.0 && p.alpha_decay.is_finite()) {
                    return bad("alpha_decay", p.alpha_decay);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorConfig {
    pub run: RunSettings,
    pub params: CompetitorParams,
}

impl CompetitorConfig {
    pub fn with_defaults(algorithm: Algorithm, run: RunSettings) -> Result<Self> {
        let params = match algorithm {
            Algorithm::De => CompetitorParams::De(DeParams::default()),
            Algorithm::Pso => CompetitorParams::Pso(PsoParams::default()),
            Algorithm::Abc => CompetitorParams::Abc(AbcParams::default()),
            Algorithm::Ff => CompetitorParams::Ff(FfParams::default()),
            Algorithm::Bsa => {
                return Err(Error::InvalidConfig("BSA is not a competitor".into()));
            }
        };
        Ok(Self { run, params })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.params.algorithm()
    }

    pub fn validate(&self) -> Result<()> {
        if self.run.pop_size == 0 {
            return Err(Error::InvalidConfig("pop_size must be at least 1".into()));
        }
        self.params.validate()
    }

    pub fn minimize<O: Objective + ?Sized>(
        &self,
        objective: &O,
        space: &SearchSpace,
        rng: &mut RandomSource,
    ) -> Result<RunOutcome> {
        self.validate()?;
        space.check_dims(objective.dims())?;
        match &self.params {
            CompetitorParams::De(p) => de::run(objective, space, &self.run, p, rng),
            CompetitorParams::Pso(p) => pso::run(objective, space, &self.run, p, rng),
            CompetitorParams::Abc(p) => abc::run(objective, space, &self.run, p, rng),
            CompetitorParams::Ff(p) => ff::run(objective, space, &self.run, p, rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("bsa".parse::<Algorithm>().unwrap(), Algorithm::Bsa);
        assert_eq!("FF".parse::<Algorithm>().unwrap(), Algorithm::Ff);
        assert!("ga".parse::<Algorithm>().is_err());
    }

    #[test]
    fn parameter_ranges() {
        let run = RunSettings::default();
        let mut cfg = CompetitorConfig::with_defaults(Algorithm::Pso, run.clone()).unwrap();
        assert!(cfg.validate().is_ok());
        if let CompetitorParams::Pso(p) = &mut cfg.params {
            p.inertia = 1.0;
        }
        assert!(cfg.validate().is_err());
        let mut cfg = CompetitorConfig::with_defaults(Algorithm::De, run).unwrap();
        if let CompetitorParams::De(p) = &mut cfg.params {
            p.crossover_rate = 1.5;
        }
        assert!(cfg.validate().is_err());
        assert!(CompetitorConfig::with_defaults(Algorithm::Bsa, RunSettings::default()).is_err());
    }
}
