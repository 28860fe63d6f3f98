use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::objective::{Evaluator, Objective};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

/// How out-of-box coordinates are repaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoundaryPolicy {
    /// Replace the violating coordinate by a fresh uniform draw in its bounds.
    #[default]
    Regenerate,
    /// Clamp the violating coordinate to the nearest bound.
    Clip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub coords: Vec<f64>,
    /// `None` until evaluated, and again after any coordinate changes.
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(coords: Vec<f64>) -> Self {
        Self {
            coords,
            fitness: None,
        }
    }

    pub fn with_fitness(coords: Vec<f64>, fitness: f64) -> Self {
        Self {
            coords,
            fitness: Some(fitness),
        }
    }

    pub fn fitness_or_inf(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }
}

/// `N >= 1` individuals of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidConfig("population must not be empty".into()));
        };
        let dims = first.coords.len();
        if let Some(bad) = members.iter().find(|m| m.coords.len() != dims) {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: bad.coords.len(),
            });
        }
        Ok(Self {
            members,
            generation: 0,
        })
    }

    /// Builds a population from raw coordinate rows.
    pub fn from_rows<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: Into<Vec<f64>>,
    {
        Self::new(
            rows.into_iter()
                .map(|r| Individual::new(r.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.members[0].coords.len()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [Individual] {
        &mut self.members
    }

    pub fn member(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    pub fn fitness(&self) -> Vec<Option<f64>> {
        self.members.iter().map(|m| m.fitness).collect()
    }

    pub fn is_evaluated(&self) -> bool {
        self.members.iter().all(|m| m.fitness.is_some())
    }

    /// Index of the member with the lowest fitness; unevaluated members
    /// count as `+inf` and ties go to the lowest index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for (i, m) in self.members.iter().enumerate().skip(1) {
            if m.fitness_or_inf() < self.members[best].fitness_or_inf() {
                best = i;
            }
        }
        best
    }

    pub(crate) fn check_shape(&self, other: &Population) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::InvalidConfig(alloc::format!(
                "population sizes differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: other.dims(),
            });
        }
        Ok(())
    }
}

/// Draws `n` individuals with `x_ij ~ U(low_j, up_j)`, row by row.
pub fn initialize_population(
    n: usize,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Population> {
    if n == 0 {
        return Err(Error::InvalidConfig(
            "population size must be at least 1".into(),
        ));
    }
    let members = (0..n)
        .map(|_| Individual::new(random_point(space, rng)))
        .collect();
    Population::new(members)
}

pub(crate) fn random_point(space: &SearchSpace, rng: &mut RandomSource) -> Vec<f64> {
    space
        .low()
        .iter()
        .zip(space.up())
        .map(|(&lo, &hi)| rng.uniform(lo, hi))
        .collect()
}

/// Repairs the out-of-bounds coordinates of one point. Returns true when
/// anything changed.
pub fn repair_point(
    x: &mut [f64],
    space: &SearchSpace,
    policy: BoundaryPolicy,
    rng: &mut RandomSource,
) -> bool {
    let mut changed = false;
    for (j, v) in x.iter_mut().enumerate() {
        let (lo, hi) = (space.low()[j], space.up()[j]);
        // NaN compares false both ways, so test containment positively.
        if lo <= *v && *v <= hi {
            continue;
        }
        *v = match policy {
            BoundaryPolicy::Regenerate => rng.uniform(lo, hi),
            BoundaryPolicy::Clip if *v > hi => hi,
            BoundaryPolicy::Clip => lo,
        };
        changed = true;
    }
    changed
}

/// Repairs every member in place (row-major order of draws) and clears the
/// fitness of any member that was touched. Returns the number of members
/// repaired.
pub fn boundary_control(
    pop: &mut Population,
    space: &SearchSpace,
    policy: BoundaryPolicy,
    rng: &mut RandomSource,
) -> Result<usize> {
    space.check_dims(pop.dims())?;
    let mut repaired = 0;
    for m in pop.members_mut() {
        if repair_point(&mut m.coords, space, policy, rng) {
            m.fitness = None;
            repaired += 1;
        }
    }
    Ok(repaired)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationCount {
    pub evaluated: usize,
    pub anomalies: u64,
}

/// Sets the fitness of every unevaluated member. Members that already carry
/// a fitness are not re-evaluated.
pub fn evaluate<O: Objective + ?Sized>(pop: &mut Population, f: &O) -> Result<EvaluationCount> {
    if f.dims() != pop.dims() {
        return Err(Error::DimensionMismatch {
            expected: f.dims(),
            got: pop.dims(),
        });
    }
    let mut e = Evaluator::new(f, None);
    let evaluated = e.population(pop);
    Ok(EvaluationCount {
        evaluated,
        anomalies: e.anomalies(),
    })
}
