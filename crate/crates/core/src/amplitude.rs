use alloc::format;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// How the mutation amplitude `F` is chosen each generation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum AmplitudeStrategy {
    /// `F = scale * N(0, 1)`, drawn fresh every generation.
    ScaledNormal {
        scale: f64,
    },
    Constant {
        value: f64,
    },
    /// `F = f_min + (f_max - f_min) * iteration / max_iterations`.
    LinearSchedule {
        f_min: f64,
        f_max: f64,
    },
}

impl Default for AmplitudeStrategy {
    fn default() -> Self {
        AmplitudeStrategy::ScaledNormal { scale: 3.0 }
    }
}

impl AmplitudeStrategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeStrategy::ScaledNormal { scale } if !(scale > 0.0 && scale.is_finite()) => {
                Err(Error::InvalidConfig(format!(
                    "scaled-normal scale must be positive, got {scale}"
                )))
            }
            AmplitudeStrategy::Constant { value } if !value.is_finite() => Err(
                Error::InvalidConfig(format!("constant amplitude must be finite, got {value}")),
            ),
            AmplitudeStrategy::LinearSchedule { f_min, f_max }
                if !(f_min.is_finite() && f_max.is_finite() && f_min <= f_max) =>
            {
                Err(Error::InvalidConfig(format!(
                    "linear schedule needs finite f_min <= f_max, got {f_min}..{f_max}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Amplitude for `iteration` (1-based) out of `max_iterations`.
    pub fn draw(&self, iteration: usize, max_iterations: usize, rng: &mut RandomSource) -> f64 {
        match *self {
            AmplitudeStrategy::ScaledNormal { scale } => scale * rng.normal(),
            AmplitudeStrategy::Constant { value } => value,
            AmplitudeStrategy::LinearSchedule { f_min, f_max } => {
                let t = if max_iterations == 0 {
                    1.0
                } else {
                    iteration as f64 / max_iterations as f64
                };
                f_min + (f_max - f_min) * t
            }
        }
    }
}

/// Free-function form of [`AmplitudeStrategy::draw`].
pub fn draw_amplitude(
    strategy: &AmplitudeStrategy,
    iteration: usize,
    max_iterations: usize,
    rng: &mut RandomSource,
) -> f64 {
    strategy.draw(iteration, max_iterations, rng)
}
