//! Sixteen classic minimisation test functions.
//!
//! | id  | function        | default box          | minimiser                       | f*                  |
//! |-----|-----------------|----------------------|---------------------------------|---------------------|
//! | F1  | Ackley          | [-32, 32]^n          | 0                               | 0                   |
//! | F2  | Alpine01        | [0, 10]^2            | 0                               | 0                   |
//! | F3  | Bird            | [-2π, 2π]^2          | (4.70104, 3.15294), (-1.58214, -3.13025) | -106.764537   |
//! | F4  | Leon            | [0, 10]^2            | (1, 1)                          | 0                   |
//! | F5  | CrossInTray     | [-10, 10]^2          | (±1.349407, ±1.349407)          | -2.06261187         |
//! | F6  | Easom           | [-100, 100]^2        | (π, π)                          | -1                  |
//! | F7  | Whitley         | [-10.24, 10.24]^2    | (1, 1)                          | 0                   |
//! | F8  | EggCrate        | [-5, 5]^2            | 0                               | 0                   |
//! | F9  | Griewank        | [-600, 600]^n        | 0                               | 0                   |
//! | F10 | HolderTable     | [-10, 10]^2          | (±8.05502, ±9.66459)            | -19.2085026         |
//! | F11 | Rastrigin       | [-5.12, 5.12]^n      | 0                               | 0                   |
//! | F12 | Rosenbrock      | [-5, 10]^n           | 1                               | 0                   |
//! | F13 | Salomon         | [-100, 100]^2        | 0                               | 0                   |
//! | F14 | Sphere          | [-1, 1]^2            | 0                               | 0                   |
//! | F15 | StyblinskiTang  | [-5, 5]^n            | -2.903534 per coordinate        | -39.16616570·n      |
//! | F16 | Schwefel26      | [-500, 500]^2        | 420.968746 per coordinate       | 0                   |
//!
//! Formulas:
//!
//! - Ackley: `-20·exp(-0.2·sqrt(Σx²/n)) - exp(Σcos(2πx)/n) + 20 + e`
//! - Alpine01: `Σ|x·sin x + 0.1·x|`
//! - Bird: `sin x·exp((1-cos y)²) + cos y·exp((1-sin x)²) + (x-y)²`
//! - Leon: `100·(y - x³)² + (1 - x)²`
//! - CrossInTray: `-1e-4·(|sin x·sin y·exp(|100 - sqrt(x²+y²)/π|)| + 1)^0.1`
//! - Easom: `-cos x·cos y·exp(-(x-π)² - (y-π)²)`
//! - Whitley: `Σ_i Σ_j [y²/4000 - cos y + 1]`, `y = 100·(x_i² - x_j)² + (1 - x_j)²`
//! - EggCrate: `x² + y² + 25·(sin²x + sin²y)`
//! - Griewank: `Σx²/4000 - Π cos(x_i/sqrt(i)) + 1`
//! - HolderTable: `-|sin x·cos y·exp(|1 - sqrt(x²+y²)/π|)|`
//! - Rastrigin: `10n + Σ(x² - 10·cos(2πx))`
//! - Rosenbrock: `Σ 100·(x_{i+1} - x_i²)² + (x_i - 1)²`
//! - Salomon: `1 - cos(2π·‖x‖) + 0.1·‖x‖`
//! - Sphere: `Σx²`
//! - StyblinskiTang: `½·Σ(x⁴ - 16x² + 5x)`
//! - Schwefel26: `418.9828872724337·n - Σ x·sin(sqrt|x|)`
//!
//! The minima of Bird, CrossInTray, HolderTable and StyblinskiTang and the
//! Schwefel26 offset are carried to full double precision, refined offline
//! at 40 significant digits. The rounded values published alongside the
//! hardness scores are kept in [`ObjectiveFunction::published_min`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use libm::{cos, exp, fabs, pow, sin, sqrt};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::space::SearchSpace;

const BIRD_MIN: f64 = -106.764_536_749_264_67;
const BIRD_A: [f64; 2] = [4.701_043_130_249_553, 3.152_938_503_724_930_3];
const BIRD_B: [f64; 2] = [-1.582_142_176_930_033_5, -3.130_246_803_454_656_4];
const CROSS_IN_TRAY_MIN: f64 = -2.062_611_870_822_737;
const CROSS_IN_TRAY_X: f64 = 1.349_406_617_153_910_8;
const HOLDER_MIN: f64 = -19.208_502_567_886_732;
const HOLDER_X: f64 = 8.055_023_475_736_563;
const HOLDER_Y: f64 = 9.664_590_019_241_273;
const STYBLINSKI_TANG_MIN: f64 = -39.166_165_703_771_41;
const STYBLINSKI_TANG_X: f64 = -2.903_534_027_771_177;
const SCHWEFEL_OFFSET: f64 = 418.982_887_272_433_7;
const SCHWEFEL_X: f64 = 420.968_746_359_982;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FunctionId {
    Ackley,
    Alpine01,
    Bird,
    Leon,
    CrossInTray,
    Easom,
    Whitley,
    EggCrate,
    Griewank,
    HolderTable,
    Rastrigin,
    Rosenbrock,
    Salomon,
    Sphere,
    StyblinskiTang,
    Schwefel26,
}

impl FunctionId {
    pub const ALL: [FunctionId; 16] = [
        FunctionId::Ackley,
        FunctionId::Alpine01,
        FunctionId::Bird,
        FunctionId::Leon,
        FunctionId::CrossInTray,
        FunctionId::Easom,
        FunctionId::Whitley,
        FunctionId::EggCrate,
        FunctionId::Griewank,
        FunctionId::HolderTable,
        FunctionId::Rastrigin,
        FunctionId::Rosenbrock,
        FunctionId::Salomon,
        FunctionId::Sphere,
        FunctionId::StyblinskiTang,
        FunctionId::Schwefel26,
    ];

    /// 1-based table number (`F1` .. `F16`).
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn code(self) -> &'static str {
        const CODES: [&str; 16] = [
            "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10", "F11", "F12", "F13",
            "F14", "F15", "F16",
        ];
        CODES[self as usize]
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Ackley => "Ackley",
            FunctionId::Alpine01 => "Alpine01",
            FunctionId::Bird => "Bird",
            FunctionId::Leon => "Leon",
            FunctionId::CrossInTray => "CrossInTray",
            FunctionId::Easom => "Easom",
            FunctionId::Whitley => "Whitley",
            FunctionId::EggCrate => "EggCrate",
            FunctionId::Griewank => "Griewank",
            FunctionId::HolderTable => "HolderTable",
            FunctionId::Rastrigin => "Rastrigin",
            FunctionId::Rosenbrock => "Rosenbrock",
            FunctionId::Salomon => "Salomon",
            FunctionId::Sphere => "Sphere",
            FunctionId::StyblinskiTang => "StyblinskiTang",
            FunctionId::Schwefel26 => "Schwefel26",
        }
    }

    pub fn scalable(self) -> bool {
        matches!(
            self,
            FunctionId::Ackley
                | FunctionId::Griewank
                | FunctionId::Rastrigin
                | FunctionId::Rosenbrock
                | FunctionId::StyblinskiTang
        )
    }

    /// Overall success percentage; higher means easier.
    pub fn hardness_pct(self) -> f64 {
        match self {
            FunctionId::Ackley => 48.25,
            FunctionId::Alpine01 => 65.17,
            FunctionId::Bird => 59.00,
            FunctionId::Leon => 41.17,
            FunctionId::CrossInTray => 74.08,
            FunctionId::Easom => 26.08,
            FunctionId::Whitley => 4.92,
            FunctionId::EggCrate => 64.92,
            FunctionId::Griewank => 6.08,
            FunctionId::HolderTable => 80.08,
            FunctionId::Rastrigin => 39.50,
            FunctionId::Rosenbrock => 44.17,
            FunctionId::Salomon => 10.33,
            FunctionId::Sphere => 82.75,
            FunctionId::StyblinskiTang => 70.50,
            FunctionId::Schwefel26 => 62.67,
        }
    }

    /// Per-coordinate default bounds.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            FunctionId::Ackley => (-32.0, 32.0),
            FunctionId::Alpine01 | FunctionId::Leon => (0.0, 10.0),
            FunctionId::Bird => (-2.0 * PI, 2.0 * PI),
            FunctionId::CrossInTray | FunctionId::HolderTable => (-10.0, 10.0),
            FunctionId::Easom | FunctionId::Salomon => (-100.0, 100.0),
            FunctionId::Whitley => (-10.24, 10.24),
            FunctionId::EggCrate | FunctionId::StyblinskiTang => (-5.0, 5.0),
            FunctionId::Griewank => (-600.0, 600.0),
            FunctionId::Rastrigin => (-5.12, 5.12),
            FunctionId::Rosenbrock => (-5.0, 10.0),
            FunctionId::Sphere => (-1.0, 1.0),
            FunctionId::Schwefel26 => (-500.0, 500.0),
        }
    }

    /// Global minimum in `dims` dimensions.
    pub fn global_min(self, dims: usize) -> f64 {
        match self {
            FunctionId::Bird => BIRD_MIN,
            FunctionId::CrossInTray => CROSS_IN_TRAY_MIN,
            FunctionId::Easom => -1.0,
            FunctionId::HolderTable => HOLDER_MIN,
            FunctionId::StyblinskiTang => STYBLINSKI_TANG_MIN * dims as f64,
            _ => 0.0,
        }
    }

    /// Rounded minimum as published next to the hardness scores
    /// (StyblinskiTang per coordinate, scaled by `dims`).
    pub fn published_min(self, dims: usize) -> f64 {
        match self {
            FunctionId::Bird => -106.76453,
            FunctionId::CrossInTray => -2.062611,
            FunctionId::Easom => -1.0,
            FunctionId::HolderTable => -19.2085,
            FunctionId::StyblinskiTang => -39.1661 * dims as f64,
            _ => 0.0,
        }
    }

    /// Tolerance for checking `f(minimiser) = f*`.
    pub fn min_tolerance(self) -> f64 {
        match self {
            FunctionId::Bird | FunctionId::CrossInTray | FunctionId::HolderTable => 1e-6,
            _ => 1e-9,
        }
    }

    /// Tolerance for the published (rounded) minimum.
    pub fn published_tolerance(self) -> f64 {
        match self {
            FunctionId::Bird
            | FunctionId::CrossInTray
            | FunctionId::HolderTable
            | FunctionId::StyblinskiTang => 1e-3,
            _ => 1e-6,
        }
    }

    pub fn minimizers(self, dims: usize) -> Vec<Vec<f64>> {
        let fill = |v: f64| vec![vec![v; dims]];
        match self {
            FunctionId::Ackley
            | FunctionId::Alpine01
            | FunctionId::EggCrate
            | FunctionId::Griewank
            | FunctionId::Rastrigin
            | FunctionId::Salomon
            | FunctionId::Sphere => fill(0.0),
            FunctionId::Leon | FunctionId::Whitley | FunctionId::Rosenbrock => fill(1.0),
            FunctionId::StyblinskiTang => fill(STYBLINSKI_TANG_X),
            FunctionId::Schwefel26 => fill(SCHWEFEL_X),
            FunctionId::Easom => vec![vec![PI, PI]],
            FunctionId::Bird => vec![BIRD_A.to_vec(), BIRD_B.to_vec()],
            FunctionId::CrossInTray => signs(CROSS_IN_TRAY_X, CROSS_IN_TRAY_X),
            FunctionId::HolderTable => signs(HOLDER_X, HOLDER_Y),
        }
    }

    /// Builds the function at `dims` dimensions with its default box.
    pub fn at_dims(self, dims: usize) -> Result<ObjectiveFunction> {
        check_dims(self, dims)?;
        let (lo, hi) = self.default_bounds();
        Ok(ObjectiveFunction {
            id: self,
            name: self.name(),
            dims,
            default_space: SearchSpace::uniform(dims, lo, hi)?,
            global_min_value: self.global_min(dims),
            global_min_points: self.minimizers(dims),
            scalable: self.scalable(),
            hardness_pct: self.hardness_pct(),
            published_min: self.published_min(dims),
        })
    }

    /// Evaluates the formula at `x` without any dimension check.
    pub fn formula(self, x: &[f64]) -> f64 {
        match self {
            FunctionId::Ackley => {
                let n = x.len() as f64;
                let sq: f64 = x.iter().map(|v| v * v).sum();
                let cs: f64 = x.iter().map(|v| cos(2.0 * PI * v)).sum();
                -20.0 * exp(-0.2 * sqrt(sq / n)) - exp(cs / n) + 20.0 + E
            }
            FunctionId::Alpine01 => x.iter().map(|v| fabs(v * sin(*v) + 0.1 * v)).sum(),
            FunctionId::Bird => {
                let (a, b) = (x[0], x[1]);
                sin(a) * exp(pow(1.0 - cos(b), 2.0))
                    + cos(b) * exp(pow(1.0 - sin(a), 2.0))
                    + (a - b) * (a - b)
            }
            FunctionId::Leon => {
                let (a, b) = (x[0], x[1]);
                100.0 * (b - a * a * a) * (b - a * a * a) + (1.0 - a) * (1.0 - a)
            }
            FunctionId::CrossInTray => {
                let (a, b) = (x[0], x[1]);
                let r = sqrt(a * a + b * b);
                -1e-4 * pow(fabs(sin(a) * sin(b) * exp(fabs(100.0 - r / PI))) + 1.0, 0.1)
            }
            FunctionId::Easom => {
                let (a, b) = (x[0], x[1]);
                -cos(a) * cos(b) * exp(-(a - PI) * (a - PI) - (b - PI) * (b - PI))
            }
            FunctionId::Whitley => {
                let mut s = 0.0;
                for xi in x {
                    for xj in x {
                        let t = 100.0 * (xi * xi - xj) * (xi * xi - xj) + (1.0 - xj) * (1.0 - xj);
                        s += t * t / 4000.0 - cos(t) + 1.0;
                    }
                }
                s
            }
            FunctionId::EggCrate => x.iter().map(|v| v * v + 25.0 * sin(*v) * sin(*v)).sum(),
            FunctionId::Griewank => {
                let sq: f64 = x.iter().map(|v| v * v).sum();
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| cos(v / sqrt((i + 1) as f64)))
                    .product();
                sq / 4000.0 - prod + 1.0
            }
            FunctionId::HolderTable => {
                let (a, b) = (x[0], x[1]);
                let r = sqrt(a * a + b * b);
                -fabs(sin(a) * cos(b) * exp(fabs(1.0 - r / PI)))
            }
            FunctionId::Rastrigin => {
                10.0 * x.len() as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * cos(2.0 * PI * v))
                        .sum::<f64>()
            }
            FunctionId::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    100.0 * (w[1] - w[0] * w[0]) * (w[1] - w[0] * w[0])
                        + (w[0] - 1.0) * (w[0] - 1.0)
                })
                .sum(),
            FunctionId::Salomon => {
                let r = sqrt(x.iter().map(|v| v * v).sum::<f64>());
                1.0 - cos(2.0 * PI * r) + 0.1 * r
            }
            FunctionId::Sphere => x.iter().map(|v| v * v).sum(),
            FunctionId::StyblinskiTang => {
                0.5 * x
                    .iter()
                    .map(|v| v * v * v * v - 16.0 * v * v + 5.0 * v)
                    .sum::<f64>()
            }
            FunctionId::Schwefel26 => {
                SCHWEFEL_OFFSET * x.len() as f64
                    - x.iter().map(|v| v * sin(sqrt(fabs(*v)))).sum::<f64>()
            }
        }
    }
}

fn signs(a: f64, b: f64) -> Vec<Vec<f64>> {
    vec![vec![a, b], vec![-a, b], vec![a, -b], vec![-a, -b]]
}

fn check_dims(id: FunctionId, dims: usize) -> Result<()> {
    if dims == 0 {
        return Err(Error::InvalidConfig(format!(
            "{} needs at least one dimension",
            id.name()
        )));
    }
    if !id.scalable() && dims != 2 {
        return Err(Error::FixedDimension(id.name()));
    }
    Ok(())
}

impl core::fmt::Display for FunctionId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.code())
    }
}

impl core::str::FromStr for FunctionId {
    type Err = Error;

    /// Accepts a table code (`F14`, case-insensitive) or a name (`sphere`).
    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.code().eq_ignore_ascii_case(s) || id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidConfig(format!("unknown function {s:?}; valid ids are F1..F16"))
            })
    }
}

/// Evaluates function `id` at `x`, rejecting dimensions the function does
/// not support.
pub fn evaluate_function(id: FunctionId, x: &[f64]) -> Result<f64> {
    check_dims(id, x.len())?;
    Ok(id.formula(x))
}

/// A benchmark function bound to a dimension, with its metadata.
///
/// The fields are plain data so that a registry can be inspected (or
/// deliberately corrupted in tests) independently of the formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    pub id: FunctionId,
    pub name: &'static str,
    pub dims: usize,
    pub default_space: SearchSpace,
    pub global_min_value: f64,
    pub global_min_points: Vec<Vec<f64>>,
    pub scalable: bool,
    pub hardness_pct: f64,
    pub published_min: f64,
}

impl ObjectiveFunction {
    pub fn with_dims(&self, dims: usize) -> Result<ObjectiveFunction> {
        self.id.at_dims(dims)
    }
}

impl Objective for ObjectiveFunction {
    fn dims(&self) -> usize {
        self.dims
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.id.formula(x)
    }
}

/// All sixteen functions at their registered dimension (2; the scalable
/// ones are re-dimensioned with [`ObjectiveFunction::with_dims`]).
pub fn registry() -> Vec<ObjectiveFunction> {
    FunctionId::ALL
        .iter()
        .map(|id| id.at_dims(2).expect("every function accepts D = 2"))
        .collect()
}
