//! Benchmark objective functions.
//!
//! All functions are minimised, are nonnegative and reach their global
//! minimum of zero at the origin, except Rosenbrock whose minimiser is the
//! all-ones point.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Lower bound of the skewed initialisation box.
pub const INIT_LOW: f64 = -10.0;
/// Upper bound (exclusive) of the skewed initialisation box.
pub const INIT_HIGH: f64 = -5.0;
/// Problem dimension used when none is configured.
pub const DEFAULT_DIMENSION: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    Sphere,
    Ellipsoidal,
    Tablet,
    Cigar,
    TwoAxes,
    Schwefel,
    Rosenbrock,
    Rastrigin,
    RastriginScaled,
    RastriginSkewed,
    Griewangk,
    Ackley,
    Bohachevsky,
}

impl FunctionId {
    /// The whole catalog in its stable listing order.
    pub const ALL: [FunctionId; 13] = [
        FunctionId::Sphere,
        FunctionId::Ellipsoidal,
        FunctionId::Tablet,
        FunctionId::Cigar,
        FunctionId::TwoAxes,
        FunctionId::Schwefel,
        FunctionId::Rosenbrock,
        FunctionId::Rastrigin,
        FunctionId::RastriginScaled,
        FunctionId::RastriginSkewed,
        FunctionId::Griewangk,
        FunctionId::Ackley,
        FunctionId::Bohachevsky,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Sphere => "sphere",
            FunctionId::Ellipsoidal => "ellipsoidal",
            FunctionId::Tablet => "tablet",
            FunctionId::Cigar => "cigar",
            FunctionId::TwoAxes => "two_axes",
            FunctionId::Schwefel => "schwefel",
            FunctionId::Rosenbrock => "rosenbrock",
            FunctionId::Rastrigin => "rastrigin",
            FunctionId::RastriginScaled => "rastrigin_scaled",
            FunctionId::RastriginSkewed => "rastrigin_skewed",
            FunctionId::Griewangk => "griewangk",
            FunctionId::Ackley => "ackley",
            FunctionId::Bohachevsky => "bohachevsky",
        }
    }

    pub fn is_multimodal(self) -> bool {
        matches!(
            self,
            FunctionId::Rosenbrock
                | FunctionId::Rastrigin
                | FunctionId::RastriginScaled
                | FunctionId::RastriginSkewed
                | FunctionId::Griewangk
                | FunctionId::Ackley
                | FunctionId::Bohachevsky
        )
    }

    pub fn is_separable(self) -> bool {
        matches!(
            self,
            FunctionId::Sphere
                | FunctionId::Ellipsoidal
                | FunctionId::Tablet
                | FunctionId::Cigar
                | FunctionId::TwoAxes
                | FunctionId::Rastrigin
                | FunctionId::RastriginScaled
                | FunctionId::RastriginSkewed
        )
    }

    pub fn meta(self, dimension: usize) -> FunctionMeta {
        FunctionMeta {
            id: self,
            dimension,
            global_minimum_value: 0.0,
            init_low: INIT_LOW,
            init_high: INIT_HIGH,
            multimodal: self.is_multimodal(),
            separable: self.is_separable(),
        }
    }

    /// The known global minimiser in `n` dimensions.
    pub fn optimum(self, n: usize) -> Vec<f64> {
        match self {
            FunctionId::Rosenbrock => vec![1.0; n],
            _ => vec![0.0; n],
        }
    }

    /// Evaluates without validating the input.
    pub fn value(self, x: &[f64]) -> f64 {
        let n = x.len();
        match self {
            FunctionId::Sphere => x.iter().map(|v| v * v).sum(),
            FunctionId::Ellipsoidal => x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v * v)
                .sum(),
            FunctionId::Tablet => 1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>(),
            FunctionId::Cigar => x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>(),
            FunctionId::TwoAxes => {
                let half = n / 2;
                1e6 * x[..half].iter().map(|v| v * v).sum::<f64>()
                    + x[half..].iter().map(|v| v * v).sum::<f64>()
            }
            FunctionId::Schwefel => {
                let mut prefix = 0.0;
                let mut total = 0.0;
                for v in x {
                    prefix += v;
                    total += prefix * prefix;
                }
                total
            }
            FunctionId::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    let a = w[0] * w[0] - w[1];
                    let b = w[0] - 1.0;
                    100.0 * a * a + b * b
                })
                .sum(),
            FunctionId::Rastrigin => rastrigin_sum(x.iter().map(|&v| (v, v))),
            FunctionId::RastriginScaled => {
                let denom = (n - 1) as f64;
                rastrigin_sum(x.iter().enumerate().map(|(i, &v)| {
                    let z = 10f64.powf(i as f64 / denom) * v;
                    (z, z)
                }))
            }
            FunctionId::RastriginSkewed => {
                rastrigin_sum(x.iter().map(|&v| (if v > 0.0 { 10.0 * v } else { v }, v)))
            }
            FunctionId::Griewangk => {
                let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            FunctionId::Ackley => {
                let nf = n as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / nf;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / nf;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            FunctionId::Bohachevsky => x
                .windows(2)
                .map(|w| {
                    w[0] * w[0] + 2.0 * w[1] * w[1]
                        - 0.3 * (3.0 * PI * w[0]).cos()
                        - 0.4 * (4.0 * PI * w[1]).cos()
                        + 0.7
                })
                .sum(),
        }
    }
}

// 10n + sum(y^2 - 10 cos(2 pi c)) over (y, c) pairs; written as a sum of
// per-term (y^2 + 10 - 10 cos) so the optimum cancels exactly.
fn rastrigin_sum(terms: impl Iterator<Item = (f64, f64)>) -> f64 {
    terms
        .map(|(y, c)| y * y + 10.0 - 10.0 * (2.0 * PI * c).cos())
        .sum()
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        FunctionId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionMeta {
    pub id: FunctionId,
    pub dimension: usize,
    pub global_minimum_value: f64,
    pub init_low: f64,
    pub init_high: f64,
    pub multimodal: bool,
    pub separable: bool,
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Evaluates `id` at `x`, rejecting vectors shorter than two or with
/// non-finite components.
pub fn evaluate(id: FunctionId, x: &[f64]) -> Result<f64> {
    check_dimension(x.len())?;
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(id.value(x))
}

/// A catalog function bound to a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Objective {
    pub id: FunctionId,
    pub dimension: usize,
}

impl Objective {
    pub fn new(id: FunctionId, dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(Self { id, dimension })
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        evaluate(self.id, x)
    }
}

/// Draws a starting point uniformly from `[INIT_LOW, INIT_HIGH)^n`, far from
/// the optimum at the origin.
///
/// The sampled box does not depend on `id`; it is taken so callers can keep
/// per-function initialisation behind one entry point.
pub fn skewed_init(_id: FunctionId, n: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_dimension(n)?;
    Ok((0..n)
        .map(|_| loop {
            let v = rng.uniform_range(INIT_LOW, INIT_HIGH);
            // rounding can land exactly on the open upper bound
            if v < INIT_HIGH {
                break v;
            }
        })
        .collect())
}

pub fn list_functions() -> Vec<FunctionMeta> {
    FunctionId::ALL
        .iter()
        .map(|id| id.meta(DEFAULT_DIMENSION))
        .collect()
}
