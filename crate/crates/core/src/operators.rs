//! Multi-parent parent-centric recombination and polynomial mutation.
//!
//! Offspring are centred on the female parent. For every gene a male is
//! picked at random and the child gene is `f + beta * (f - m)`, where the
//! spread `beta` is drawn from a symmetric density chosen by
//! [`RecombinationKind`]:
//!
//! * `Mlx` (explorative): `beta = s * (exp(eta * |z| / 4) - 1)` with a fair
//!   sign `s` and a standard normal `z`. Heavy, lognormal-like tails.
//! * `Mpx` (exploitative): polynomial density with index `eta`, supported on
//!   `(-1, 1)` and peaked at zero.

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const MLX_ETA: f64 = 4.0;
pub const MPX_ETA: f64 = 1.0;
pub const MUTATION_ETA: f64 = 20.0;
/// Fixed perturbation scale of polynomial mutation (the search box is unbounded).
pub const MUTATION_SCALE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecombinationKind {
    Mlx,
    Mpx,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    /// Distribution index of the recombination spread.
    pub eta: f64,
    pub mu: usize,
    pub lambda: usize,
    pub eta_mutation: f64,
    pub per_gene_mutation_prob: f64,
}

impl OperatorParams {
    pub fn mlx(mu: usize, lambda: usize, dimension: usize) -> Self {
        Self::with_eta(MLX_ETA, mu, lambda, dimension)
    }

    pub fn mpx(mu: usize, lambda: usize, dimension: usize) -> Self {
        Self::with_eta(MPX_ETA, mu, lambda, dimension)
    }

    fn with_eta(eta: f64, mu: usize, lambda: usize, dimension: usize) -> Self {
        Self {
            eta,
            mu,
            lambda,
            eta_mutation: MUTATION_ETA,
            per_gene_mutation_prob: 1.0 / dimension.max(1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // written so that NaN is rejected too
        let positive = |v: f64| v > 0.0;
        if !positive(self.eta) || !positive(self.eta_mutation) {
            return Err(Error::InvalidConfig(format!(
                "distribution indices must be positive (eta = {}, eta_mutation = {})",
                self.eta, self.eta_mutation
            )));
        }
        if self.lambda < 1 {
            return Err(Error::InvalidConfig("lambda must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.per_gene_mutation_prob) {
            return Err(Error::InvalidConfig(format!(
                "mutation probability must lie in [0, 1], got {}",
                self.per_gene_mutation_prob
            )));
        }
        Ok(())
    }
}

/// Inverse CDF of the symmetric polynomial density with index `eta`.
///
/// Maps `u` in `(0, 1)` to a value in `(-1, 1)`.
pub fn polynomial_delta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u < 0.5 {
        (2.0 * u).powf(exponent) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u)).powf(exponent)
    }
}

/// Draws one spread factor for `kind`.
pub fn sample_spread(kind: RecombinationKind, eta: f64, rng: &mut RngStream) -> f64 {
    match kind {
        RecombinationKind::Mlx => {
            let s = rng.sign();
            let z = rng.normal();
            s * ((eta * z.abs() * 0.25).exp() - 1.0)
        }
        RecombinationKind::Mpx => polynomial_delta(rng.uniform_open(), eta),
    }
}

/// Produces `params.lambda` children around `female`.
pub fn recombine(
    kind: RecombinationKind,
    female: &[f64],
    males: &[&[f64]],
    params: &OperatorParams,
    rng: &mut RngStream,
) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    if males.is_empty() {
        return Err(Error::NoMales);
    }
    let n = female.len();
    if let Some(bad) = males.iter().find(|m| m.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    let children = (0..params.lambda)
        .map(|_| {
            female
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    let m = males[rng.index(males.len())][j];
                    let beta = sample_spread(kind, params.eta, rng);
                    f + beta * (f - m)
                })
                .collect()
        })
        .collect();
    Ok(children)
}

/// Polynomial mutation with a fixed perturbation scale.
pub fn mutate(genes: &[f64], params: &OperatorParams, rng: &mut RngStream) -> Result<Vec<f64>> {
    params.validate()?;
    if let Some((index, &value)) = genes.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(genes
        .iter()
        .map(|&g| {
            if rng.bernoulli(params.per_gene_mutation_prob) {
                g + MUTATION_SCALE * polynomial_delta(rng.uniform_open(), params.eta_mutation)
            } else {
                g
            }
        })
        .collect())
}
