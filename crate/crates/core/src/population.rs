//! Population model, run configuration and evaluation accounting.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::functions::{skewed_init, FunctionId, Objective, DEFAULT_DIMENSION};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sex {
    Unassigned,
    Male,
    Female,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<f64>,
    /// Cached objective value of `genes`; lower is better.
    pub fitness: f64,
    pub sex: Sex,
    pub fertility_count: u32,
}

impl Individual {
    pub fn new(genes: Vec<f64>, fitness: f64) -> Self {
        Self {
            genes,
            fitness,
            sex: Sex::Unassigned,
            fertility_count: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
    pub objective: Objective,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension
    }

    pub fn genes(&self, index: usize) -> &[f64] {
        &self.members[index].genes
    }

    pub fn females(&self) -> Vec<usize> {
        self.indices_with(Sex::Female)
    }

    pub fn males(&self) -> Vec<usize> {
        self.indices_with(Sex::Male)
    }

    fn indices_with(&self, sex: Sex) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.sex == sex)
            .map(|(i, _)| i)
            .collect()
    }

    /// Index and fitness of the best member; `None` when empty.
    pub fn best_of(&self) -> Option<(usize, f64)> {
        best_of(&self.members)
    }

    /// True when every cached fitness equals a fresh evaluation.
    pub fn is_coherent(&self) -> bool {
        self.members
            .iter()
            .all(|m| self.objective.id.value(&m.genes).to_bits() == m.fitness.to_bits())
    }
}

/// Index of the minimal fitness, ties going to the lowest index.
pub fn best_of(members: &[Individual]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, m) in members.iter().enumerate() {
        match best {
            Some((_, f)) if m.fitness >= f => {}
            _ => best = Some((i, m.fitness)),
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Species formation without reclustering.
    Gas3,
    /// Species formation followed by a K-means recluster of the females.
    Gas3km,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Gas3, Algorithm::Gas3km];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gas3 => "gas3",
            Algorithm::Gas3km => "gas3km",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gas3" => Ok(Algorithm::Gas3),
            "gas3km" => Ok(Algorithm::Gas3km),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub function: FunctionId,
    pub dimension: usize,
    /// Population size N.
    pub pop_size: usize,
    /// Probability of recombination (otherwise mutation) in the generation plan.
    pub pc: f64,
    /// Selection-pressure parameter: S = N / R sweeps, merge every N*N / R evolutions.
    pub r: usize,
    /// Parents per recombination (female included).
    pub mu: usize,
    /// Offspring per recombination.
    pub lambda: usize,
    pub max_fes: u64,
    pub target: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
}

impl RunConfig {
    pub fn new(function: FunctionId) -> Self {
        Self {
            function,
            dimension: DEFAULT_DIMENSION,
            pop_size: 100,
            pc: 0.5,
            r: 5,
            mu: 5,
            lambda: 2,
            max_fes: 1_000_000,
            target: 1e-10,
            seed: 0,
            algorithm: Algorithm::Gas3km,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dimension < 2 {
            return fail(format!("dimension must be >= 2, got {}", self.dimension));
        }
        if self.mu < 2 {
            return fail(format!("mu must be >= 2, got {}", self.mu));
        }
        if self.lambda < 1 {
            return fail("lambda must be >= 1".into());
        }
        if self.pop_size < self.mu {
            return fail(format!(
                "population size {} is smaller than mu = {}",
                self.pop_size, self.mu
            ));
        }
        if self.r < 1 || self.r > self.pop_size {
            return fail(format!(
                "R must lie in 1..={}, got {}",
                self.pop_size, self.r
            ));
        }
        if !(0.0..=1.0).contains(&self.pc) {
            return fail(format!("pc must lie in [0, 1], got {}", self.pc));
        }
        if self.max_fes == 0 {
            return fail("max_fes must be positive".into());
        }
        if self.target.is_nan() {
            return fail("target must not be NaN".into());
        }
        Ok(())
    }

    pub fn objective(&self) -> Result<Objective> {
        Objective::new(self.function, self.dimension)
    }

    /// Number of SDM sweeps, `max(1, floor(N / R))`.
    pub fn sdm_sweeps(&self) -> usize {
        (self.pop_size / self.r).max(1)
    }

    /// Evolutions between merges, `max(1, floor(N * N / R))`.
    pub fn merge_period(&self) -> u64 {
        ((self.pop_size * self.pop_size / self.r) as u64).max(1)
    }
}

/// Function-evaluation counter shared by every phase of a run.
///
/// The budget is exhausted once `consumed >= limit`. Callers check
/// exhaustion between offspring batches, so the last batch can overshoot
/// the limit by less than one batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalBudget {
    consumed: u64,
    limit: u64,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Self {
        Self { consumed: 0, limit }
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.consumed)
    }

    pub fn exhausted(&self) -> bool {
        self.consumed >= self.limit
    }

    /// Evaluates `genes` and charges one evaluation. Non-finite input scores
    /// `+inf` so it never replaces anything.
    pub fn evaluate(&mut self, objective: &Objective, genes: &[f64]) -> f64 {
        self.consumed += 1;
        if genes.iter().all(|v| v.is_finite()) {
            objective.id.value(genes)
        } else {
            f64::INFINITY
        }
    }
}

/// Samples and evaluates `N` skewed-initialised members.
pub fn init_population(
    config: &RunConfig,
    rng: &mut RngStream,
    budget: &mut EvalBudget,
) -> Result<Population> {
    config.validate()?;
    let objective = config.objective()?;
    if budget.remaining() < config.pop_size as u64 {
        return Err(Error::BudgetExhausted {
            consumed: budget.consumed(),
            limit: budget.limit(),
        });
    }
    let mut members = Vec::with_capacity(config.pop_size);
    for _ in 0..config.pop_size {
        let genes = skewed_init(config.function, config.dimension, rng)?;
        let fitness = budget.evaluate(&objective, &genes);
        members.push(Individual::new(genes, fitness));
    }
    Ok(Population { members, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{INIT_HIGH, INIT_LOW};

    fn with_fitness(values: &[f64]) -> Vec<Individual> {
        values
            .iter()
            .map(|&f| Individual::new(vec![0.0, 0.0], f))
            .collect()
    }

    #[test]
    fn best_of_picks_lowest_then_first() {
        assert_eq!(best_of(&with_fitness(&[3.0, 1.0, 2.0])), Some((1, 1.0)));
        assert_eq!(best_of(&with_fitness(&[1.0, 1.0])), Some((0, 1.0)));
        assert_eq!(best_of(&with_fitness(&[4.0])), Some((0, 4.0)));
        assert_eq!(best_of(&[]), None);
    }

    #[test]
    fn init_charges_one_evaluation_per_member() {
        let mut config = RunConfig::new(FunctionId::Rastrigin);
        config.pop_size = 50;
        config.dimension = 4;
        let mut budget = EvalBudget::new(1000);
        let pop = init_population(&config, &mut RngStream::new(9), &mut budget).unwrap();
        assert_eq!(budget.consumed(), 50);
        assert_eq!(pop.len(), 50);
        assert!(pop.is_coherent());
        for m in &pop.members {
            assert_eq!(m.sex, Sex::Unassigned);
            assert_eq!(m.fertility_count, 0);
            assert!(m.genes.iter().all(|&g| (INIT_LOW..INIT_HIGH).contains(&g)));
        }
        let again =
            init_population(&config, &mut RngStream::new(9), &mut EvalBudget::new(1000)).unwrap();
        assert_eq!(pop, again);
    }

    #[test]
    fn init_refuses_short_budget() {
        let mut config = RunConfig::new(FunctionId::Sphere);
        config.pop_size = 10;
        let mut budget = EvalBudget::new(9);
        let err = init_population(&config, &mut RngStream::new(1), &mut budget).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
        assert_eq!(budget.consumed(), 0);
    }

    #[test]
    fn config_validation() {
        let ok = RunConfig::new(FunctionId::Sphere);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.r = 0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.r = c.pop_size + 1;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.pc = 1.5;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.pop_size = 4;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.mu = 1;
        assert!(c.validate().is_err());
        let mut c = ok;
        c.lambda = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn derived_schedule() {
        let mut c = RunConfig::new(FunctionId::Sphere);
        c.pop_size = 100;
        c.r = 10;
        assert_eq!(c.sdm_sweeps(), 10);
        assert_eq!(c.merge_period(), 1000);
        c.r = 100;
        assert_eq!(c.sdm_sweeps(), 1);
        c.pop_size = 75;
        c.r = 7;
        assert_eq!(c.sdm_sweeps(), 10);
        assert_eq!(c.merge_period(), 803);
    }

    #[test]
    fn budget_flags_non_finite_as_infinite() {
        let obj = Objective::new(FunctionId::Sphere, 2).unwrap();
        let mut b = EvalBudget::new(2);
        assert_eq!(b.evaluate(&obj, &[f64::NAN, 0.0]), f64::INFINITY);
        assert!(!b.exhausted());
        assert_eq!(b.evaluate(&obj, &[1.0, 2.0]), 5.0);
        assert!(b.exhausted());
        assert_eq!(b.remaining(), 0);
    }
}
