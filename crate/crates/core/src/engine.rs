//! Top-level GAS3 / GAS3KM loop.
//!
//! A run initialises the population, determines sexes, forms species (and
//! for GAS3KM reclusters them once with K-means), then evolves species in
//! round-robin order. Every `floor(N * N / R)` evolutions the species are
//! examined and under-performers are merged away. The run stops when the
//! evaluation budget is spent or the best fitness reaches the target.

use crate::error::{Error, Result};
use crate::operators::{mutate, recombine, OperatorParams, RecombinationKind};
use crate::population::{init_population, Algorithm, EvalBudget, Population, RunConfig};
use crate::rng::RngStream;
use crate::sdm::{run_sdm, SdmReport};
use crate::speciation::{
    form_species, kmeans_recluster, merge_species, sync_sexes, ClusteringReport, KmeansOptions,
    Species,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub fes_consumed: u64,
    pub best_fitness: f64,
    pub success: bool,
    pub best_genes: Vec<f64>,
    /// `(fes, best_fitness)` recorded after initialisation and at every
    /// improvement of the best-ever fitness.
    pub history: Vec<(u64, f64)>,
}

/// Checkpoints in a run, reported to a [`RunObserver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initialized,
    SexesAssigned,
    SpeciesFormed,
    Reclustered,
    Finished,
}

/// Hooks for inspecting a run as it progresses. All methods default to no-ops.
pub trait RunObserver {
    fn on_phase(
        &mut self,
        _phase: Phase,
        _population: &Population,
        _species: &[Species],
        _budget: &EvalBudget,
    ) {
    }
    fn on_sdm(&mut self, _report: &SdmReport) {}
    fn on_recluster(&mut self, _report: &ClusteringReport) {}
    /// Called after every evolution with the running total and the best
    /// fitness currently in the population.
    fn on_evolution(
        &mut self,
        _total_evolutions: u64,
        _population: &Population,
        _budget: &EvalBudget,
    ) {
    }
    fn on_merge(&mut self, _total_evolutions: u64, _before: usize, _after: &[Species]) {}
    /// Called when a round-robin pass over all live species completes.
    fn on_sweep(&mut self, _sweeps: u64, _species: &[Species]) {}
}

impl RunObserver for () {}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOutcome {
    pub used_recombination: bool,
    pub female_replaced: bool,
    pub males_replaced: usize,
    /// Best child of the batch and its fitness.
    pub best_offspring: (Vec<f64>, f64),
}

/// One pass of the selection, generation, replacement and update plans on a
/// single species.
pub fn evolve_species_once(
    species: &mut Species,
    population: &mut Population,
    config: &RunConfig,
    rng: &mut RngStream,
    budget: &mut EvalBudget,
) -> Result<EvolutionOutcome> {
    let dim = population.dimension();

    // Selection plan: the female plus up to mu - 1 distinct males.
    let take = (config.mu - 1).min(species.males.len());
    let selected: Vec<usize> = rng
        .sample_distinct(species.males.len(), take, None)
        .into_iter()
        .map(|k| species.males[k])
        .collect();

    // Generation plan: recombination with probability pc, else mutation.
    let wants_recombination = rng.bernoulli(config.pc);
    let used_recombination = wants_recombination && !selected.is_empty();
    let params = OperatorParams::mpx(config.mu, config.lambda, dim);
    let children = if used_recombination {
        let males: Vec<&[f64]> = selected.iter().map(|&m| population.genes(m)).collect();
        recombine(
            RecombinationKind::Mpx,
            population.genes(species.female),
            &males,
            &params,
            rng,
        )?
    } else {
        let female = population.genes(species.female).to_vec();
        (0..config.lambda)
            .map(|_| mutate(&female, &params, rng))
            .collect::<Result<Vec<_>>>()?
    };
    let mut offspring: Vec<(Vec<f64>, f64)> = children
        .into_iter()
        .map(|genes| {
            let fitness = budget.evaluate(&population.objective, &genes);
            (genes, fitness)
        })
        .collect();

    // Replacement plan: offspring ranked best first (stable, so ties keep
    // generation order).
    offspring.sort_by(|a, b| a.1.total_cmp(&b.1));
    let best_offspring = offspring[0].clone();

    // Update plan.
    let mut female_replaced = false;
    let mut rest = offspring.into_iter().peekable();
    if let Some((_, fitness)) = rest.peek() {
        if *fitness < population.members[species.female].fitness {
            let (genes, fitness) = rest.next().expect("peeked");
            let female = &mut population.members[species.female];
            female.genes = genes;
            female.fitness = fitness;
            species.performance_count += 1;
            female_replaced = true;
        }
    }
    // Males are only challenged when the female kept her place.
    let mut males_replaced = 0;
    for (genes, fitness) in rest.filter(|_| !female_replaced) {
        let worst = selected
            .iter()
            .copied()
            .fold(None, |acc: Option<usize>, m| match acc {
                Some(w) if population.members[w].fitness >= population.members[m].fitness => acc,
                _ => Some(m),
            });
        if let Some(w) = worst {
            let male = &mut population.members[w];
            if fitness < male.fitness {
                male.genes = genes;
                male.fitness = fitness;
                males_replaced += 1;
            }
        }
    }

    species.evolutions += 1;
    Ok(EvolutionOutcome {
        used_recombination,
        female_replaced,
        males_replaced,
        best_offspring,
    })
}

struct Incumbent {
    genes: Vec<f64>,
    fitness: f64,
    history: Vec<(u64, f64)>,
}

impl Incumbent {
    fn offer(&mut self, genes: &[f64], fitness: f64, fes: u64) {
        if fitness < self.fitness {
            self.genes = genes.to_vec();
            self.fitness = fitness;
            self.history.push((fes, fitness));
        }
    }

    fn offer_population(&mut self, population: &Population, fes: u64) {
        if let Some((i, f)) = population.best_of() {
            self.offer(population.genes(i), f, fes);
        }
    }

    fn finish(self, config: &RunConfig, budget: &EvalBudget) -> RunResult {
        RunResult {
            fes_consumed: budget.consumed(),
            best_fitness: self.fitness,
            success: self.fitness <= config.target,
            best_genes: self.genes,
            history: self.history,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<RunResult> {
    run_with_observer(config, &mut ())
}

pub fn run_with_observer(config: &RunConfig, observer: &mut dyn RunObserver) -> Result<RunResult> {
    config.validate()?;
    let mut rng = RngStream::new(config.seed);
    let mut budget = EvalBudget::new(config.max_fes);
    let mut best = Incumbent {
        genes: Vec::new(),
        fitness: f64::INFINITY,
        history: Vec::new(),
    };

    let mut population = match init_population(config, &mut rng, &mut budget) {
        Ok(p) => p,
        Err(Error::BudgetExhausted { .. }) => return Ok(best.finish(config, &budget)),
        Err(e) => return Err(e),
    };
    best.offer_population(&population, budget.consumed());
    observer.on_phase(Phase::Initialized, &population, &[], &budget);
    let done =
        |best: &Incumbent, budget: &EvalBudget| budget.exhausted() || best.fitness <= config.target;
    if done(&best, &budget) {
        observer.on_phase(Phase::Finished, &population, &[], &budget);
        return Ok(best.finish(config, &budget));
    }

    let sdm = run_sdm(&mut population, config, &mut rng, &mut budget)?;
    observer.on_sdm(&sdm);
    best.offer_population(&population, budget.consumed());
    observer.on_phase(Phase::SexesAssigned, &population, &[], &budget);

    let mut species = form_species(&population)?;
    observer.on_phase(Phase::SpeciesFormed, &population, &species, &budget);

    if config.algorithm == Algorithm::Gas3km && !done(&best, &budget) {
        let report = kmeans_recluster(
            &mut population,
            &mut species,
            &mut budget,
            KmeansOptions::default(),
        );
        observer.on_recluster(&report);
        best.offer_population(&population, budget.consumed());
        observer.on_phase(Phase::Reclustered, &population, &species, &budget);
    }

    let period = config.merge_period();
    let mut total: u64 = 0;
    let mut sweeps: u64 = 0;
    let mut cursor = 0;
    while !done(&best, &budget) {
        let outcome = evolve_species_once(
            &mut species[cursor],
            &mut population,
            config,
            &mut rng,
            &mut budget,
        )?;
        best.offer(
            &outcome.best_offspring.0,
            outcome.best_offspring.1,
            budget.consumed(),
        );
        total += 1;
        cursor += 1;
        observer.on_evolution(total, &population, &budget);

        if total.is_multiple_of(period) {
            let before = species.len();
            let absorbed = merge_species(&mut species, &population);
            sync_sexes(&mut population, &species);
            cursor -= absorbed.iter().filter(|&&p| p < cursor).count();
            observer.on_merge(total, before, &species);
        }
        if cursor >= species.len() {
            cursor = 0;
            sweeps += 1;
            observer.on_sweep(sweeps, &species);
        }
    }

    observer.on_phase(Phase::Finished, &population, &species, &budget);
    Ok(best.finish(config, &budget))
}
