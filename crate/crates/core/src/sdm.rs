//! Sex determination.
//!
//! `S = max(1, floor(N / R))` sweeps of trial recombination: every member in
//! turn recombines (explorative kind) with `mu - 1` other members and is
//! replaced by its best child when that child is strictly better, earning a
//! fertility point. Members with above-average fertility become female.

use crate::error::Result;
use crate::operators::{recombine, OperatorParams, RecombinationKind};
use crate::population::{EvalBudget, Population, RunConfig, Sex};
use crate::rng::RngStream;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SdmReport {
    /// Sweeps run to completion.
    pub sweeps_completed: usize,
    /// Trial recombinations attempted (one per member per sweep).
    pub trials: u64,
    pub replacements: u64,
    pub offspring_evaluated: u64,
    /// Sexes came from the equal-count fallback rather than the mean test.
    pub fallback_used: bool,
    /// Budget ran out before all sweeps finished.
    pub interrupted: bool,
}

pub fn run_sdm(
    population: &mut Population,
    config: &RunConfig,
    rng: &mut RngStream,
    budget: &mut EvalBudget,
) -> Result<SdmReport> {
    config.validate()?;
    let n = population.len();
    let params = OperatorParams::mlx(config.mu, config.lambda, population.dimension());
    let helpers = config.mu - 1;
    let mut report = SdmReport::default();

    'sweeps: for _ in 0..config.sdm_sweeps() {
        for j in 0..n {
            if budget.exhausted() {
                report.interrupted = true;
                break 'sweeps;
            }
            let picks = rng.sample_distinct(n, helpers, Some(j));
            let children = {
                let males: Vec<&[f64]> = picks.iter().map(|&i| population.genes(i)).collect();
                recombine(
                    RecombinationKind::Mlx,
                    population.genes(j),
                    &males,
                    &params,
                    rng,
                )?
            };
            report.trials += 1;
            let mut best: Option<(Vec<f64>, f64)> = None;
            for child in children {
                let fitness = budget.evaluate(&population.objective, &child);
                report.offspring_evaluated += 1;
                if best.as_ref().is_none_or(|(_, f)| fitness < *f) {
                    best = Some((child, fitness));
                }
            }
            if let Some((genes, fitness)) = best {
                let member = &mut population.members[j];
                if fitness < member.fitness {
                    member.genes = genes;
                    member.fitness = fitness;
                    member.fertility_count += 1;
                    report.replacements += 1;
                }
            }
        }
        report.sweeps_completed += 1;
    }

    report.fallback_used = assign_sexes(population);
    Ok(report)
}

/// Labels members female when their fertility count is strictly above the
/// mean. Returns `true` when no count exceeded the mean and the fallback
/// picked the top `ceil(N / 10)` members by (count desc, fitness asc).
pub fn assign_sexes(population: &mut Population) -> bool {
    let n = population.len();
    if n == 0 {
        return false;
    }
    let total: u64 = population
        .members
        .iter()
        .map(|m| u64::from(m.fertility_count))
        .sum();
    // count > total / n  <=>  count * n > total, kept in integers
    let mut any_female = false;
    for m in population.members.iter_mut() {
        let female = u64::from(m.fertility_count) * n as u64 > total;
        m.sex = if female { Sex::Female } else { Sex::Male };
        any_female |= female;
    }
    if any_female {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (&population.members[a], &population.members[b]);
        mb.fertility_count
            .cmp(&ma.fertility_count)
            .then(ma.fitness.total_cmp(&mb.fitness))
            .then(a.cmp(&b))
    });
    for &i in order.iter().take(n.div_ceil(10)) {
        population.members[i].sex = Sex::Female;
    }
    true
}
