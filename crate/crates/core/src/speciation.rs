//! Species formation around females, K-means reclustering and merging.
//!
//! A species is one female plus the males nearest to her. The K-means step
//! uses the females as initial centroids, so the number of clusters and
//! their seeds come from sex determination rather than from parameters.
//! Each cluster's mean is taken over its males and the female's genes as
//! they were when the recluster started; the female is then moved onto the
//! converged centroid.

use crate::error::{Error, Result};
use crate::population::{EvalBudget, Population, Sex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub female: usize,
    /// Population indices of the males, ascending.
    pub males: Vec<usize>,
    /// Female replacements since the last merge check.
    pub performance_count: u32,
    pub evolutions: u64,
}

impl Species {
    pub fn new(female: usize) -> Self {
        Self {
            female,
            males: Vec::new(),
            performance_count: 0,
            evolutions: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.males.len() + 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.female).chain(self.males.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmeansOptions {
    /// Stop once no centroid moves by this much (Euclidean).
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for KmeansOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-12,
            max_iters: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringReport {
    pub iterations: usize,
    pub final_objective: f64,
    pub max_centroid_shift_last_iter: f64,
    /// Objective before the first iteration followed by its value after
    /// each iteration.
    pub objective_trace: Vec<f64>,
    pub females_reevaluated: usize,
    /// The budget ran out while re-evaluating moved females. Females that
    /// could not be re-evaluated keep their original genes.
    pub budget_exhausted: bool,
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Position of the centre nearest to `point`; ties go to the lowest position.
fn nearest<'a>(point: &[f64], centres: impl Iterator<Item = &'a [f64]>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centres.enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best.0
}

/// One species per female (ascending female index), each male joining the
/// female nearest to it.
pub fn form_species(population: &Population) -> Result<Vec<Species>> {
    let females = population.females();
    if females.is_empty() {
        return Err(Error::NoFemales);
    }
    let mut species: Vec<Species> = females.iter().map(|&f| Species::new(f)).collect();
    for (i, m) in population.members.iter().enumerate() {
        if m.sex == Sex::Female {
            continue;
        }
        let k = nearest(&m.genes, females.iter().map(|&f| population.genes(f)));
        species[k].males.push(i);
    }
    Ok(species)
}

/// Sum over species of squared distances from each male to its female.
pub fn kmeans_objective(population: &Population, species: &[Species]) -> f64 {
    species
        .iter()
        .map(|s| {
            let female = population.genes(s.female);
            s.males
                .iter()
                .map(|&m| squared_distance(population.genes(m), female))
                .sum::<f64>()
        })
        .sum()
}

/// Lloyd iterations seeded by the current females, then moves every female
/// onto its centroid and re-evaluates it (one evaluation per female).
pub fn kmeans_recluster(
    population: &mut Population,
    species: &mut [Species],
    budget: &mut EvalBudget,
    options: KmeansOptions,
) -> ClusteringReport {
    let dim = population.dimension();
    let anchors: Vec<Vec<f64>> = species
        .iter()
        .map(|s| population.genes(s.female).to_vec())
        .collect();
    let mut centroids = anchors.clone();
    let males: Vec<usize> = {
        let mut all: Vec<usize> = species
            .iter()
            .flat_map(|s| s.males.iter().copied())
            .collect();
        all.sort_unstable();
        all
    };
    let mut assignment: Vec<usize> = {
        let mut owner = vec![0; population.len()];
        for (k, s) in species.iter().enumerate() {
            for &m in &s.males {
                owner[m] = k;
            }
        }
        males.iter().map(|&m| owner[m]).collect()
    };

    let objective = |assignment: &[usize], centroids: &[Vec<f64>], pop: &Population| -> f64 {
        males
            .iter()
            .zip(assignment)
            .map(|(&m, &k)| squared_distance(pop.genes(m), &centroids[k]))
            .sum()
    };

    let mut trace = vec![objective(&assignment, &centroids, population)];
    let mut iterations = 0;
    let mut last_shift = 0.0;
    while iterations < options.max_iters {
        for (slot, &m) in assignment.iter_mut().zip(&males) {
            *slot = nearest(population.genes(m), centroids.iter().map(Vec::as_slice));
        }
        let mut sums = anchors.clone();
        let mut counts = vec![1usize; species.len()];
        for (&m, &k) in males.iter().zip(&assignment) {
            counts[k] += 1;
            for (acc, g) in sums[k].iter_mut().zip(population.genes(m)) {
                *acc += g;
            }
        }
        let mut shift: f64 = 0.0;
        for (k, sum) in sums.iter_mut().enumerate() {
            let count = counts[k] as f64;
            sum.iter_mut().for_each(|v| *v /= count);
            shift = shift.max(squared_distance(sum, &centroids[k]).sqrt());
        }
        centroids = sums;
        iterations += 1;
        last_shift = shift;
        trace.push(objective(&assignment, &centroids, population));
        if shift < options.epsilon || shift == 0.0 {
            break;
        }
    }

    for s in species.iter_mut() {
        s.males.clear();
    }
    for (&m, &k) in males.iter().zip(&assignment) {
        species[k].males.push(m);
    }

    let mut reevaluated = 0;
    let mut exhausted = false;
    for (k, s) in species.iter().enumerate() {
        debug_assert_eq!(centroids[k].len(), dim);
        if budget.exhausted() {
            exhausted = true;
            continue;
        }
        let fitness = budget.evaluate(&population.objective, &centroids[k]);
        let female = &mut population.members[s.female];
        female.genes.clone_from(&centroids[k]);
        female.fitness = fitness;
        reevaluated += 1;
    }

    ClusteringReport {
        iterations,
        final_objective: *trace.last().unwrap_or(&0.0),
        max_centroid_shift_last_iter: last_shift,
        objective_trace: trace,
        females_reevaluated: reevaluated,
        budget_exhausted: exhausted,
    }
}

/// Folds every species whose performance count is strictly below the mean
/// into the at-or-above-mean species with the nearest female. The absorbed
/// female and her males become males of the absorber. Performance counts
/// are reset afterwards. Returns the positions (in the input order) of the
/// absorbed species.
pub fn merge_species(species: &mut Vec<Species>, population: &Population) -> Vec<usize> {
    if species.len() <= 1 {
        return Vec::new();
    }
    let len = species.len() as u64;
    let total: u64 = species.iter().map(|s| u64::from(s.performance_count)).sum();
    let below: Vec<bool> = species
        .iter()
        .map(|s| u64::from(s.performance_count) * len < total)
        .collect();
    let absorbed: Vec<usize> = (0..species.len()).filter(|&k| below[k]).collect();

    for &b in &absorbed {
        let female = population.genes(species[b].female);
        let target = (0..species.len())
            .filter(|&t| !below[t])
            .map(|t| {
                (
                    t,
                    squared_distance(female, population.genes(species[t].female)),
                )
            })
            .fold(None, |best: Option<(usize, f64)>, (t, d)| match best {
                Some((_, bd)) if d >= bd => best,
                _ => Some((t, d)),
            })
            .map(|(t, _)| t)
            .expect("an at-or-above-mean species always exists");
        let moved: Vec<usize> = species[b].members().collect();
        species[target].males.extend(moved);
    }

    let mut k = 0;
    species.retain(|_| {
        let keep = !below[k];
        k += 1;
        keep
    });
    for s in species.iter_mut() {
        s.males.sort_unstable();
        s.performance_count = 0;
    }
    absorbed
}

/// True when the species cover `0..n` exactly once with one female each.
pub fn is_partition(species: &[Species], n: usize) -> bool {
    let mut seen = vec![false; n];
    for s in species {
        for i in s.members() {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|v| v)
}

/// Sex labels must agree with species roles after merging: absorbed
/// females become males.
pub fn sync_sexes(population: &mut Population, species: &[Species]) {
    for s in species {
        population.members[s.female].sex = Sex::Female;
        for &m in &s.males {
            population.members[m].sex = Sex::Male;
        }
    }
}
