use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::engine::{run, RunResult};
use crate::error::{Error, Result};
use crate::functions::{FunctionId, DEFAULT_DIMENSION};
use crate::population::{Algorithm, RunConfig};
use crate::rng::derive_seed;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GAS3KM_THREADS";

/// Identifies one cell of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    pub dimension: usize,
    pub pop_size: usize,
    pub pc: f64,
    pub r: usize,
}

impl Eq for CellKey {}

impl Ord for CellKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.function
            .cmp(&other.function)
            .then(self.algorithm.cmp(&other.algorithm))
            .then(self.dimension.cmp(&other.dimension))
            .then(self.pop_size.cmp(&other.pop_size))
            .then(self.pc.total_cmp(&other.pc))
            .then(self.r.cmp(&other.r))
    }
}

impl PartialOrd for CellKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/n={}/N={}/pc={}/R={}",
            self.function, self.algorithm, self.dimension, self.pop_size, self.pc, self.r
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub functions: Vec<FunctionId>,
    pub dims: Vec<usize>,
    pub pop_sizes: Vec<usize>,
    pub pcs: Vec<f64>,
    pub rs: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub runs_per_cell: usize,
    pub base_seed: u64,
    pub max_fes: u64,
    pub target: f64,
    pub mu: usize,
    pub lambda: usize,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        let base = RunConfig::new(FunctionId::Sphere);
        Self {
            functions: vec![FunctionId::Sphere],
            dims: vec![DEFAULT_DIMENSION],
            pop_sizes: vec![base.pop_size],
            pcs: vec![base.pc],
            rs: vec![base.r],
            algorithms: Algorithm::ALL.to_vec(),
            runs_per_cell: 50,
            base_seed: 0,
            max_fes: base.max_fes,
            target: base.target,
            mu: base.mu,
            lambda: base.lambda,
        }
    }
}

impl ExperimentGrid {
    /// Every cell in output order.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut cells = Vec::new();
        for &function in &self.functions {
            for &algorithm in &self.algorithms {
                for &dimension in &self.dims {
                    for &pop_size in &self.pop_sizes {
                        for &pc in &self.pcs {
                            for &r in &self.rs {
                                cells.push(CellKey {
                                    function,
                                    algorithm,
                                    dimension,
                                    pop_size,
                                    pc,
                                    r,
                                });
                            }
                        }
                    }
                }
            }
        }
        cells.sort();
        cells.dedup();
        cells
    }

    pub fn config_for(&self, key: &CellKey, run: usize) -> RunConfig {
        RunConfig {
            function: key.function,
            dimension: key.dimension,
            pop_size: key.pop_size,
            pc: key.pc,
            r: key.r,
            mu: self.mu,
            lambda: self.lambda,
            max_fes: self.max_fes,
            target: self.target,
            seed: run_seed(self.base_seed, key, run),
            algorithm: key.algorithm,
        }
    }
}

/// Seed of run `run` in cell `key`; independent of the rest of the grid.
pub fn run_seed(base_seed: u64, key: &CellKey, run: usize) -> u64 {
    derive_seed(base_seed, &key.to_string(), run as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub key: CellKey,
    pub run: usize,
    pub seed: u64,
    pub result: RunResult,
}

/// Worker count from `GAS3KM_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

pub fn run_experiment(grid: &ExperimentGrid) -> Result<Vec<RunRow>> {
    run_experiment_with(grid, threads_from_env(), run)
}

/// Runs every `(cell, run)` pair through `runner`, in parallel on at most
/// `threads` workers. Rows come back in cell order then run order no
/// matter how the work was scheduled. Cells whose configuration is invalid
/// are skipped with a warning.
pub fn run_experiment_with<F>(
    grid: &ExperimentGrid,
    threads: Option<usize>,
    runner: F,
) -> Result<Vec<RunRow>>
where
    F: Fn(&RunConfig) -> Result<RunResult> + Sync,
{
    let mut jobs = Vec::new();
    for key in grid.cells() {
        let probe = grid.config_for(&key, 0);
        if let Err(e) = probe.validate() {
            log::warn!("skipping cell {key}: {e}");
            continue;
        }
        for run in 0..grid.runs_per_cell {
            jobs.push((key, run, grid.config_for(&key, run)));
        }
    }

    let work = || {
        jobs.par_iter()
            .map(|(key, run, config)| {
                runner(config).map(|result| RunRow {
                    key: *key,
                    run: *run,
                    seed: config.seed,
                    result,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> ExperimentGrid {
        ExperimentGrid {
            functions: vec![FunctionId::Sphere],
            dims: vec![3],
            pop_sizes: vec![20],
            pcs: vec![0.5],
            rs: vec![4],
            algorithms: vec![Algorithm::Gas3km],
            runs_per_cell: 3,
            base_seed: 5,
            max_fes: 2_000,
            ..ExperimentGrid::default()
        }
    }

    #[test]
    fn one_row_per_run() {
        let rows = run_experiment_with(&small_grid(), Some(2), run).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows.iter().map(|r| r.run).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn rerun_is_identical() {
        let a = run_experiment_with(&small_grid(), Some(3), run).unwrap();
        let b = run_experiment_with(&small_grid(), Some(1), run).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cell_results_do_not_depend_on_grid_composition() {
        let alone = run_experiment_with(&small_grid(), None, run).unwrap();
        let mut bigger = small_grid();
        bigger.functions.push(FunctionId::Ackley);
        bigger.rs.push(2);
        bigger.algorithms.insert(0, Algorithm::Gas3);
        let all = run_experiment_with(&bigger, None, run).unwrap();
        let key = alone[0].key;
        let same: Vec<RunRow> = all.into_iter().filter(|r| r.key == key).collect();
        assert_eq!(alone, same);
    }

    #[test]
    fn table_sized_grid_has_fifty_cells_per_function_and_algorithm() {
        let grid = ExperimentGrid {
            pop_sizes: vec![50, 75, 100, 150, 200],
            rs: (1..=10).collect(),
            algorithms: vec![Algorithm::Gas3km],
            ..ExperimentGrid::default()
        };
        assert_eq!(grid.cells().len(), 50);
    }

    #[test]
    fn invalid_cells_are_skipped() {
        let mut grid = small_grid();
        grid.rs = vec![4, 50];
        let rows = run_experiment_with(&grid, None, run).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.key.r == 4));
    }

    #[test]
    fn cell_order_is_function_algorithm_then_parameters() {
        let grid = ExperimentGrid {
            functions: vec![FunctionId::Ackley, FunctionId::Sphere],
            rs: vec![3, 1],
            ..ExperimentGrid::default()
        };
        let cells = grid.cells();
        assert_eq!(cells[0].function, FunctionId::Sphere);
        assert_eq!(cells[0].algorithm, Algorithm::Gas3);
        assert_eq!(cells[0].r, 1);
        assert_eq!(cells[1].r, 3);
        assert_eq!(cells.last().unwrap().function, FunctionId::Ackley);
    }
}
