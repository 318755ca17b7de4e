use super::grid::{CellKey, RunRow};

/// Per-cell aggregate: FES of the best, average and worst run, final
/// fitness of the best, average and worst run, and the success rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub best_run_fes: u64,
    /// Mean FES over all runs, failed runs contributing what they consumed.
    pub afes: f64,
    pub worst_run_fes: u64,
    pub best_fitness: f64,
    pub avg_fitness: f64,
    pub worst_fitness: f64,
    pub success_pct: f64,
}

/// Aggregates rows per cell, in cell order.
pub fn summarize(rows: &[RunRow]) -> Vec<(CellKey, CellStats)> {
    let mut keys: Vec<CellKey> = rows.iter().map(|r| r.key).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|key| {
            let runs: Vec<&RunRow> = rows.iter().filter(|r| r.key == key).collect();
            (key, cell_stats(&runs))
        })
        .collect()
}

fn cell_stats(runs: &[&RunRow]) -> CellStats {
    let count = runs.len() as f64;
    let fes = runs.iter().map(|r| r.result.fes_consumed);
    let fitness = || runs.iter().map(|r| r.result.best_fitness);
    let successes = runs.iter().filter(|r| r.result.success).count();
    CellStats {
        best_run_fes: fes.clone().min().unwrap_or(0),
        afes: fes.clone().map(|v| v as f64).sum::<f64>() / count,
        worst_run_fes: fes.max().unwrap_or(0),
        best_fitness: fitness().fold(f64::INFINITY, f64::min),
        avg_fitness: fitness().sum::<f64>() / count,
        worst_fitness: fitness().fold(f64::NEG_INFINITY, f64::max),
        success_pct: 100.0 * successes as f64 / count,
    }
}
