//! Plain-text grid configuration.
//!
//! ```text
//! # comment
//! runs = 20
//! algorithm = gas3, gas3km
//!
//! [multimodal]
//! function = rastrigin, ackley
//! r = 1..10
//! ```
//!
//! Keys mirror the CLI flag names. Keys before the first `[section]` are
//! defaults shared by every section; a file without sections describes a
//! single grid named `grid`. Integer lists accept inclusive `a..b` ranges.

use std::path::Path;
use std::str::FromStr;

use super::grid::ExperimentGrid;
use crate::error::{Error, Result};

/// Bundled configuration comparing both algorithms across functions,
/// population sizes and values of R.
pub const PAPER_TABLES: &str = include_str!("../../configs/paper_tables.conf");

pub const KEYS: [&str; 12] = [
    "function",
    "dim",
    "pop-size",
    "pc",
    "r",
    "algorithm",
    "runs",
    "seed",
    "max-fes",
    "target",
    "mu",
    "lambda",
];

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| Error::Parse(format!("{key}: bad value `{s}`: {e}")))
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Parse(format!("{key}: empty list")));
    }
    Ok(items)
}

fn int_list(key: &str, value: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (usize, usize) = (scalar(key, a)?, scalar(key, b)?);
            if a > b {
                return Err(Error::Parse(format!("{key}: empty range `{part}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(scalar(key, part)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("{key}: empty list")));
    }
    Ok(out)
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: bad value `{}`", value.trim())))
}

/// Sets one key on `grid`.
pub fn apply_key(grid: &mut ExperimentGrid, key: &str, value: &str) -> Result<()> {
    match key {
        "function" => grid.functions = list(key, value)?,
        "dim" => grid.dims = int_list(key, value)?,
        "pop-size" => grid.pop_sizes = int_list(key, value)?,
        "pc" => grid.pcs = list(key, value)?,
        "r" => grid.rs = int_list(key, value)?,
        "algorithm" => grid.algorithms = list(key, value)?,
        "runs" => grid.runs_per_cell = scalar(key, value)?,
        "seed" => grid.base_seed = scalar(key, value)?,
        "max-fes" => grid.max_fes = scalar(key, value)?,
        "target" => grid.target = scalar(key, value)?,
        "mu" => grid.mu = scalar(key, value)?,
        "lambda" => grid.lambda = scalar(key, value)?,
        _ => {
            return Err(Error::Parse(format!(
                "unknown key `{key}` (expected one of {})",
                KEYS.join(", ")
            )))
        }
    }
    Ok(())
}

/// Parses a configuration into named grids, in file order.
pub fn parse_grid_config(text: &str) -> Result<Vec<(String, ExperimentGrid)>> {
    let mut defaults: Vec<(String, String)> = Vec::new();
    let mut sections: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Parse(format!("line {}: empty section name", i + 1)));
            }
            sections.push((name.to_string(), Vec::new()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", i + 1)))?;
        let entry = (key.trim().to_string(), value.trim().to_string());
        match sections.last_mut() {
            Some((_, entries)) => entries.push(entry),
            None => defaults.push(entry),
        }
    }
    if sections.is_empty() {
        sections.push(("grid".to_string(), Vec::new()));
    }
    sections
        .into_iter()
        .map(|(name, entries)| {
            let mut grid = ExperimentGrid::default();
            for (k, v) in defaults.iter().chain(&entries) {
                apply_key(&mut grid, k, v).map_err(|e| Error::Parse(format!("[{name}] {e}")))?;
            }
            if grid.runs_per_cell == 0 {
                return Err(Error::Parse(format!("[{name}] runs must be positive")));
            }
            Ok((name, grid))
        })
        .collect()
}

pub fn load_grid_config(path: &Path) -> Result<Vec<(String, ExperimentGrid)>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_grid_config(&text)
}

/// Looks up a bundled configuration by name.
pub fn preset(name: &str) -> Option<&'static str> {
    match name {
        "paper_tables" => Some(PAPER_TABLES),
        _ => None,
    }
}
