//! CSV emitters for raw runs and per-cell summaries.
//!
//! Reals are written in Rust's shortest round-trip form (`{}` for counts
//! and FES averages, `{:e}` for fitness values), so parsing a file back
//! recovers the exact in-memory values. Success percentages carry two
//! decimals.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::grid::{CellKey, RunRow};
use super::stats::CellStats;
use crate::error::{Error, Result};

pub const RAW_HEADER: [&str; 11] = [
    "function",
    "algorithm",
    "dim",
    "N",
    "pc",
    "R",
    "run",
    "seed",
    "fes",
    "best_fitness",
    "success",
];

pub const SUMMARY_HEADER: [&str; 13] = [
    "function",
    "algorithm",
    "dim",
    "N",
    "pc",
    "R",
    "best_run_fes",
    "afes",
    "worst_run_fes",
    "best",
    "avg",
    "worst",
    "success_pct",
];

fn key_fields(key: &CellKey) -> [String; 6] {
    [
        key.function.to_string(),
        key.algorithm.to_string(),
        key.dimension.to_string(),
        key.pop_size.to_string(),
        key.pc.to_string(),
        key.r.to_string(),
    ]
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_raw_to<W: Write>(rows: &[RunRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RAW_HEADER)?;
    for row in rows {
        let mut record = key_fields(&row.key).to_vec();
        record.extend([
            row.run.to_string(),
            row.seed.to_string(),
            row.result.fes_consumed.to_string(),
            format!("{:e}", row.result.best_fitness),
            u8::from(row.result.success).to_string(),
        ]);
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_summary_to<W: Write>(stats: &[(CellKey, CellStats)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for (key, s) in stats {
        let mut record = key_fields(key).to_vec();
        record.extend([
            s.best_run_fes.to_string(),
            s.afes.to_string(),
            s.worst_run_fes.to_string(),
            format!("{:e}", s.best_fitness),
            format!("{:e}", s.avg_fitness),
            format!("{:e}", s.worst_fitness),
            format!("{:.2}", s.success_pct),
        ]);
        w.write_record(&record)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_raw_csv(rows: &[RunRow], path: &Path) -> Result<()> {
    write_raw_to(rows, create(path)?)
}

pub fn write_summary_csv(stats: &[(CellKey, CellStats)], path: &Path) -> Result<()> {
    write_summary_to(stats, create(path)?)
}

fn field(record: &csv::StringRecord, i: usize, line: usize) -> Result<&str> {
    record
        .get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column {}", SUMMARY_HEADER[i])))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad {what} `{s}`")))
}

pub fn read_summary_from<R: std::io::Read>(input: R) -> Result<Vec<(CellKey, CellStats)>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != SUMMARY_HEADER {
        return Err(Error::Parse(format!(
            "unexpected summary header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let f = |k| field(&record, k, line);
        let key = CellKey {
            function: f(0)?.parse()?,
            algorithm: f(1)?.parse()?,
            dimension: parse(f(2)?, "dim", line)?,
            pop_size: parse(f(3)?, "N", line)?,
            pc: parse(f(4)?, "pc", line)?,
            r: parse(f(5)?, "R", line)?,
        };
        let stats = CellStats {
            best_run_fes: parse(f(6)?, "best_run_fes", line)?,
            afes: parse(f(7)?, "afes", line)?,
            worst_run_fes: parse(f(8)?, "worst_run_fes", line)?,
            best_fitness: parse(f(9)?, "best", line)?,
            avg_fitness: parse(f(10)?, "avg", line)?,
            worst_fitness: parse(f(11)?, "worst", line)?,
            success_pct: parse(f(12)?, "success_pct", line)?,
        };
        out.push((key, stats));
    }
    Ok(out)
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<(CellKey, CellStats)>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_summary_from(file)
}
