//! Command-line front end: single runs, experiment grids, plots and the
//! function catalog.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gas3km::harness::config::apply_key;
use gas3km::harness::grid::threads_from_env;
use gas3km::harness::{
    emit_svg_plot, load_grid_config, parse_grid_config, preset, read_summary_csv,
    run_experiment_with, summarize, write_raw_csv, write_summary_csv, ExperimentGrid, XAxis,
};
use gas3km::{list_functions, run, Algorithm, Error, FunctionId, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "gas3km",
    version,
    about = "GAS3 / GAS3KM real-coded genetic algorithm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the optimiser once and print fes, best_fitness and success.
    Run(RunArgs),
    /// Run an experiment grid and write raw and summary CSV files.
    Grid(Box<GridArgs>),
    /// Plot AFES from a summary CSV as an SVG line chart.
    Plot(PlotArgs),
    /// List the benchmark functions.
    ListFunctions,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    function: FunctionId,
    #[arg(long, default_value_t = 20)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    pop_size: usize,
    #[arg(long, default_value_t = 0.5)]
    pc: f64,
    #[arg(long, default_value_t = 5)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_fes: u64,
    #[arg(long, default_value_t = 1e-10)]
    target: f64,
    #[arg(long, default_value_t = 5)]
    mu: usize,
    #[arg(long, default_value_t = 2)]
    lambda: usize,
    #[arg(long, default_value = "gas3km")]
    algorithm: Algorithm,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Grid configuration file (`key = value` lines, optional `[section]`s).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled configuration, e.g. `paper_tables`.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Worker threads (defaults to GAS3KM_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated function ids.
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    pop_size: Option<String>,
    #[arg(long)]
    pc: Option<String>,
    /// Comma-separated values; `a..b` ranges are inclusive.
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    max_fes: Option<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
}

impl GridArgs {
    fn inline(&self) -> [(&'static str, Option<&String>); 12] {
        [
            ("function", self.function.as_ref()),
            ("dim", self.dim.as_ref()),
            ("pop-size", self.pop_size.as_ref()),
            ("pc", self.pc.as_ref()),
            ("r", self.r.as_ref()),
            ("algorithm", self.algorithm.as_ref()),
            ("runs", self.runs.as_ref()),
            ("seed", self.seed.as_ref()),
            ("max-fes", self.max_fes.as_ref()),
            ("target", self.target.as_ref()),
            ("mu", self.mu.as_ref()),
            ("lambda", self.lambda.as_ref()),
        ]
    }

    /// Named grids from the config or preset, with inline flags applied on
    /// top of every section.
    fn grids(&self) -> gas3km::Result<Vec<(String, ExperimentGrid)>> {
        let mut grids = match (&self.config, &self.preset) {
            (Some(path), _) => load_grid_config(path)?,
            (None, Some(name)) => {
                let text =
                    preset(name).ok_or_else(|| Error::Parse(format!("unknown preset `{name}`")))?;
                parse_grid_config(text)?
            }
            (None, None) => vec![("grid".to_string(), ExperimentGrid::default())],
        };
        for (_, grid) in &mut grids {
            for (key, value) in self.inline() {
                if let Some(value) = value {
                    apply_key(grid, key, value)?;
                }
            }
            if grid.runs_per_cell == 0 {
                return Err(Error::Parse("runs must be positive".into()));
            }
        }
        Ok(grids)
    }
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    summary: PathBuf,
    #[arg(long, default_value = "r")]
    x: XAxis,
    #[arg(long)]
    out: PathBuf,
    /// Only plot cells of this function.
    #[arg(long)]
    function: Option<FunctionId>,
}

/// Exit code for errors in what the user asked for, as opposed to failures
/// while doing it.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownFunction(_)
        | Error::UnknownAlgorithm(_)
        | Error::InvalidConfig(_)
        | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn stdout_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn execute(command: Command, out: &mut dyn Write) -> gas3km::Result<()> {
    match command {
        Command::Run(a) => {
            let config = RunConfig {
                function: a.function,
                dimension: a.dim,
                pop_size: a.pop_size,
                pc: a.pc,
                r: a.r,
                mu: a.mu,
                lambda: a.lambda,
                max_fes: a.max_fes,
                target: a.target,
                seed: a.seed,
                algorithm: a.algorithm,
            };
            let result = run(&config)?;
            writeln!(out, "fes: {}", result.fes_consumed).map_err(stdout_err)?;
            writeln!(out, "best_fitness: {:e}", result.best_fitness).map_err(stdout_err)?;
            writeln!(out, "success: {}", result.success).map_err(stdout_err)?;
        }
        Command::Grid(a) => {
            let grids = a.grids()?;
            std::fs::create_dir_all(&a.out_dir).map_err(io_err(&a.out_dir))?;
            let threads = a.threads.or_else(threads_from_env);
            for (name, grid) in &grids {
                log::info!(
                    "grid `{name}`: {} cells x {} runs",
                    grid.cells().len(),
                    grid.runs_per_cell
                );
                let rows = run_experiment_with(grid, threads, run)?;
                let raw = a.out_dir.join(format!("{name}_raw.csv"));
                let summary = a.out_dir.join(format!("{name}_summary.csv"));
                write_raw_csv(&rows, &raw)?;
                write_summary_csv(&summarize(&rows), &summary)?;
                writeln!(out, "{}", raw.display()).map_err(stdout_err)?;
                writeln!(out, "{}", summary.display()).map_err(stdout_err)?;
            }
        }
        Command::Plot(a) => {
            let mut stats = read_summary_csv(&a.summary)?;
            if let Some(f) = a.function {
                stats.retain(|(k, _)| k.function == f);
            }
            if stats.is_empty() {
                return Err(Error::InvalidConfig("no cells to plot".into()));
            }
            emit_svg_plot(&stats, a.x, &a.out)?;
            writeln!(out, "{}", a.out.display()).map_err(stdout_err)?;
        }
        Command::ListFunctions => {
            for meta in list_functions() {
                writeln!(
                    out,
                    "{}\t{}\t{}\tf* = {}",
                    meta.id,
                    if meta.multimodal {
                        "multimodal"
                    } else {
                        "unimodal"
                    },
                    if meta.separable {
                        "separable"
                    } else {
                        "non-separable"
                    },
                    meta.global_minimum_value
                )
                .map_err(stdout_err)?;
            }
        }
    }
    Ok(())
}
