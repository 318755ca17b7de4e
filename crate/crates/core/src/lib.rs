//! Distributed quasi steady-state real-coded genetic algorithm with sex
//! determination, species formation, optional K-means reclustering of the
//! species (GAS3KM) and performance-driven species merging, plus the
//! benchmark functions and experiment harness used to evaluate it.
//!
//! ```
//! use gas3km::{run, FunctionId, RunConfig};
//!
//! let mut config = RunConfig::new(FunctionId::Sphere);
//! config.dimension = 5;
//! config.pop_size = 50;
//! config.seed = 1;
//! let result = run(&config).unwrap();
//! assert!(result.success);
//! ```

pub mod engine;
pub mod error;
pub mod functions;
pub mod harness;
pub mod operators;
pub mod population;
pub mod rng;
pub mod sdm;
pub mod speciation;

pub use engine::{evolve_species_once, run, run_with_observer, Phase, RunObserver, RunResult};
pub use error::{Error, Result};
pub use functions::{evaluate, list_functions, skewed_init, FunctionId, FunctionMeta, Objective};
pub use operators::{mutate, recombine, OperatorParams, RecombinationKind};
pub use population::{
    best_of, init_population, Algorithm, EvalBudget, Individual, Population, RunConfig, Sex,
};
pub use rng::RngStream;
pub use sdm::{run_sdm, SdmReport};
pub use speciation::{
    form_species, kmeans_objective, kmeans_recluster, merge_species, ClusteringReport,
    KmeansOptions, Species,
};
