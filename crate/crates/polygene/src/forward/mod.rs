//! The discrete N-individual, L-locus Wright-Fisher forward simulator on
//! packed bitset genomes: fitness-proportional reproduction, crossover-mask
//! recombination at probability `rho/N`, per-locus mutation, and the
//! statistics pipeline (allele frequencies, trait moments, sampled LD and
//! LE-deviation diagnostics).

mod config;
mod population;
mod run;
mod stats;
mod step;

pub use config::{InitialCondition, SimConfig, StatOptions};
pub use population::PopulationState;
pub use run::{run_simulation, run_simulation_with_rng, GenerationRecord, TrajectoryRecord};
pub use stats::{all_pairs, population_stats, sample_stat_sets, SampledSets, StatBundle};
pub use step::step_generation;
