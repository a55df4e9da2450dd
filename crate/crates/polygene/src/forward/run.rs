use rand::Rng;

use crate::error::Result;
use crate::params::FitnessSpec;
use crate::rng::root_rng;

use super::config::{InitialCondition, SimConfig};
use super::population::PopulationState;
use super::stats::{population_stats, sample_stat_sets, SampledSets, StatBundle};
use super::step::{step_with_buffers, StepBuffers};

#[derive(Debug, Clone)]
pub struct GenerationRecord {
    pub generation: u64,
    /// Diffusion time `generation / n`.
    pub time: f64,
    pub stats: StatBundle,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub records: Vec<GenerationRecord>,
    /// The locus pairs/triples the diagnostics were sampled on.
    pub sampled: SampledSets,
    pub seed: u64,
}

impl TrajectoryRecord {
    pub fn terminal(&self) -> &GenerationRecord {
        self.records.last().expect("at least one record")
    }
}

fn initial_state(cfg: &SimConfig, rng: &mut impl Rng) -> Result<PopulationState> {
    match &cfg.init {
        InitialCondition::AllPlus => PopulationState::monomorphic(cfg.n, cfg.loci, true),
        InitialCondition::AllMinus => PopulationState::monomorphic(cfg.n, cfg.loci, false),
        InitialCondition::ExplicitFrequencies(freqs) => {
            PopulationState::from_frequencies(cfg.n, freqs, rng)
        }
        InitialCondition::NeutralEquilibrium => {
            // Start from the mutational law and burn the neutral chain in
            // for 10 N generations (selection off, everything else as
            // configured).
            let p = cfg.mutation.plus_fraction()?;
            let mut state =
                PopulationState::from_frequencies(cfg.n, &vec![p; cfg.loci], rng)?;
            let mut neutral_cfg = cfg.clone();
            neutral_cfg.fitness = FitnessSpec::neutral();
            let mut buffers = StepBuffers::new(&state);
            for _ in 0..10 * cfg.n {
                step_with_buffers(&mut state, &neutral_cfg, rng, &mut buffers)?;
            }
            state.set_generation(0);
            Ok(state)
        }
    }
}

/// Run the configured simulation, recording statistics at the stride (the
/// initial and final generations are always recorded). Deterministic in
/// `(config, seed)`.
pub fn run_simulation(cfg: &SimConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let mut rng = root_rng(cfg.seed);
    run_simulation_with_rng(cfg, &mut rng)
}

/// As [`run_simulation`] but on a caller-managed stream (replicates).
pub fn run_simulation_with_rng(cfg: &SimConfig, rng: &mut impl Rng) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let sampled = sample_stat_sets(cfg.loci, cfg.stats.ld_pairs, cfg.stats.le_triples, rng);
    let mut state = initial_state(cfg, rng)?;
    let mut buffers = StepBuffers::new(&state);

    let mut records = Vec::with_capacity(cfg.generations / cfg.record_stride + 2);
    let record = |state: &PopulationState, records: &mut Vec<GenerationRecord>| {
        records.push(GenerationRecord {
            generation: state.generation(),
            time: cfg.time_of(state.generation()),
            stats: population_stats(state, &sampled, cfg.stats.histogram_bins),
        });
    };

    record(&state, &mut records);
    for gen in 1..=cfg.generations {
        step_with_buffers(&mut state, cfg, rng, &mut buffers)?;
        if gen % cfg.record_stride == 0 || gen == cfg.generations {
            record(&state, &mut records);
        }
    }

    Ok(TrajectoryRecord {
        records,
        sampled,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::config::StatOptions;
    use crate::params::MutationRates;
    use crate::recomb::RecombinationModel;

    fn config() -> SimConfig {
        SimConfig {
            n: 60,
            loci: 24,
            generations: 30,
            fitness: FitnessSpec::Quadratic {
                kappa: 5.0,
                z_star: 0.0,
            },
            mutation: MutationRates::new(1.1, 3.3).unwrap(),
            recomb: RecombinationModel::single_uniform(24).unwrap(),
            rho: 60.0,
            init: InitialCondition::NeutralEquilibrium,
            seed: 77,
            record_stride: 10,
            stats: StatOptions {
                histogram_bins: 10,
                ld_pairs: 30,
                le_triples: 10,
            },
        }
    }

    #[test]
    fn deterministic_replay() {
        let cfg = config();
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.generation, rb.generation);
            assert_eq!(ra.stats.freqs, rb.stats.freqs);
            assert_eq!(ra.stats.trait_var, rb.stats.trait_var);
            assert_eq!(ra.stats.ld, rb.stats.ld);
        }
        // A different seed gives a different trajectory.
        let mut cfg2 = config();
        cfg2.seed = 78;
        let c = run_simulation(&cfg2).unwrap();
        assert_ne!(
            a.terminal().stats.freqs,
            c.terminal().stats.freqs
        );
    }

    #[test]
    fn records_carry_diffusion_time() {
        let cfg = config();
        let run = run_simulation(&cfg).unwrap();
        assert_eq!(run.records.first().unwrap().generation, 0);
        assert_eq!(run.terminal().generation, 30);
        assert!((run.terminal().time - 0.5).abs() < 1e-15);
    }
}
