use crate::error::{Error, Result};
use crate::params::{FitnessSpec, MutationRates};
use crate::recomb::RecombinationModel;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    AllPlus,
    AllMinus,
    /// Burn the neutral chain in for `10 N` generations from independent
    /// Bernoulli(theta+/|theta|) loci.
    NeutralEquilibrium,
    ExplicitFrequencies(Vec<f64>),
}

/// Which diagnostics each recorded generation carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatOptions {
    pub histogram_bins: usize,
    /// Random locus pairs tracked for linkage disequilibrium.
    pub ld_pairs: usize,
    /// Random locus triples tracked for the LE-deviation norm.
    pub le_triples: usize,
}

impl Default for StatOptions {
    fn default() -> Self {
        StatOptions {
            histogram_bins: 50,
            ld_pairs: 200,
            le_triples: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub n: usize,
    pub loci: usize,
    pub generations: usize,
    pub fitness: FitnessSpec,
    pub mutation: MutationRates,
    pub recomb: RecombinationModel,
    /// Recombination strength: each offspring recombines with probability
    /// `rho / n`.
    pub rho: f64,
    pub init: InitialCondition,
    pub seed: u64,
    /// Record statistics every this many generations.
    pub record_stride: usize,
    pub stats: StatOptions,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.fitness.validate()?;
        self.mutation.validate()?;
        if self.n == 0 || self.loci == 0 {
            return Err(Error::config("need n >= 1 and L >= 1"));
        }
        if self.recomb.loci() != self.loci {
            return Err(Error::config(format!(
                "recombination model is for L = {}, simulation has L = {}",
                self.recomb.loci(),
                self.loci
            )));
        }
        if !(self.rho >= 0.0) || self.rho / self.n as f64 > 1.0 {
            return Err(Error::config(
                "need 0 <= rho <= n (per-generation recombination probability rho/n must be <= 1)",
            ));
        }
        let n = self.n as f64;
        if self.mutation.theta_plus / n > 1.0 || self.mutation.theta_minus / n > 1.0 {
            return Err(Error::config(
                "per-generation mutation probabilities theta/n must be <= 1",
            ));
        }
        if self.record_stride == 0 {
            return Err(Error::config("record stride must be >= 1"));
        }
        match &self.init {
            InitialCondition::ExplicitFrequencies(freqs) => {
                if freqs.len() != self.loci {
                    return Err(Error::config("explicit frequencies must list every locus"));
                }
                if freqs.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(Error::config("initial frequencies must lie in [0, 1]"));
                }
            }
            InitialCondition::NeutralEquilibrium => {
                if self.mutation.total() <= 0.0 {
                    return Err(Error::config(
                        "the neutral equilibrium initial condition requires |theta| > 0",
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Diffusion-time stamp of a generation.
    pub fn time_of(&self, generation: u64) -> f64 {
        generation as f64 / self.n as f64
    }
}
