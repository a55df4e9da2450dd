//! Polygenic adaptation toolkit: a finite-loci Wright-Fisher simulator, the
//! corresponding mean-field (McKean-Vlasov / Fokker-Planck) solvers, and the
//! stationary fixed-point and bifurcation analysis, backed by exact
//! small-genome operators that serve as brute-force oracles.
//!
//! The crate is organized around five subsystems:
//!
//! * [`hypercube`] — exact distributions on `{-1,+1}^L` for small `L`, with
//!   the recombination / mutation / selection operators, the linkage
//!   equilibrium projection and the analytic recombinator Jacobian.
//! * [`recomb`] — the recombination families (free, single crossover,
//!   Poisson crossovers): mask sampling, pairwise rates, harmonic summary
//!   statistics.
//! * [`forward`] — the discrete N-individual, L-locus forward simulator on
//!   packed bitset genomes.
//! * [`meanfield`] — interacting-particle and finite-volume solvers for the
//!   limiting one-locus dynamics, plus Lande-equation diagnostics.
//! * [`stationary`] — tilted-Beta stationary densities, the self-consistency
//!   map, its fixed points and the pitchfork scan.

pub mod error;
pub mod forward;
pub mod hypercube;
pub mod meanfield;
pub mod params;
pub mod recomb;
pub mod rng;
pub mod stationary;

pub use error::{Error, Result};
pub use params::{FitnessSpec, MutationRates};
