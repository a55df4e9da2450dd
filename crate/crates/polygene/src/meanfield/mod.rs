//! Solvers for the limiting one-locus dynamics: an interacting-particle
//! Euler-Maruyama scheme and a conservative finite-volume scheme for the
//! associated nonlinear Fokker-Planck equation, with trait diagnostics.
//!
//! Both solvers integrate the same law-dependent dynamics: the drift of a
//! frequency `f` is `sbar * f(1-f) + theta+ (1-f) - theta- f` with noise
//! coefficient `sqrt(f(1-f))`, where `sbar = 2 U'(mean trait)` is
//! recomputed from the evolving law at every step.

mod diagnostics;
mod grid;
mod particles;

pub use diagnostics::{
    genetic_variance_grid, genetic_variance_particles, lande_points, lande_relative_l2,
    LandePoint,
};
pub use grid::{evolve_density, GridDensity, GridRun};
pub use particles::{evolve_particles, ParticleRun};

use crate::error::{Error, Result};
use crate::params::{FitnessSpec, MutationRates};

/// Initial law on `[0, 1]` for either solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialLaw {
    /// The stationary density with tilt `y` (requires positive mutation
    /// rates).
    PiY { y: f64 },
    /// Everything at one frequency.
    Point { x: f64 },
    /// Lebesgue measure on `[0, 1]`.
    Uniform,
}

/// How finely the law is resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Interacting particles (Monte Carlo).
    Particles(usize),
    /// Finite-volume cells.
    Grid(usize),
}

#[derive(Debug, Clone)]
pub struct MeanFieldConfig {
    pub fitness: FitnessSpec,
    pub mutation: MutationRates,
    pub dt: f64,
    pub horizon: f64,
    pub resolution: Resolution,
    pub init: InitialLaw,
    pub seed: u64,
    /// Record every this many steps (the initial and final states are
    /// always recorded).
    pub record_stride: usize,
}

impl MeanFieldConfig {
    pub fn validate(&self) -> Result<()> {
        self.fitness.validate()?;
        self.mutation.validate()?;
        if !(self.dt > 0.0) || !(self.horizon > 0.0) {
            return Err(Error::config("dt and horizon must be positive"));
        }
        if self.record_stride == 0 {
            return Err(Error::config("record stride must be >= 1"));
        }
        match self.resolution {
            Resolution::Particles(m) if m < 10 => {
                return Err(Error::config("particle ensembles need at least 10 particles"))
            }
            Resolution::Grid(k) if k < 4 => {
                return Err(Error::config("grid solves need at least 4 cells"))
            }
            _ => {}
        }
        if let InitialLaw::Point { x } = self.init {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::config("point-mass initial frequency must be in [0, 1]"));
            }
        }
        if let InitialLaw::PiY { .. } = self.init {
            if self.mutation.theta_plus <= 0.0 || self.mutation.theta_minus <= 0.0 {
                return Err(Error::config(
                    "tilted-Beta initial laws require theta+ > 0 and theta- > 0",
                ));
            }
        }
        // Stability heuristic: the drift should move a state by at most
        // half a unit feature per step.
        let sbar_bound = self.fitness.sbar(1.0).abs().max(self.fitness.sbar(-1.0).abs());
        let drift_bound =
            0.25 * sbar_bound + self.mutation.theta_plus.max(self.mutation.theta_minus);
        if self.dt * drift_bound >= 0.5 {
            return Err(Error::config(format!(
                "dt = {} too large for drift bound {drift_bound}",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }
}

/// One recorded instant of either solver.
#[derive(Debug, Clone, Copy)]
pub struct MeanFieldRecord {
    pub t: f64,
    /// `E[f]`.
    pub mean_freq: f64,
    /// `<law, 2 Id - 1>`.
    pub mean_trait: f64,
    /// Standard deviation of `2f - 1` under the law.
    pub trait_std: f64,
    /// The selection coefficient in force at this instant.
    pub sbar: f64,
    /// Genetic variance `4 E[f(1-f)]`.
    pub sigma2: f64,
}
