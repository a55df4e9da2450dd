//! Interacting-particle Euler-Maruyama solver.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stationary::TiltedBetaFamily;

use super::{InitialLaw, MeanFieldConfig, MeanFieldRecord, Resolution};

#[derive(Debug, Clone)]
pub struct ParticleRun {
    pub records: Vec<MeanFieldRecord>,
    /// The ensemble at the horizon.
    pub final_particles: Vec<f64>,
    /// Fraction of particle-steps whose pre-clamp state left `[-0.1, 1.1]`.
    pub excursion_fraction: f64,
}

fn init_particles(cfg: &MeanFieldConfig, count: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    Ok(match cfg.init {
        InitialLaw::Point { x } => vec![x; count],
        InitialLaw::Uniform => (0..count).map(|_| rng.random::<f64>()).collect(),
        InitialLaw::PiY { y } => {
            let family = TiltedBetaFamily::new(cfg.mutation)?;
            (0..count).map(|_| family.sample(y, rng)).collect()
        }
    })
}

fn record(t: f64, sbar: f64, particles: &[f64]) -> MeanFieldRecord {
    let m = particles.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut het = 0.0;
    for &f in particles {
        sum += f;
        sum_sq += f * f;
        het += f * (1.0 - f);
    }
    let mean_freq = sum / m;
    let var_freq = (sum_sq / m - mean_freq * mean_freq).max(0.0);
    MeanFieldRecord {
        t,
        mean_freq,
        mean_trait: 2.0 * mean_freq - 1.0,
        trait_std: 2.0 * var_freq.sqrt(),
        sbar,
        sigma2: 4.0 * het / m,
    }
}

/// Integrate the ensemble to the horizon. Each step first freezes the
/// selection coefficient from the empirical law, then moves every particle
/// independently; states are clamped back to `[0, 1]` after each move and
/// the noise coefficient argument is truncated at zero.
pub fn evolve_particles(cfg: &MeanFieldConfig, rng: &mut impl Rng) -> Result<ParticleRun> {
    cfg.validate()?;
    let count = match cfg.resolution {
        Resolution::Particles(m) => m,
        Resolution::Grid(_) => {
            return Err(Error::config("particle solver called with a grid resolution"))
        }
    };
    let mut particles = init_particles(cfg, count, rng)?;
    let steps = cfg.steps();
    let (theta_plus, theta_minus) = (cfg.mutation.theta_plus, cfg.mutation.theta_minus);
    let sqrt_dt = cfg.dt.sqrt();

    let mut records = Vec::with_capacity(steps / cfg.record_stride + 2);
    let mut excursions = 0usize;

    let mut mean_trait = record(0.0, 0.0, &particles).mean_trait;
    for step in 0..=steps {
        let sbar = cfg.fitness.sbar(mean_trait);
        if step % cfg.record_stride == 0 || step == steps {
            records.push(record(step as f64 * cfg.dt, sbar, &particles));
        }
        if step == steps {
            break;
        }
        let mut sum = 0.0;
        for f in &mut particles {
            let x = *f;
            let drift = sbar * x * (1.0 - x) + theta_plus * (1.0 - x) - theta_minus * x;
            let noise: f64 = rng.sample(StandardNormal);
            let next = x + drift * cfg.dt + (x * (1.0 - x)).max(0.0).sqrt() * sqrt_dt * noise;
            if !(-0.1..=1.1).contains(&next) {
                excursions += 1;
            }
            *f = next.clamp(0.0, 1.0);
            sum += *f;
        }
        mean_trait = 2.0 * sum / count as f64 - 1.0;
    }

    let excursion_fraction = excursions as f64 / (steps as f64 * count as f64);
    if excursion_fraction > 0.01 {
        log::warn!(
            "unstable dt: {:.2}% of particle-steps overshot [-0.1, 1.1] before clamping",
            100.0 * excursion_fraction
        );
    }
    Ok(ParticleRun {
        records,
        final_particles: particles,
        excursion_fraction,
    })
}
