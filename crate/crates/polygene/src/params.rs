//! Shared model parameters: the log-fitness function acting on the additive
//! trait, and the per-locus mutation rates.

use crate::error::{Error, Result};

/// Log-fitness as a polynomial of degree one or two in the additive trait
/// `z`: either directional selection `U(z) = beta * z`, or quadratic
/// selection `U(z) = -kappa * (z - z_star)^2` (stabilizing for
/// `kappa > 0`, disruptive for `kappa < 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitnessSpec {
    Linear { beta: f64 },
    Quadratic { kappa: f64, z_star: f64 },
}

impl FitnessSpec {
    pub fn neutral() -> Self {
        FitnessSpec::Quadratic {
            kappa: 0.0,
            z_star: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FitnessSpec::Linear { beta } => {
                if !beta.is_finite() {
                    return Err(Error::config("fitness beta must be finite"));
                }
            }
            FitnessSpec::Quadratic { kappa, z_star } => {
                if !kappa.is_finite() || !z_star.is_finite() {
                    return Err(Error::config("fitness kappa and z* must be finite"));
                }
                if !(-1.0..=1.0).contains(&z_star) {
                    log::warn!("fitness optimum z* = {z_star} lies outside [-1, 1]");
                }
            }
        }
        Ok(())
    }

    /// `U(z)`.
    pub fn log_fitness(&self, z: f64) -> f64 {
        match *self {
            FitnessSpec::Linear { beta } => beta * z,
            FitnessSpec::Quadratic { kappa, z_star } => -kappa * (z - z_star) * (z - z_star),
        }
    }

    /// `U'(z)`, the selection gradient.
    pub fn gradient(&self, z: f64) -> f64 {
        match *self {
            FitnessSpec::Linear { beta } => beta,
            FitnessSpec::Quadratic { kappa, z_star } => -2.0 * kappa * (z - z_star),
        }
    }

    /// Mean-field selection coefficient `2 U'(m)` felt by one locus when
    /// the population mean trait is `m`.
    pub fn sbar(&self, mean_trait: f64) -> f64 {
        2.0 * self.gradient(mean_trait)
    }

    pub fn is_neutral(&self) -> bool {
        match *self {
            FitnessSpec::Linear { beta } => beta == 0.0,
            FitnessSpec::Quadratic { kappa, .. } => kappa == 0.0,
        }
    }
}

/// Per-locus mutation rates: `theta_plus` is the rate `-1 -> +1`,
/// `theta_minus` the rate `+1 -> -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationRates {
    pub theta_plus: f64,
    pub theta_minus: f64,
}

impl MutationRates {
    pub fn new(theta_plus: f64, theta_minus: f64) -> Result<Self> {
        let rates = MutationRates {
            theta_plus,
            theta_minus,
        };
        rates.validate()?;
        Ok(rates)
    }

    pub fn symmetric(theta: f64) -> Result<Self> {
        MutationRates::new(theta, theta)
    }

    pub fn zero() -> Self {
        MutationRates {
            theta_plus: 0.0,
            theta_minus: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_plus >= 0.0 && self.theta_minus >= 0.0)
            || !self.theta_plus.is_finite()
            || !self.theta_minus.is_finite()
        {
            return Err(Error::config("mutation rates must be finite and >= 0"));
        }
        Ok(())
    }

    /// Total mutation rate per locus.
    pub fn total(&self) -> f64 {
        self.theta_plus + self.theta_minus
    }

    /// Probability that a mutating locus is redrawn as `+1`. Defined only
    /// when the total rate is positive.
    pub fn plus_fraction(&self) -> Result<f64> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::Degenerate(
                "mutational law undefined for |theta| = 0".into(),
            ));
        }
        Ok(self.theta_plus / total)
    }

    /// Mean-field mutation drift at frequency `x`.
    pub fn drift(&self, x: f64) -> f64 {
        self.theta_plus * (1.0 - x) - self.theta_minus * x
    }

    pub fn is_symmetric(&self) -> bool {
        self.theta_plus == self.theta_minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_fitness_values() {
        let spec = FitnessSpec::Quadratic {
            kappa: 15.0,
            z_star: 0.0,
        };
        assert_eq!(spec.log_fitness(1.0), -15.0);
        assert_eq!(spec.log_fitness(0.0), 0.0);
        let lin = FitnessSpec::Linear { beta: 2.0 };
        assert_eq!(lin.log_fitness(0.5), 1.0);
    }

    #[test]
    fn sbar_forms() {
        // Linear: constant 2*beta regardless of the mean.
        let lin = FitnessSpec::Linear { beta: 3.0 };
        assert_eq!(lin.sbar(-0.7), 6.0);
        // Quadratic: 2 U'(m) = -4 kappa (m - z*).
        let quad = FitnessSpec::Quadratic {
            kappa: 1.0,
            z_star: 0.5,
        };
        assert_eq!(quad.sbar(0.0), 2.0);
    }

    #[test]
    fn mutation_law() {
        let rates = MutationRates::new(1.1, 3.3).unwrap();
        assert_eq!(rates.total(), 4.4);
        assert!((rates.plus_fraction().unwrap() - 0.25).abs() < 1e-15);
        assert!(MutationRates::zero().plus_fraction().is_err());
        assert!(MutationRates::new(-1.0, 0.0).is_err());
    }
}
