//! The tilted-Beta family: stationary densities of the one-locus dynamics
//! with constant selection `y`,
//!
//! `Pi_y(dx) = C_y x^(2 theta+ - 1) (1 - x)^(2 theta- - 1) e^(2xy) dx`.
//!
//! Moments come from Gauss-Jacobi quadrature with the endpoint exponents
//! matched to the Beta singularities (essential when `2 theta < 1`);
//! a doubled-degree rule provides a consistency check.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::params::MutationRates;

use super::jacobi::GaussJacobi;

const QUAD_DEGREE: usize = 200;

/// Moments of `Pi_y` (central moments on the frequency scale).
#[derive(Debug, Clone, Copy)]
pub struct PiYMoments {
    /// Normalization constant `C_y`.
    pub normalization: f64,
    /// Mean frequency `E[x]`.
    pub mean: f64,
    /// Mean trait coordinate `<Pi_y, 2 Id - 1>`.
    pub mean_trait: f64,
    /// Variance of the frequency.
    pub variance: f64,
    /// Fourth cumulant of the frequency (at `y = 0` this is the quartic
    /// cumulant entering the pitchfork expansion).
    pub fourth_cumulant: f64,
}

/// The family `{Pi_y : y}` for fixed mutation rates, with the quadrature
/// rule built once and shared across tilts.
#[derive(Debug, Clone)]
pub struct TiltedBetaFamily {
    theta: MutationRates,
    quad: GaussJacobi,
}

impl TiltedBetaFamily {
    pub fn new(theta: MutationRates) -> Result<Self> {
        theta.validate()?;
        if !(theta.theta_plus > 0.0 && theta.theta_minus > 0.0) {
            return Err(Error::config(
                "stationary densities require theta+ > 0 and theta- > 0",
            ));
        }
        let quad = GaussJacobi::new(
            QUAD_DEGREE,
            2.0 * theta.theta_minus - 1.0,
            2.0 * theta.theta_plus - 1.0,
        )?;
        Ok(TiltedBetaFamily { theta, quad })
    }

    pub fn theta(&self) -> &MutationRates {
        &self.theta
    }

    fn raw_moment_integrals(&self, y: f64, quad: &GaussJacobi) -> [f64; 5] {
        let mut raw = [0.0; 5];
        for k in 0..5 {
            raw[k] = quad.integrate_01(|x| x.powi(k as i32) * (2.0 * x * y).exp());
        }
        raw
    }

    pub fn moments_with_degree(&self, y: f64, quad: &GaussJacobi) -> PiYMoments {
        let raw = self.raw_moment_integrals(y, quad);
        let m1 = raw[1] / raw[0];
        let m2 = raw[2] / raw[0];
        let m3 = raw[3] / raw[0];
        let m4 = raw[4] / raw[0];
        let variance = m2 - m1 * m1;
        let mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1.powi(4);
        PiYMoments {
            normalization: 1.0 / raw[0],
            mean: m1,
            mean_trait: 2.0 * m1 - 1.0,
            variance,
            fourth_cumulant: mu4 - 3.0 * variance * variance,
        }
    }

    pub fn moments(&self, y: f64) -> PiYMoments {
        self.moments_with_degree(y, &self.quad)
    }

    /// Largest relative discrepancy between the working rule and a
    /// doubled-degree rule, over the reported moments.
    pub fn quadrature_check(&self, y: f64) -> Result<f64> {
        let fine = GaussJacobi::new(
            2 * QUAD_DEGREE,
            2.0 * self.theta.theta_minus - 1.0,
            2.0 * self.theta.theta_plus - 1.0,
        )?;
        let a = self.moments(y);
        let b = self.moments_with_degree(y, &fine);
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-30);
        Ok([
            rel(a.normalization, b.normalization),
            rel(a.mean, b.mean),
            rel(a.variance, b.variance),
            rel(a.fourth_cumulant, b.fourth_cumulant),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }

    pub fn mean_trait(&self, y: f64) -> f64 {
        let raw0 = self.quad.integrate_01(|x| (2.0 * x * y).exp());
        let raw1 = self.quad.integrate_01(|x| x * (2.0 * x * y).exp());
        2.0 * raw1 / raw0 - 1.0
    }

    /// Normalized density of `Pi_y` at an interior point.
    pub fn density(&self, y: f64, x: f64) -> f64 {
        assert!((0.0..=1.0).contains(&x));
        let m = self.moments(y);
        m.normalization
            * x.powf(2.0 * self.theta.theta_plus - 1.0)
            * (1.0 - x).powf(2.0 * self.theta.theta_minus - 1.0)
            * (2.0 * x * y).exp()
    }

    /// Exact draw from `Pi_y` by rejection from the untilted Beta with the
    /// bounded factor `e^(2y(x-1))` (or `e^(2yx)` for negative tilts).
    pub fn sample(&self, y: f64, rng: &mut impl Rng) -> f64 {
        let base = Beta::new(2.0 * self.theta.theta_plus, 2.0 * self.theta.theta_minus)
            .expect("validated shape parameters");
        loop {
            let x: f64 = base.sample(rng);
            let log_accept = if y >= 0.0 {
                2.0 * y * (x - 1.0)
            } else {
                2.0 * y * x
            };
            if rng.random::<f64>() < log_accept.exp() {
                return x;
            }
        }
    }

    /// Cell masses of `Pi_y` on a uniform `cells`-cell grid over `[0, 1]`,
    /// normalized to total mass one. Endpoint cells integrate the Beta
    /// singularity exactly via a power substitution.
    pub fn cell_masses(&self, y: f64, cells: usize) -> Result<Vec<f64>> {
        if cells < 4 {
            return Err(Error::config("grid projection needs at least 4 cells"));
        }
        let a = 2.0 * self.theta.theta_plus;
        let b = 2.0 * self.theta.theta_minus;
        let h = 1.0 / cells as f64;
        let interior = GaussJacobi::new(16, 0.0, 0.0)?;
        // int_0^h x^(a-1) g(x) dx = h^a int_0^1 s^(a-1) g(h s) ds
        let left_edge = GaussJacobi::new(16, 0.0, a - 1.0)?;
        let right_edge = GaussJacobi::new(16, 0.0, b - 1.0)?;

        let bare = |x: f64| (1.0 - x).powf(b - 1.0) * (2.0 * x * y).exp();
        let bare_mirror = |u: f64| (1.0 - u).powf(a - 1.0) * (2.0 * (1.0 - u) * y).exp();

        let mut mass = vec![0.0; cells];
        mass[0] = h.powf(a) * left_edge.integrate_01(|s| bare(h * s));
        mass[cells - 1] = h.powf(b) * right_edge.integrate_01(|s| bare_mirror(h * s));
        for (j, m) in mass.iter_mut().enumerate().take(cells - 1).skip(1) {
            let lo = j as f64 * h;
            *m = h * interior.integrate_01(|s| {
                let x = lo + h * s;
                x.powf(a - 1.0) * bare(x)
            });
        }
        let total: f64 = mass.iter().sum();
        for m in &mut mass {
            *m /= total;
        }
        Ok(mass)
    }
}

/// Spec-level convenience: moments of `Pi_y` for one-off calls.
pub fn pi_y_moments(y: f64, theta: &MutationRates) -> Result<PiYMoments> {
    Ok(TiltedBetaFamily::new(*theta)?.moments(y))
}
