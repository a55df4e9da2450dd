//! Conservative finite-volume solver for the nonlinear Fokker-Planck
//! equation of the limiting dynamics.
//!
//! Cell averages on a uniform grid over `[0, 1]`; fluxes at faces combine
//! an upwinded drift with the centered diffusion of `x(1-x) u / 2`. The
//! drift is stepped explicitly, the (stiff, degenerate) diffusion
//! implicitly with a precomputed tridiagonal factorization; both halves are
//! conservative, so total mass is preserved to machine accuracy, and the
//! implicit matrix is an M-matrix so the diffusion step preserves
//! positivity. Zero-flux boundaries.

use crate::error::{Error, Result};
use crate::stationary::TiltedBetaFamily;

use super::{InitialLaw, MeanFieldConfig, MeanFieldRecord, Resolution};

/// Cell-averaged density on `[0, 1]` with total mass one.
#[derive(Debug, Clone)]
pub struct GridDensity {
    cell_avg: Vec<f64>,
}

impl GridDensity {
    pub fn from_cell_masses(masses: &[f64]) -> Result<Self> {
        let k = masses.len();
        if k < 4 {
            return Err(Error::config("grid density needs at least 4 cells"));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::distribution("cell masses must be finite and >= 0"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::distribution(format!(
                "cell masses sum to {total}, expected 1 within 1e-10"
            )));
        }
        let h = 1.0 / k as f64;
        Ok(GridDensity {
            cell_avg: masses.iter().map(|m| m / total / h).collect(),
        })
    }

    pub fn cells(&self) -> usize {
        self.cell_avg.len()
    }

    pub fn cell_width(&self) -> f64 {
        1.0 / self.cells() as f64
    }

    pub fn cell_averages(&self) -> &[f64] {
        &self.cell_avg
    }

    pub fn cell_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.cell_width()
    }

    pub fn total_mass(&self) -> f64 {
        self.cell_avg.iter().sum::<f64>() * self.cell_width()
    }

    /// `int g(x) u(x) dx` by the midpoint rule.
    pub fn expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        let h = self.cell_width();
        self.cell_avg
            .iter()
            .enumerate()
            .map(|(j, u)| u * g((j as f64 + 0.5) * h) * h)
            .sum()
    }

    /// L1 distance between two densities on the same grid.
    pub fn l1_distance(&self, other: &GridDensity) -> f64 {
        assert_eq!(self.cells(), other.cells());
        let h = self.cell_width();
        self.cell_avg
            .iter()
            .zip(&other.cell_avg)
            .map(|(a, b)| (a - b).abs() * h)
            .sum()
    }

    fn record(&self, t: f64, sbar: f64) -> MeanFieldRecord {
        let mean_freq = self.expectation(|x| x);
        let m2 = self.expectation(|x| x * x);
        let het = self.expectation(|x| x * (1.0 - x));
        MeanFieldRecord {
            t,
            mean_freq,
            mean_trait: 2.0 * mean_freq - 1.0,
            trait_std: 2.0 * (m2 - mean_freq * mean_freq).max(0.0).sqrt(),
            sbar,
            sigma2: 4.0 * het,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridRun {
    pub records: Vec<MeanFieldRecord>,
    pub final_density: GridDensity,
    /// Density snapshots `(t, cell averages)` at the record stride, kept
    /// only when requested.
    pub snapshots: Vec<(f64, Vec<f64>)>,
    /// Largest per-step mass defect before renormalization.
    pub max_mass_drift: f64,
}

fn initial_density(cfg: &MeanFieldConfig, cells: usize) -> Result<GridDensity> {
    match cfg.init {
        InitialLaw::Uniform => {
            GridDensity::from_cell_masses(&vec![1.0 / cells as f64; cells])
        }
        InitialLaw::Point { x } => {
            let mut masses = vec![0.0; cells];
            let j = ((x * cells as f64) as usize).min(cells - 1);
            masses[j] = 1.0;
            GridDensity::from_cell_masses(&masses)
        }
        InitialLaw::PiY { y } => {
            let family = TiltedBetaFamily::new(cfg.mutation)?;
            GridDensity::from_cell_masses(&family.cell_masses(y, cells)?)
        }
    }
}

/// Integrate the density to the horizon. Deterministic.
pub fn evolve_density(cfg: &MeanFieldConfig) -> Result<GridRun> {
    evolve_density_with_snapshots(cfg, false)
}

pub fn evolve_density_with_snapshots(cfg: &MeanFieldConfig, keep_snapshots: bool) -> Result<GridRun> {
    cfg.validate()?;
    let cells = match cfg.resolution {
        Resolution::Grid(k) => k,
        Resolution::Particles(_) => {
            return Err(Error::config("grid solver called with a particle resolution"))
        }
    };
    let mut density = initial_density(cfg, cells)?;
    let h = density.cell_width();
    let dt = cfg.dt;
    let steps = cfg.steps();

    // Diffusion coefficient at cell centers: a_j = x_j (1 - x_j).
    let a: Vec<f64> = (0..cells)
        .map(|j| {
            let x = (j as f64 + 0.5) * h;
            x * (1.0 - x)
        })
        .collect();

    // Backward-Euler matrix for u_t = (1/2) d_xx (a u) with zero-flux
    // boundaries: M = I - dt A. Precompute the Thomas factorization.
    let coeff = dt / (2.0 * h * h);
    let mut diag = vec![0.0; cells];
    let mut lower = vec![0.0; cells]; // lower[j] multiplies u[j-1]
    let mut upper = vec![0.0; cells]; // upper[j] multiplies u[j+1]
    for j in 0..cells {
        let faces = if j == 0 || j == cells - 1 { 1.0 } else { 2.0 };
        diag[j] = 1.0 + faces * coeff * a[j];
        if j > 0 {
            lower[j] = -coeff * a[j - 1];
        }
        if j + 1 < cells {
            upper[j] = -coeff * a[j + 1];
        }
    }
    // Thomas forward sweep coefficients (matrix is static across steps).
    let mut c_prime = vec![0.0; cells];
    let mut denom = vec![0.0; cells];
    denom[0] = diag[0];
    c_prime[0] = upper[0] / denom[0];
    for j in 1..cells {
        denom[j] = diag[j] - lower[j] * c_prime[j - 1];
        c_prime[j] = upper[j] / denom[j];
    }

    let theta = cfg.mutation;
    let mut records = Vec::with_capacity(steps / cfg.record_stride + 2);
    let mut snapshots = Vec::new();
    let mut flux = vec![0.0; cells + 1];
    let mut star = vec![0.0; cells];
    let mut solved = vec![0.0; cells];
    let mut max_mass_drift = 0.0f64;

    for step in 0..=steps {
        let t = step as f64 * dt;
        let mean_trait = 2.0 * density.expectation(|x| x) - 1.0;
        let sbar = cfg.fitness.sbar(mean_trait);
        if step % cfg.record_stride == 0 || step == steps {
            records.push(density.record(t, sbar));
            if keep_snapshots {
                snapshots.push((t, density.cell_avg.clone()));
            }
        }
        if step == steps {
            break;
        }

        // Explicit upwinded drift fluxes at interior faces.
        let u = &density.cell_avg;
        flux[0] = 0.0;
        flux[cells] = 0.0;
        for f in 1..cells {
            let x = f as f64 * h;
            let b = sbar * x * (1.0 - x) + theta.drift(x);
            flux[f] = if b >= 0.0 { b * u[f - 1] } else { b * u[f] };
        }
        for j in 0..cells {
            star[j] = u[j] - dt / h * (flux[j + 1] - flux[j]);
        }

        // Implicit diffusion (Thomas back substitution with the cached
        // factorization).
        solved[0] = star[0] / denom[0];
        for j in 1..cells {
            solved[j] = (star[j] - lower[j] * solved[j - 1]) / denom[j];
        }
        for j in (0..cells - 1).rev() {
            solved[j] -= c_prime[j] * solved[j + 1];
        }

        // Contract checks: positivity within tolerance, conservative mass.
        let mut mass = 0.0;
        for value in solved.iter() {
            if *value < -1e-12 / h {
                return Err(Error::Numerical(format!(
                    "negative cell value {value} at t = {t}"
                )));
            }
            mass += value.max(0.0) * h;
        }
        let drift = (mass - 1.0).abs();
        max_mass_drift = max_mass_drift.max(drift);
        if drift > 1e-8 {
            log::warn!("mass drift {drift:.3e} in one step at t = {t}");
        }
        for (dst, value) in density.cell_avg.iter_mut().zip(&solved) {
            *dst = value.max(0.0) / mass;
        }
    }

    Ok(GridRun {
        records,
        final_density: density,
        snapshots,
        max_mass_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{FitnessSpec, MutationRates};

    fn base_config() -> MeanFieldConfig {
        MeanFieldConfig {
            fitness: FitnessSpec::neutral(),
            mutation: MutationRates::symmetric(0.6).unwrap(),
            dt: 1e-4,
            horizon: 1.0,
            resolution: Resolution::Grid(400),
            init: InitialLaw::PiY { y: 0.0 },
            seed: 0,
            record_stride: 1000,
        }
    }

    #[test]
    fn mass_is_conserved() {
        let run = evolve_density(&base_config()).unwrap();
        assert!(run.max_mass_drift < 1e-10);
        assert!((run.final_density.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn neutral_stationary_density_stays_put() {
        // Pi_0 is invariant for kappa = 0; over t in [0, 1] the solved
        // density must stay within L1 distance 0.02 of the projection.
        let cfg = base_config();
        let run = evolve_density(&cfg).unwrap();
        let family = TiltedBetaFamily::new(cfg.mutation).unwrap();
        let reference =
            GridDensity::from_cell_masses(&family.cell_masses(0.0, 400).unwrap()).unwrap();
        let distance = run.final_density.l1_distance(&reference);
        assert!(distance < 0.02, "L1 drift {distance}");
    }

    #[test]
    fn stationary_tilted_density_stays_put_under_matching_selection() {
        // Pi_y* with y* a fixed point of the mean-field map is invariant
        // for the full nonlinear dynamics.
        let theta = MutationRates::symmetric(0.6).unwrap();
        let spec = FitnessSpec::Quadratic {
            kappa: -1.0,
            z_star: 0.0,
        };
        let roots = crate::stationary::fixed_points_for_spec(&theta, &spec, 20.0, 2000).unwrap();
        let y_star = roots.last().unwrap().y;
        assert!(y_star > 0.1);

        let mut cfg = base_config();
        cfg.fitness = spec;
        cfg.init = InitialLaw::PiY { y: y_star };
        let run = evolve_density(&cfg).unwrap();
        let family = TiltedBetaFamily::new(theta).unwrap();
        let reference =
            GridDensity::from_cell_masses(&family.cell_masses(y_star, 400).unwrap()).unwrap();
        assert!(run.final_density.l1_distance(&reference) < 0.02);
        // The recorded selection coefficient holds at y*.
        for r in &run.records {
            assert!((r.sbar - y_star).abs() < 0.02, "sbar {} vs y* {y_star}", r.sbar);
        }
    }

    #[test]
    fn negative_values_are_rejected_not_hidden() {
        // A crude sanity check on the contract: the solver never returns
        // densities with visible negative mass.
        let run = evolve_density(&base_config()).unwrap();
        assert!(run
            .final_density
            .cell_averages()
            .iter()
            .all(|u| *u >= 0.0));
    }
}
