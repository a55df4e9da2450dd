use crate::error::{Error, Result};

/// Number of tabulation nodes for densities on `[0, 1]`.
pub const GRID_POINTS: usize = 1024;

/// A strictly positive density on `[0, 1]`, tabulated on a uniform grid
/// with linear interpolation. Serializable as a two-column text file
/// (position, density), which keeps model descriptions config-friendly.
///
/// The tabulated values are normalized so the (piecewise-linear, hence
/// trapezoid-exact) integral is one; the cumulative table drives both
/// interval masses and inverse-CDF sampling.
#[derive(Debug, Clone)]
pub struct TabulatedDensity {
    values: Vec<f64>,
    cdf: Vec<f64>,
}

impl TabulatedDensity {
    pub fn from_fn(f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = (0..GRID_POINTS)
            .map(|i| f(i as f64 / (GRID_POINTS - 1) as f64))
            .collect();
        TabulatedDensity::from_grid_values(values)
    }

    pub fn uniform() -> Self {
        TabulatedDensity::from_fn(|_| 1.0).expect("uniform density is valid")
    }

    /// Build from sampled (position, density) pairs; positions must span
    /// `[0, 1]` after sorting and are linearly resampled onto the grid.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::config("density table needs at least two points"));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.first().unwrap().0 > 1e-9 || pts.last().unwrap().0 < 1.0 - 1e-9 {
            return Err(Error::config("density table must cover [0, 1]"));
        }
        let values = (0..GRID_POINTS)
            .map(|i| {
                let x = i as f64 / (GRID_POINTS - 1) as f64;
                // Linear interpolation in the sorted table.
                let j = pts.partition_point(|p| p.0 < x).min(pts.len() - 1).max(1);
                let (x0, y0) = pts[j - 1];
                let (x1, y1) = pts[j];
                if x1 == x0 {
                    y1
                } else {
                    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
                }
            })
            .collect();
        TabulatedDensity::from_grid_values(values)
    }

    fn from_grid_values(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::config(
                "density must be finite and strictly positive on the grid",
            ));
        }
        let h = 1.0 / (GRID_POINTS - 1) as f64;
        let mut cdf = vec![0.0; GRID_POINTS];
        for i in 1..GRID_POINTS {
            cdf[i] = cdf[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
        }
        let total = cdf[GRID_POINTS - 1];
        for v in &mut values {
            *v /= total;
        }
        for c in &mut cdf {
            *c /= total;
        }
        Ok(TabulatedDensity { values, cdf })
    }

    /// Cumulative mass on `[0, x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let h = 1.0 / (GRID_POINTS - 1) as f64;
        let cell = ((x / h) as usize).min(GRID_POINTS - 2);
        let x0 = cell as f64 * h;
        let t = x - x0;
        let slope = (self.values[cell + 1] - self.values[cell]) / h;
        self.cdf[cell] + self.values[cell] * t + 0.5 * slope * t * t
    }

    /// Mass of the interval `[a, b]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        (self.cdf(b) - self.cdf(a)).max(0.0)
    }

    /// Inverse-CDF sample.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> f64 {
        let u: f64 = rng.random();
        let cell = match self.cdf.partition_point(|c| *c < u) {
            0 => 0,
            k => (k - 1).min(GRID_POINTS - 2),
        };
        let h = 1.0 / (GRID_POINTS - 1) as f64;
        let du = u - self.cdf[cell];
        let f0 = self.values[cell];
        let slope = (self.values[cell + 1] - self.values[cell]) / h;
        // Solve f0 t + slope t^2 / 2 = du for t in [0, h].
        let t = if slope.abs() < 1e-12 * f0.max(1.0) {
            du / f0
        } else {
            let disc = (f0 * f0 + 2.0 * slope * du).max(0.0);
            (disc.sqrt() - f0) / slope
        };
        (cell as f64 * h + t.clamp(0.0, h)).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn uniform_density_masses() {
        let d = TabulatedDensity::uniform();
        assert!((d.cdf(0.5) - 0.5).abs() < 1e-12);
        assert!((d.mass_between(0.2, 0.7) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_density() {
        assert!(TabulatedDensity::from_fn(|x| x - 0.5).is_err());
        assert!(TabulatedDensity::from_points(&[(0.0, 1.0)]).is_err());
        assert!(TabulatedDensity::from_points(&[(0.3, 1.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn sampling_matches_cdf() {
        // A ramp density; empirical CDF at a few quantiles vs analytic.
        let d = TabulatedDensity::from_fn(|x| 0.5 + x).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let n = 200_000usize;
        let mut draws: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        draws.sort_by(f64::total_cmp);
        for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let x = draws[(q * n as f64) as usize];
            let analytic = d.cdf(x);
            // 3 sigma of a binomial proportion at n draws.
            let tol = 3.0 * (q * (1.0 - q) / n as f64).sqrt();
            assert!(
                (analytic - q).abs() < tol,
                "quantile {q}: cdf({x}) = {analytic}"
            );
        }
    }

    #[test]
    fn from_points_resamples() {
        let d = TabulatedDensity::from_points(&[(0.0, 2.0), (0.5, 2.0), (1.0, 2.0)]).unwrap();
        assert!((d.mass_between(0.0, 0.25) - 0.25).abs() < 1e-12);
    }
}
