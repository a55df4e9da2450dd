//! Self-consistency analysis of the stationary family: a tilt `y` is
//! self-consistent when the selection coefficient generated by `Pi_y`
//! equals `y`; those tilts are exactly the invariant laws of the
//! mean-field dynamics (within the tilted-Beta family — nothing is claimed
//! outside it).
//!
//! Two parametrizations of the quadratic case coexist and differ by a
//! factor two in `kappa`:
//!
//! * [`chi`] takes the *reduced* form `sbar(xi) = -2 kappa (<xi, 2Id-1> - z*)`,
//!   the convention in which the pitchfork sits at
//!   `kappa_c = -(4 theta + 1)/2`;
//! * [`chi_for_spec`] evaluates the mean-field coefficient `2 U'` of a
//!   [`FitnessSpec`], the convention the particle/grid solvers and the
//!   forward simulator realize. For `Quadratic(kappa, z*)` it equals the
//!   reduced form at `2 kappa`.
//!
//! Use the `*_for_spec` variants whenever the result is compared against a
//! simulation; use the reduced form for the critical-point formulas.

use crate::error::{Error, Result};
use crate::params::{FitnessSpec, MutationRates};

use super::tilted::TiltedBetaFamily;

/// Slope step for numerical `chi'` (central difference).
const SLOPE_STEP: f64 = 1e-4;
/// Bisection refinement on the tilt coordinate.
const ROOT_TOL: f64 = 1e-10;
/// Roots closer than this merge.
const DEDUP_TOL: f64 = 1e-8;

/// A self-consistent tilt with its observables.
#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    /// The tilt `y*`.
    pub y: f64,
    /// Branch coordinate `<Pi_y*, 2Id - 1>` (what bifurcation diagrams plot).
    pub branch_mean_trait: f64,
    /// Numerical slope of the self-consistency map at the root; `|slope| < 1`
    /// is the usual stability heuristic (no dynamic claim beyond the sign).
    pub chi_slope: f64,
}

/// Reduced-form map: `chi(y) = -2 kappa (<Pi_y, 2Id-1> - z*)`.
pub fn chi(family: &TiltedBetaFamily, y: f64, kappa: f64, z_star: f64) -> f64 {
    -2.0 * kappa * (family.mean_trait(y) - z_star)
}

/// Mean-field map: `chi(y) = sbar(Pi_y) = 2 U'(<Pi_y, 2Id-1>)`.
pub fn chi_for_spec(family: &TiltedBetaFamily, y: f64, spec: &FitnessSpec) -> f64 {
    spec.sbar(family.mean_trait(y))
}

/// Critical disruptive strength in the reduced parametrization:
/// `kappa_c = -(4 theta + 1)/2`. Requires symmetric rates.
pub fn kappa_c(theta: &MutationRates) -> Result<f64> {
    theta.validate()?;
    if !theta.is_symmetric() {
        return Err(Error::config(
            "kappa_c is stated for symmetric mutation rates only",
        ));
    }
    Ok(-(4.0 * theta.theta_plus + 1.0) / 2.0)
}

/// Central-difference slope of the reduced-form map at `y`.
pub fn chi_slope(family: &TiltedBetaFamily, y: f64, kappa: f64, z_star: f64) -> f64 {
    (chi(family, y + SLOPE_STEP, kappa, z_star) - chi(family, y - SLOPE_STEP, kappa, z_star))
        / (2.0 * SLOPE_STEP)
}

/// All self-consistent tilts of the reduced-form map in `[-y_max, y_max]`.
pub fn fixed_points(
    theta: &MutationRates,
    kappa: f64,
    z_star: f64,
    y_max: f64,
    grid_n: usize,
) -> Result<Vec<FixedPoint>> {
    let family = TiltedBetaFamily::new(*theta)?;
    solve_fixed_points(&family, |f, y| chi(f, y, kappa, z_star), y_max, grid_n)
}

/// All self-consistent tilts of the mean-field map for a fitness spec;
/// these are the invariant laws the particle/grid solvers actually see.
pub fn fixed_points_for_spec(
    theta: &MutationRates,
    spec: &FitnessSpec,
    y_max: f64,
    grid_n: usize,
) -> Result<Vec<FixedPoint>> {
    let family = TiltedBetaFamily::new(*theta)?;
    solve_fixed_points(&family, |f, y| chi_for_spec(f, y, spec), y_max, grid_n)
}

fn solve_fixed_points(
    family: &TiltedBetaFamily,
    map: impl Fn(&TiltedBetaFamily, f64) -> f64,
    y_max: f64,
    grid_n: usize,
) -> Result<Vec<FixedPoint>> {
    if grid_n < 100 {
        return Err(Error::config("fixed-point scan needs grid_n >= 100"));
    }
    if !(y_max > 0.0) {
        return Err(Error::config("fixed-point scan needs y_max > 0"));
    }
    let g = |y: f64| map(family, y) - y;

    let mut roots: Vec<f64> = Vec::new();
    let mut prev_y = -y_max;
    let mut prev_g = g(prev_y);
    for i in 1..=grid_n {
        let y = -y_max + 2.0 * y_max * i as f64 / grid_n as f64;
        let gy = g(y);
        if prev_g == 0.0 {
            roots.push(prev_y);
        } else if prev_g * gy < 0.0 {
            roots.push(bisect(&g, prev_y, y));
        }
        prev_y = y;
        prev_g = gy;
    }
    if prev_g == 0.0 {
        roots.push(prev_y);
    }

    if roots.is_empty() {
        // The map is bounded, so a fixed point exists; if the scan window
        // missed every sign change fall back to a damped iteration from 0.
        log::warn!("fixed-point scan found no sign change in [-{y_max}, {y_max}]; falling back to damped iteration");
        let mut y = 0.0;
        for _ in 0..10_000 {
            let next = y + 0.5 * g(y);
            if (next - y).abs() < ROOT_TOL {
                break;
            }
            y = next;
        }
        roots.push(y);
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < DEDUP_TOL);

    Ok(roots
        .into_iter()
        .map(|y| {
            let h = SLOPE_STEP;
            FixedPoint {
                y,
                branch_mean_trait: family.mean_trait(y),
                chi_slope: (map(family, y + h) - map(family, y - h)) / (2.0 * h),
            }
        })
        .collect())
}

fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut g_lo = g(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if g_lo * g_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(theta: f64) -> TiltedBetaFamily {
        TiltedBetaFamily::new(MutationRates::symmetric(theta).unwrap()).unwrap()
    }

    #[test]
    fn kappa_c_values() {
        assert_eq!(
            kappa_c(&MutationRates::symmetric(0.6).unwrap()).unwrap(),
            -1.7
        );
        assert_eq!(kappa_c(&MutationRates::zero()).unwrap(), -0.5);
        assert!(kappa_c(&MutationRates::new(0.2, 0.3).unwrap()).is_err());
    }

    #[test]
    fn chi_is_odd_and_vanishes_at_zero_for_symmetric_rates() {
        let fam = family(0.6);
        assert!(chi(&fam, 0.0, -2.0, 0.0).abs() < 1e-12);
        for y in [0.5, 1.5, 4.0] {
            let plus = chi(&fam, y, -2.0, 0.0);
            let minus = chi(&fam, -y, -2.0, 0.0);
            assert!((plus + minus).abs() < 1e-11);
        }
    }

    #[test]
    fn chi_slope_at_zero_is_kappa_over_kappa_c() {
        let theta = MutationRates::symmetric(0.6).unwrap();
        let fam = family(0.6);
        let kc = kappa_c(&theta).unwrap();
        for kappa in [-2.5, -1.7, -0.4, 1.0] {
            let slope = chi_slope(&fam, 0.0, kappa, 0.0);
            assert!(
                (slope - kappa / kc).abs() < 1e-4,
                "kappa={kappa}: slope {slope} vs {}",
                kappa / kc
            );
        }
        // At kappa = kappa_c the slope is 1 within 1e-4.
        assert!((chi_slope(&fam, 0.0, kc, 0.0) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn chi_monotone_decreasing_under_stabilizing_selection() {
        let fam = family(0.6);
        let kappa = 2.0;
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let y = -8.0 + 0.4 * i as f64;
            let value = chi(&fam, y, kappa, 0.0);
            assert!(value < prev);
            prev = value;
         }
    }

    #[test]
    fn stabilizing_selection_has_the_unique_root() {
        let theta = MutationRates::symmetric(0.6).unwrap();
        for kappa in [0.0, 0.8, 3.0] {
            let roots = fixed_points(&theta, kappa, 0.0, 20.0, 400).unwrap();
            assert_eq!(roots.len(), 1, "kappa={kappa}");
            assert!(roots[0].y.abs() < 1e-9);
        }
    }

    #[test]
    fn disruptive_selection_below_critical_has_three_roots() {
        let theta = MutationRates::symmetric(0.6).unwrap();
        // kappa = kappa_c - 0.3 = -2.0.
        let roots = fixed_points(&theta, -2.0, 0.0, 20.0, 2000).unwrap();
        assert_eq!(roots.len(), 3);
        let ys: Vec<f64> = roots.iter().map(|r| r.y).collect();
        assert!(ys[1].abs() < 1e-9);
        // Symmetric outer pair.
        assert!((ys[0] + ys[2]).abs() < 1e-7, "{ys:?}");
        assert!(ys[2] > 0.1);
        // Cross-check the positive root with a damped fixed-point iteration.
        let fam = family(0.6);
        let mut y = 1.0;
        for _ in 0..100_000 {
            y += 0.3 * (chi(&fam, y, -2.0, 0.0) - y);
        }
        assert!((y - ys[2]).abs() < 1e-8, "bisection {} vs iteration {y}", ys[2]);
        // Outer branches are the attracting ones in the slope heuristic.
        assert!(roots[0].chi_slope.abs() < 1.0);
        assert!(roots[2].chi_slope.abs() < 1.0);
        assert!(roots[1].chi_slope > 1.0);
    }

    #[test]
    fn numerical_critical_point_matches_formula() {
        // chi'(0; kappa) is linear in kappa, so the kappa where it crosses 1
        // is 1/chi'(0; 1); it must equal kappa_c within 1e-3.
        for theta in [0.3, 0.6, 1.0] {
            let rates = MutationRates::symmetric(theta).unwrap();
            let fam = family(theta);
            let crossing = 1.0 / chi_slope(&fam, 0.0, 1.0, 0.0);
            let formula = kappa_c(&rates).unwrap();
            assert!(
                (crossing - formula).abs() < 1e-3,
                "theta={theta}: {crossing} vs {formula}"
            );
        }
    }

    #[test]
    fn spec_form_equals_reduced_form_at_doubled_kappa() {
        let theta = MutationRates::symmetric(0.6).unwrap();
        let fam = family(0.6);
        let spec = FitnessSpec::Quadratic {
            kappa: -1.0,
            z_star: 0.0,
        };
        for y in [-3.0, 0.4, 2.0] {
            let lhs = chi_for_spec(&fam, y, &spec);
            let rhs = chi(&fam, y, -2.0, 0.0);
            assert!((lhs - rhs).abs() < 1e-12);
        }
        let a = fixed_points_for_spec(&theta, &spec, 20.0, 2000).unwrap();
        let b = fixed_points(&theta, -2.0, 0.0, 20.0, 2000).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.y - y.y).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_fitness_spec_has_a_shifted_root() {
        // For Linear(beta), chi is the constant 2 beta, so the unique fixed
        // point is y* = 2 beta.
        let theta = MutationRates::symmetric(0.6).unwrap();
        let spec = FitnessSpec::Linear { beta: 0.7 };
        let roots = fixed_points_for_spec(&theta, &spec, 20.0, 400).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].y - 1.4).abs() < 1e-9);
    }

    #[test]
    fn scan_parameters_validated() {
        let theta = MutationRates::symmetric(0.6).unwrap();
        assert!(fixed_points(&theta, -2.0, 0.0, 20.0, 50).is_err());
        assert!(fixed_points(&theta, -2.0, 0.0, -1.0, 400).is_err());
    }
}
