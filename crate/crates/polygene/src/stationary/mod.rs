//! Stationary analysis of the mean-field dynamics: the tilted-Beta family
//! of candidate invariant laws, its moments, and the self-consistency
//! fixed points whose branches form the bifurcation diagram.

mod fixed_points;
mod jacobi;
mod tilted;

pub use fixed_points::{
    chi, chi_for_spec, chi_slope, fixed_points, fixed_points_for_spec, kappa_c, FixedPoint,
};
pub use jacobi::GaussJacobi;
pub use tilted::{pi_y_moments, PiYMoments, TiltedBetaFamily};
