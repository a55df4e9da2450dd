//! Recombination families: mask sampling, pairwise rates, harmonic summary
//! statistics, and explicit subset laws for the exact oracle layer.

mod density;
mod model;

pub use density::{TabulatedDensity, GRID_POINTS};
pub use model::{
    mask_contains, HarmonicStats, RecombKind, RecombinationModel, ScalingDiagnostics,
};
