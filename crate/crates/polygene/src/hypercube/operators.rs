//! The drift operators of the genotype-frequency dynamics: recombination,
//! mutation, and selection. Each maps a distribution on the hypercube to a
//! tangent vector (coordinates summing to zero).

use crate::error::Result;
use crate::params::{FitnessSpec, MutationRates};

use super::dist::{marginal_raw, product_embed};
use super::{dim, HypercubeDistribution, LocusSet, SubsetDistribution};

/// Recombinator: `sum_I nu(I) (x^I (x) x^(I^c) - x)` over nontrivial
/// subsets. Product measures are exactly its kernel.
pub fn recombinator(x: &HypercubeDistribution, nu: &SubsetDistribution) -> Result<Vec<f64>> {
    if nu.is_degenerate() {
        log::warn!("recombinator called with a degenerate crossover law; returning zero");
    }
    Ok(recombinator_raw(x.weights(), x.loci(), nu))
}

/// The recombinator extended bilinearly to arbitrary vectors (the form the
/// finite-difference Jacobian oracle differentiates).
pub fn recombinator_raw(v: &[f64], loci: usize, nu: &SubsetDistribution) -> Vec<f64> {
    assert_eq!(v.len(), dim(loci));
    assert_eq!(nu.loci(), loci);
    let mut out = vec![0.0; v.len()];
    for &(subset, mass) in nu.nontrivial_support() {
        let a = marginal_raw(v, subset);
        let b = marginal_raw(v, (dim(loci) - 1) & !subset);
        let prod = product_embed(&a, &b, subset, loci);
        for (o, (p, x)) in out.iter_mut().zip(prod.iter().zip(v)) {
            *o += mass * (p - x);
        }
    }
    out
}

/// Directional derivative of the recombinator at `v` applied to `h`:
/// `sum_I nu(I) (v^I (x) h^(I^c) + h^I (x) v^(I^c) - h)`.
pub fn nabla_recombinator_apply(
    v: &[f64],
    loci: usize,
    nu: &SubsetDistribution,
    h: &[f64],
) -> Vec<f64> {
    assert_eq!(v.len(), dim(loci));
    assert_eq!(h.len(), dim(loci));
    let full = dim(loci) - 1;
    let mut out = vec![0.0; v.len()];
    for &(subset, mass) in nu.nontrivial_support() {
        let co = full & !subset;
        let va = marginal_raw(v, subset);
        let vb = marginal_raw(v, co);
        let ha = marginal_raw(h, subset);
        let hb = marginal_raw(h, co);
        let first = product_embed(&va, &hb, subset, loci);
        let second = product_embed(&ha, &vb, subset, loci);
        for (i, o) in out.iter_mut().enumerate() {
            *o += mass * (first[i] + second[i] - h[i]);
        }
    }
    out
}

/// Mutator: `|theta| sum_l (x^([L] minus l) (x) L_theta - x)`. Returns the
/// zero vector when the total mutation rate vanishes.
pub fn mutator(x: &HypercubeDistribution, rates: &MutationRates) -> Vec<f64> {
    let loci = x.loci();
    let mut out = vec![0.0; dim(loci)];
    let total = rates.total();
    if total <= 0.0 {
        return out;
    }
    let plus = rates.theta_plus / total;
    let minus = rates.theta_minus / total;
    let v = x.weights();
    for l in 0..loci {
        let bit = 1usize << l;
        for (idx, value) in v.iter().enumerate() {
            // Marginalizing locus l merges idx with its flip partner.
            let pair_mass = value + v[idx ^ bit];
            let law = if idx & bit != 0 { plus } else { minus };
            out[idx] += total * (pair_mass * law - value);
        }
    }
    out
}

/// Selector: the Price-equation covariance
/// `S(x)(gamma) = x(gamma) (W(gamma) - x[W])`.
pub fn selector(x: &HypercubeDistribution, spec: &FitnessSpec) -> Vec<f64> {
    let loci = x.loci();
    let w: Vec<f64> = (0..dim(loci))
        .map(|idx| spec.log_fitness(super::trait_of_index(idx, loci)))
        .collect();
    let mean_w: f64 = x
        .weights()
        .iter()
        .zip(&w)
        .map(|(weight, value)| weight * value)
        .sum();
    x.weights()
        .iter()
        .zip(&w)
        .map(|(weight, value)| weight * (value - mean_w))
        .collect()
}

/// Generalized marginal of the selector on a nonempty subset:
/// `S^A(x)(gamma) = Cov_x[W(g), 1(g|_A = gamma)]
///               = x^A(gamma) (x[W | g|_A = gamma] - x[W])`,
/// indexed by compressed bits of `subset`. Computed from conditional means,
/// which makes "marginal of the full selector" an independent cross-check.
/// For the full set this is the selector itself.
pub fn selector_marginal(
    x: &HypercubeDistribution,
    subset: LocusSet,
    spec: &FitnessSpec,
) -> Result<Vec<f64>> {
    if subset == 0 {
        return Err(crate::error::Error::config(
            "selector marginal onto the empty locus set",
        ));
    }
    let loci = x.loci();
    let cells = 1usize << subset.count_ones();
    let mut mass = vec![0.0; cells];
    let mut w_mass = vec![0.0; cells];
    for (idx, weight) in x.weights().iter().enumerate() {
        let cell = super::compress_bits(idx, subset);
        let w = spec.log_fitness(super::trait_of_index(idx, loci));
        mass[cell] += weight;
        w_mass[cell] += weight * w;
    }
    let mean_w: f64 = w_mass.iter().sum();
    Ok(mass
        .iter()
        .zip(&w_mass)
        .map(|(m, wm)| wm - m * mean_w)
        .collect())
}
