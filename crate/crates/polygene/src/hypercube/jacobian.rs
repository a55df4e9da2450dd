//! The recombinator Jacobian in the linkage-vector basis.
//!
//! The linkage vectors `w_I = 2^(-L/2) (prod_{l in I} gamma^l)_gamma` form
//! an orthonormal basis of `R^(2^L)` in which the linearized recombinator is
//! lower-triangular with respect to set inclusion: the `(I, J)` entry
//! vanishes unless `J` is contained in `I`, the diagonal is `-beta_I`, and
//! the strictly subdiagonal entries are explicit in the crossover law.

use super::{dim, HypercubeDistribution, LocusSet, SubsetDistribution};

/// The normalized linkage vector `w_I` as a dense vector over genotypes.
pub fn linkage_vector(loci: usize, subset: LocusSet) -> Vec<f64> {
    let scale = (dim(loci) as f64).sqrt().recip();
    (0..dim(loci))
        .map(|idx| {
            // prod_{l in I} gamma^l = (-1)^(#(I minus idx))
            let minus_count = (subset & !idx).count_ones();
            if minus_count % 2 == 0 {
                scale
            } else {
                -scale
            }
        })
        .collect()
}

/// `<w_I, v>` without materializing the basis vector.
pub fn linkage_inner(v: &[f64], loci: usize, subset: LocusSet) -> f64 {
    let scale = (dim(loci) as f64).sqrt().recip();
    let mut acc = 0.0;
    for (idx, value) in v.iter().enumerate() {
        if (subset & !idx).count_ones() % 2 == 0 {
            acc += value;
        } else {
            acc -= value;
        }
    }
    scale * acc
}

/// Analytic entry `<w_I, grad R(x) w_J>` of the recombinator Jacobian:
///
/// `-1[I = J] beta_I + 1[J strictly inside I] sum_K nu(K) 2^(1+L/2)
///  <w_(I inter K), x> 1[I inter K^c = J]`,
///
/// with `beta_empty = -beta_full`. Entries with `J` not contained in `I`
/// are exactly zero.
pub fn recomb_jacobian_entry(
    x: &HypercubeDistribution,
    nu: &SubsetDistribution,
    row: LocusSet,
    col: LocusSet,
) -> f64 {
    assert_eq!(x.loci(), nu.loci());
    let loci = x.loci();
    if row == col {
        return -nu.beta_signed(row);
    }
    // J must be a strict subset of I for a nonzero entry.
    if col & !row != 0 {
        return 0.0;
    }
    let scale = 2.0 * (dim(loci) as f64).sqrt();
    let full = dim(loci) - 1;
    let mut acc = 0.0;
    for &(mask, mass) in nu.nontrivial_support() {
        if row & (full & !mask) == col {
            acc += mass * scale * linkage_inner(x.weights(), loci, row & mask);
        }
    }
    acc
}

/// The full `2^L x 2^L` Jacobian in the linkage basis, `out[I][J]`.
pub fn recomb_jacobian_matrix(x: &HypercubeDistribution, nu: &SubsetDistribution) -> Vec<Vec<f64>> {
    let n = dim(x.loci());
    (0..n)
        .map(|row| (0..n).map(|col| recomb_jacobian_entry(x, nu, row, col)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{nabla_recombinator_apply, recombinator_raw};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_distribution(loci: usize, rng: &mut impl Rng) -> HypercubeDistribution {
        let weights: Vec<f64> = (0..dim(loci)).map(|_| rng.random::<f64>() + 1e-3).collect();
        HypercubeDistribution::from_unnormalized(loci, weights).unwrap()
    }

    fn random_subset_law(loci: usize, rng: &mut impl Rng) -> SubsetDistribution {
        let raw: Vec<f64> = (0..dim(loci)).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        SubsetDistribution::new(loci, raw.into_iter().map(|m| m / total).collect()).unwrap()
    }

    /// Central finite difference of the raw recombinator along `w_J`,
    /// projected back on `w_I`. Step balances truncation and roundoff for
    /// O(1) entries.
    fn fd_jacobian_entry(
        x: &HypercubeDistribution,
        nu: &SubsetDistribution,
        row: LocusSet,
        col: LocusSet,
    ) -> f64 {
        let step = 1e-5;
        let loci = x.loci();
        let w_col = linkage_vector(loci, col);
        let plus: Vec<f64> = x
            .weights()
            .iter()
            .zip(&w_col)
            .map(|(v, w)| v + step * w)
            .collect();
        let minus: Vec<f64> = x
            .weights()
            .iter()
            .zip(&w_col)
            .map(|(v, w)| v - step * w)
            .collect();
        let diff: Vec<f64> = recombinator_raw(&plus, loci, nu)
            .iter()
            .zip(recombinator_raw(&minus, loci, nu))
            .map(|(p, m)| (p - m) / (2.0 * step))
            .collect();
        linkage_inner(&diff, loci, row)
    }

    #[test]
    fn linkage_vectors_are_orthonormal() {
        for loci in 1..=6usize {
            for a in 0..dim(loci) {
                for b in 0..dim(loci) {
                    let wa = linkage_vector(loci, a);
                    let dot = linkage_inner(&wa, loci, b);
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (dot - expected).abs() < 1e-12,
                        "L={loci} <w_{a}, w_{b}> = {dot}"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for loci in [2usize, 3] {
            let x = random_distribution(loci, &mut rng);
            let nu = random_subset_law(loci, &mut rng);
            for row in 0..dim(loci) {
                for col in 0..dim(loci) {
                    let analytic = recomb_jacobian_entry(&x, &nu, row, col);
                    let fd = fd_jacobian_entry(&x, &nu, row, col);
                    assert!(
                        (analytic - fd).abs() < 1e-6,
                        "L={loci} I={row:b} J={col:b}: {analytic} vs {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_is_minus_beta_and_triangular_entries_vanish() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let loci = 3usize;
        let x = random_distribution(loci, &mut rng);
        let nu = random_subset_law(loci, &mut rng);
        for set in 0..dim(loci) {
            let diag = recomb_jacobian_entry(&x, &nu, set, set);
            assert!((diag + nu.beta_signed(set)).abs() < 1e-12);
        }
        for row in 0..dim(loci) {
            for col in 0..dim(loci) {
                if col & !row != 0 {
                    assert_eq!(recomb_jacobian_entry(&x, &nu, row, col), 0.0);
                }
            }
        }
    }

    #[test]
    fn three_locus_recombinator_is_its_own_linearization() {
        // On three loci, R(x) = grad R(x) (x - pi(x)) exactly.
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..20 {
            let x = random_distribution(3, &mut rng);
            let nu = random_subset_law(3, &mut rng);
            let direct = recombinator_raw(x.weights(), 3, &nu);
            let pi = x.le_projection();
            let h: Vec<f64> = x
                .weights()
                .iter()
                .zip(pi.weights())
                .map(|(a, b)| a - b)
                .collect();
            let linearized = nabla_recombinator_apply(x.weights(), 3, &nu, &h);
            for (a, b) in direct.iter().zip(&linearized) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }
}
