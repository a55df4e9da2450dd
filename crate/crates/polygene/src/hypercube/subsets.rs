use crate::error::{Error, Result};

use super::{dim, LocusSet, MAX_EXACT_LOCI};

/// The crossover-mask law: a probability distribution over subsets of the
/// locus set, symmetrized on ingestion so that `nu(I) = nu(I^c)` always
/// holds (the recombinator only sees the symmetrized law).
#[derive(Debug, Clone)]
pub struct SubsetDistribution {
    loci: usize,
    mass: Vec<f64>,
    /// Cached nontrivial support (neither empty nor full), for the operators.
    support: Vec<(LocusSet, f64)>,
}

impl SubsetDistribution {
    pub fn new(loci: usize, raw_mass: Vec<f64>) -> Result<Self> {
        if loci == 0 || loci > MAX_EXACT_LOCI {
            return Err(Error::config(format!(
                "subset distributions require 1 <= L <= {MAX_EXACT_LOCI}, got {loci}"
            )));
        }
        let n = dim(loci);
        if raw_mass.len() != n {
            return Err(Error::distribution(format!(
                "expected {n} subset masses, got {}",
                raw_mass.len()
            )));
        }
        if raw_mass.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::distribution(
                "subset masses must be finite and nonnegative",
            ));
        }
        let total: f64 = raw_mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::distribution(format!(
                "subset masses sum to {total}, expected 1"
            )));
        }
        let full = n - 1;
        let mut mass = vec![0.0; n];
        for (set, m) in raw_mass.iter().enumerate() {
            let half = 0.5 * m / total;
            mass[set] += half;
            mass[full & !set] += half;
        }
        let support: Vec<(LocusSet, f64)> = mass
            .iter()
            .enumerate()
            .filter(|&(set, m)| *m > 0.0 && set != 0 && set != full)
            .map(|(set, m)| (set, *m))
            .collect();
        if support.is_empty() {
            log::warn!("crossover law has mass only on the trivial subsets; recombination is a no-op");
        }
        Ok(SubsetDistribution { loci, mass, support })
    }

    /// Free recombination: every subset equally likely.
    pub fn free(loci: usize) -> Result<Self> {
        let n = dim(loci);
        SubsetDistribution::new(loci, vec![1.0 / n as f64; n])
    }

    pub fn loci(&self) -> usize {
        self.loci
    }

    pub fn mass(&self, set: LocusSet) -> f64 {
        self.mass[set]
    }

    /// Subsets with positive mass, excluding the empty and full sets
    /// (which the recombinator ignores).
    pub fn nontrivial_support(&self) -> &[(LocusSet, f64)] {
        &self.support
    }

    pub fn is_degenerate(&self) -> bool {
        self.support.is_empty()
    }

    /// Marginal law of the random mask intersected with `subset`, indexed
    /// by compressed bits of `subset`.
    pub fn marginal_onto(&self, subset: LocusSet) -> Vec<f64> {
        super::dist::marginal_raw(&self.mass, subset)
    }

    /// Probability of a recombination event strictly inside the nonempty
    /// subset `I`: `beta_I = 1 - 2 nu^I(I)`.
    pub fn beta(&self, subset: LocusSet) -> f64 {
        assert!(subset != 0, "beta is defined for nonempty subsets");
        let marg = self.marginal_onto(subset);
        1.0 - 2.0 * marg[marg.len() - 1]
    }

    /// `beta` extended to the empty set by `beta_empty = -beta_full`,
    /// the convention under which the recombinator Jacobian diagonal is
    /// `-beta` for every subset.
    pub fn beta_signed(&self, subset: LocusSet) -> f64 {
        if subset == 0 {
            -self.beta(dim(self.loci) - 1)
        } else {
            self.beta(subset)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_on_ingest() {
        // All mass on {0}; symmetrization moves half to its complement.
        let mut raw = vec![0.0; 8];
        raw[0b001] = 1.0;
        let nu = SubsetDistribution::new(3, raw).unwrap();
        assert_eq!(nu.mass(0b001), 0.5);
        assert_eq!(nu.mass(0b110), 0.5);
        for set in 0..8usize {
            assert_eq!(nu.mass(set), nu.mass(0b111 & !set));
        }
    }

    #[test]
    fn free_betas() {
        let nu = SubsetDistribution::free(4).unwrap();
        // Singletons never see an internal recombination.
        assert!((nu.beta(0b0001)).abs() < 1e-15);
        // Pairs split with probability 1/2 under free recombination.
        assert!((nu.beta(0b0011) - 0.5).abs() < 1e-15);
        // 1 - 2^(1-k) in general.
        assert!((nu.beta(0b0111) - 0.75).abs() < 1e-15);
        assert!((nu.beta(0b1111) - 0.875).abs() < 1e-15);
        assert_eq!(nu.beta_signed(0), -nu.beta(0b1111));
    }

    #[test]
    fn beta_is_monotone_under_inclusion() {
        let nu = SubsetDistribution::free(5).unwrap();
        for set in 1usize..32 {
            for l in 0..5 {
                let smaller = set & !(1 << l);
                if smaller != 0 && smaller != set {
                    assert!(nu.beta(set) >= nu.beta(smaller) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn degenerate_law_detected() {
        let mut raw = vec![0.0; 4];
        raw[0b00] = 0.5;
        raw[0b11] = 0.5;
        let nu = SubsetDistribution::new(2, raw).unwrap();
        assert!(nu.is_degenerate());
    }
}
