use crate::error::{Error, Result};

use super::{compress_bits, dim, LocusSet, MAX_EXACT_LOCI};

const MASS_TOL: f64 = 1e-12;

/// A probability distribution on `{-1,+1}^L`, stored dense. The exact
/// engine behind every oracle in this crate; guarded to `L <= 12`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeDistribution {
    loci: usize,
    weights: Vec<f64>,
}

impl HypercubeDistribution {
    pub fn new(loci: usize, weights: Vec<f64>) -> Result<Self> {
        if loci == 0 || loci > MAX_EXACT_LOCI {
            return Err(Error::config(format!(
                "exact distributions require 1 <= L <= {MAX_EXACT_LOCI}, got {loci}"
            )));
        }
        if weights.len() != dim(loci) {
            return Err(Error::distribution(format!(
                "expected {} weights for L = {loci}, got {}",
                dim(loci),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::distribution(
                "weights must be finite and nonnegative",
            ));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::distribution(format!(
                "weights sum to {mass}, expected 1 within {MASS_TOL}"
            )));
        }
        Ok(HypercubeDistribution { loci, weights })
    }

    /// Normalize an arbitrary nonnegative weight vector.
    pub fn from_unnormalized(loci: usize, mut weights: Vec<f64>) -> Result<Self> {
        let mass: f64 = weights.iter().sum();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::distribution(format!("total mass {mass} not positive")));
        }
        for w in &mut weights {
            *w /= mass;
        }
        HypercubeDistribution::new(loci, weights)
    }

    pub fn uniform(loci: usize) -> Self {
        let n = dim(loci);
        HypercubeDistribution::new(loci, vec![1.0 / n as f64; n])
            .expect("uniform distribution is valid")
    }

    pub fn delta(loci: usize, genotype_index: usize) -> Self {
        let mut weights = vec![0.0; dim(loci)];
        weights[genotype_index] = 1.0;
        HypercubeDistribution::new(loci, weights).expect("point mass is valid")
    }

    /// The product measure with `P(+1 at locus l) = freqs[l]`.
    pub fn product_of_frequencies(freqs: &[f64]) -> Result<Self> {
        let loci = freqs.len();
        if freqs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::distribution("frequencies must lie in [0, 1]"));
        }
        let mut weights = vec![0.0; dim(loci)];
        for (idx, w) in weights.iter_mut().enumerate() {
            let mut prob = 1.0;
            for (l, p) in freqs.iter().enumerate() {
                prob *= if idx >> l & 1 == 1 { *p } else { 1.0 - *p };
            }
            *w = prob;
        }
        HypercubeDistribution::new(loci, weights)
    }

    pub fn loci(&self) -> usize {
        self.loci
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, genotype_index: usize) -> f64 {
        self.weights[genotype_index]
    }

    /// Expectation of `f(g)` where `f` sees the genotype index.
    pub fn expectation(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(idx, w)| w * f(idx))
            .sum()
    }

    /// Frequency of the `+1` allele at one locus.
    pub fn allele_frequency(&self, locus: usize) -> f64 {
        assert!(locus < self.loci);
        let bit = 1usize << locus;
        self.weights
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit != 0)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn allele_frequencies(&self) -> Vec<f64> {
        (0..self.loci).map(|l| self.allele_frequency(l)).collect()
    }

    /// Population mean of the additive trait.
    pub fn mean_trait(&self) -> f64 {
        self.expectation(|idx| super::trait_of_index(idx, self.loci))
    }

    /// Marginal on a nonempty locus subset, as a distribution over
    /// `{-1,+1}^A` indexed by the compressed bits of `subset`.
    pub fn marginal(&self, subset: LocusSet) -> Result<HypercubeDistribution> {
        if subset == 0 {
            return Err(Error::config("marginal onto the empty locus set"));
        }
        let full = dim(self.loci) - 1;
        if subset & !full != 0 {
            return Err(Error::config("subset mentions loci beyond L"));
        }
        let weights = marginal_raw(&self.weights, subset);
        HypercubeDistribution::new(subset.count_ones() as usize, weights)
    }

    /// Linkage-equilibrium projection: the product measure with the same
    /// one-dimensional marginals.
    pub fn le_projection(&self) -> HypercubeDistribution {
        HypercubeDistribution::product_of_frequencies(&self.allele_frequencies())
            .expect("marginal frequencies are valid")
    }

    /// Linkage disequilibrium between two distinct loci: the covariance of
    /// the `+1` indicators, in `[-1/4, 1/4]`.
    pub fn ld(&self, l1: usize, l2: usize) -> Result<f64> {
        if l1 == l2 {
            return Err(Error::config("linkage disequilibrium needs two distinct loci"));
        }
        assert!(l1 < self.loci && l2 < self.loci);
        let (b1, b2) = (1usize << l1, 1usize << l2);
        let p11: f64 = self
            .weights
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & b1 != 0 && idx & b2 != 0)
            .map(|(_, w)| w)
            .sum();
        Ok(p11 - self.allele_frequency(l1) * self.allele_frequency(l2))
    }

    /// `||x - pi(x)||_2`, the Euclidean distance to the LE manifold.
    pub fn le_deviation(&self) -> f64 {
        let pi = self.le_projection();
        self.weights
            .iter()
            .zip(pi.weights.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Marginal of an arbitrary vector over the hypercube onto `subset`
/// (bilinear in the vector; used by the operators on signed vectors too).
pub(crate) fn marginal_raw(v: &[f64], subset: LocusSet) -> Vec<f64> {
    let mut out = vec![0.0; 1usize << subset.count_ones()];
    for (idx, value) in v.iter().enumerate() {
        out[compress_bits(idx, subset)] += value;
    }
    out
}

/// Product vector `a^(A) (x) b^(A^c)` over the full hypercube, where `a` is
/// indexed by compressed bits of `subset` and `b` by compressed bits of the
/// complement.
pub(crate) fn product_embed(a: &[f64], b: &[f64], subset: LocusSet, loci: usize) -> Vec<f64> {
    let full = dim(loci) - 1;
    let co = full & !subset;
    (0..dim(loci))
        .map(|idx| a[compress_bits(idx, subset)] * b[compress_bits(idx, co)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(HypercubeDistribution::new(13, vec![0.0; 1 << 13]).is_err());
        assert!(HypercubeDistribution::new(2, vec![0.5, 0.5]).is_err());
        assert!(HypercubeDistribution::new(1, vec![0.6, 0.6]).is_err());
        assert!(HypercubeDistribution::new(1, vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn marginal_identity_and_uniform() {
        let x = HypercubeDistribution::product_of_frequencies(&[0.3, 0.7, 0.5]).unwrap();
        // Marginal onto all loci is the distribution itself.
        let m = x.marginal(0b111).unwrap();
        assert_eq!(m.weights(), x.weights());

        // Uniform marginalizes to uniform on any subset.
        let u = HypercubeDistribution::uniform(3);
        let mu = u.marginal(0b101).unwrap();
        for w in mu.weights() {
            assert!(close(*w, 0.25, 1e-15));
        }
        assert!(u.marginal(0).is_err());
    }

    #[test]
    fn marginal_of_product_is_product_of_factors() {
        let freqs = [0.2, 0.9, 0.4, 0.55];
        let x = HypercubeDistribution::product_of_frequencies(&freqs).unwrap();
        let m = x.marginal(0b1010).unwrap();
        let expected = HypercubeDistribution::product_of_frequencies(&[freqs[1], freqs[3]]).unwrap();
        for (a, b) in m.weights().iter().zip(expected.weights()) {
            assert!(close(*a, *b, 1e-15));
        }
    }

    #[test]
    fn le_projection_fixed_point_and_idempotence() {
        let product = HypercubeDistribution::product_of_frequencies(&[0.25, 0.8]).unwrap();
        let projected = product.le_projection();
        for (a, b) in projected.weights().iter().zip(product.weights()) {
            assert!(close(*a, *b, 1e-15));
        }

        // A correlated distribution projects onto the product of its marginals,
        // and the projection is idempotent.
        let x = HypercubeDistribution::new(2, vec![0.35, 0.15, 0.15, 0.35]).unwrap();
        let pi = x.le_projection();
        let pi2 = pi.le_projection();
        for (a, b) in pi.weights().iter().zip(pi2.weights()) {
            assert!(close(*a, *b, 1e-15));
        }
        // p1 = p2 = 1/2 with D = 0.1 projects to uniform.
        for w in pi.weights() {
            assert!(close(*w, 0.25, 1e-15));
        }
    }

    #[test]
    fn ld_values() {
        let product = HypercubeDistribution::product_of_frequencies(&[0.3, 0.6]).unwrap();
        assert!(close(product.ld(0, 1).unwrap(), 0.0, 1e-15));

        // Perfectly correlated pair at p = 1/2.
        let x = HypercubeDistribution::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(close(x.ld(0, 1).unwrap(), 0.25, 1e-15));
        assert!(x.ld(1, 1).is_err());
    }
}
