use crate::error::{Error, Result};
use crate::params::FitnessSpec;

/// A haploid genome: `L` biallelic loci with alleles in `{-1,+1}`, packed
/// one bit per locus (bit set = `+1`), little-endian in the locus index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    words: Vec<u64>,
    loci: usize,
}

impl Genotype {
    pub fn all_minus(loci: usize) -> Self {
        assert!(loci >= 1, "genotype needs at least one locus");
        Genotype {
            words: vec![0; loci.div_ceil(64)],
            loci,
        }
    }

    pub fn all_plus(loci: usize) -> Self {
        let mut g = Genotype::all_minus(loci);
        for l in 0..loci {
            g.set_allele(l, 1);
        }
        g
    }

    pub fn from_alleles(alleles: &[i8]) -> Result<Self> {
        if alleles.is_empty() {
            return Err(Error::config("genotype needs at least one locus"));
        }
        let mut g = Genotype::all_minus(alleles.len());
        for (l, &a) in alleles.iter().enumerate() {
            match a {
                1 => g.set_allele(l, 1),
                -1 => {}
                other => {
                    return Err(Error::config(format!(
                        "allele at locus {l} is {other}, expected -1 or +1"
                    )))
                }
            }
        }
        Ok(g)
    }

    /// Genotype from its hypercube index (bit `l` of `idx` = allele `+1`).
    pub fn from_index(idx: usize, loci: usize) -> Self {
        assert!(loci >= 1 && loci < usize::BITS as usize && idx < (1usize << loci));
        let mut g = Genotype::all_minus(loci);
        g.words[0] = idx as u64;
        g
    }

    /// Hypercube index of this genotype; only valid for small genomes.
    pub fn to_index(&self) -> usize {
        assert!(self.loci <= super::MAX_EXACT_LOCI);
        self.words[0] as usize
    }

    pub fn loci(&self) -> usize {
        self.loci
    }

    #[inline]
    pub fn allele(&self, locus: usize) -> i8 {
        debug_assert!(locus < self.loci);
        if self.words[locus / 64] >> (locus % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn set_allele(&mut self, locus: usize, allele: i8) {
        debug_assert!(locus < self.loci);
        let (w, b) = (locus / 64, locus % 64);
        match allele {
            1 => self.words[w] |= 1 << b,
            -1 => self.words[w] &= !(1 << b),
            other => panic!("allele must be -1 or +1, got {other}"),
        }
    }

    /// Number of `+1` alleles.
    pub fn plus_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Additive trait value `Z(g)`: the mean allele, in `[-1, 1]`.
    pub fn trait_value(&self) -> f64 {
        (2.0 * self.plus_count() as f64 - self.loci as f64) / self.loci as f64
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Additive trait value of a genotype.
pub fn trait_value(g: &Genotype) -> f64 {
    g.trait_value()
}

/// Log-fitness `W(g) = U(Z(g))`.
pub fn fitness(g: &Genotype, spec: &FitnessSpec) -> f64 {
    spec.log_fitness(g.trait_value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trait_values() {
        assert_eq!(Genotype::all_plus(4).trait_value(), 1.0);
        assert_eq!(Genotype::all_minus(4).trait_value(), -1.0);
        let balanced = Genotype::from_alleles(&[1, 1, -1, -1]).unwrap();
        assert_eq!(balanced.trait_value(), 0.0);
    }

    #[test]
    fn fitness_values() {
        let quad = FitnessSpec::Quadratic {
            kappa: 15.0,
            z_star: 0.0,
        };
        // -kappa (1 - 0)^2, cross-checked by evaluating U at z = 1.
        assert_eq!(fitness(&Genotype::all_plus(4), &quad), -15.0);
        assert_eq!(quad.log_fitness(1.0), -15.0);

        // At the optimum the quadratic log-fitness vanishes.
        let at_opt = FitnessSpec::Quadratic {
            kappa: 7.0,
            z_star: 0.0,
        };
        let balanced = Genotype::from_alleles(&[1, -1, 1, -1]).unwrap();
        assert_eq!(fitness(&balanced, &at_opt), 0.0);

        let lin = FitnessSpec::Linear { beta: 2.0 };
        let g = Genotype::from_alleles(&[1, 1, 1, -1]).unwrap();
        assert_eq!(g.trait_value(), 0.5);
        assert_eq!(fitness(&g, &lin), 1.0);
    }

    #[test]
    fn index_round_trip_and_large_genomes() {
        for idx in 0..16usize {
            assert_eq!(Genotype::from_index(idx, 4).to_index(), idx);
        }
        let mut g = Genotype::all_minus(130);
        g.set_allele(0, 1);
        g.set_allele(129, 1);
        assert_eq!(g.plus_count(), 2);
        assert_eq!(g.allele(129), 1);
        assert_eq!(g.allele(64), -1);
        assert!(Genotype::from_alleles(&[1, 0, -1]).is_err());
    }
}
