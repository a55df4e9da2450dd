use rand::Rng;

use crate::error::{Error, Result};
use crate::hypercube::Genotype;

/// The discrete population: `n` packed genomes of `loci` biallelic loci
/// (bit set = allele `+1`), plus a generation counter.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    genomes: Vec<u64>,
    n: usize,
    loci: usize,
    words: usize,
    generation: u64,
}

impl PopulationState {
    pub fn monomorphic(n: usize, loci: usize, plus: bool) -> Result<Self> {
        let mut state = PopulationState::empty(n, loci)?;
        if plus {
            let full_rows = state.genomes.len();
            state.genomes[..full_rows].fill(u64::MAX);
            state.trim_rows();
        }
        Ok(state)
    }

    /// Independent Bernoulli loci: `P(+1 at locus l) = freqs[l]` for every
    /// genome.
    pub fn from_frequencies(n: usize, freqs: &[f64], rng: &mut impl Rng) -> Result<Self> {
        if freqs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::config("initial frequencies must lie in [0, 1]"));
        }
        let mut state = PopulationState::empty(n, freqs.len())?;
        for i in 0..n {
            for (l, p) in freqs.iter().enumerate() {
                if rng.random::<f64>() < *p {
                    let row = i * state.words;
                    state.genomes[row + l / 64] |= 1 << (l % 64);
                }
            }
        }
        Ok(state)
    }

    fn empty(n: usize, loci: usize) -> Result<Self> {
        if n == 0 || loci == 0 {
            return Err(Error::config("population needs n >= 1 and L >= 1"));
        }
        let words = loci.div_ceil(64);
        Ok(PopulationState {
            genomes: vec![0; n * words],
            n,
            loci,
            words,
            generation: 0,
        })
    }

    fn trim_rows(&mut self) {
        let rem = self.loci % 64;
        if rem != 0 {
            let mask = (1u64 << rem) - 1;
            for i in 0..self.n {
                self.genomes[i * self.words + self.words - 1] &= mask;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loci(&self) -> usize {
        self.loci
    }

    pub fn words_per_genome(&self) -> usize {
        self.words
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub(crate) fn set_generation(&mut self, generation: u64) {
        self.generation = generation;
    }

    pub(crate) fn bump_generation(&mut self) {
        self.generation += 1;
    }

    #[inline]
    pub fn genome(&self, i: usize) -> &[u64] {
        &self.genomes[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn genomes_flat(&self) -> &[u64] {
        &self.genomes
    }

    pub(crate) fn genomes_flat_mut(&mut self) -> &mut Vec<u64> {
        &mut self.genomes
    }

    pub fn genotype(&self, i: usize) -> Genotype {
        let mut g = Genotype::all_minus(self.loci);
        for l in 0..self.loci {
            if self.genome(i)[l / 64] >> (l % 64) & 1 == 1 {
                g.set_allele(l, 1);
            }
        }
        g
    }

    /// Number of `+1` alleles in genome `i`.
    #[inline]
    pub fn plus_count(&self, i: usize) -> usize {
        self.genome(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Permute genome order (statistics must be invariant under this).
    pub fn permute(&mut self, order: &[usize]) {
        assert_eq!(order.len(), self.n);
        let mut shuffled = vec![0u64; self.genomes.len()];
        for (dst, &src) in order.iter().enumerate() {
            shuffled[dst * self.words..(dst + 1) * self.words]
                .copy_from_slice(self.genome(src));
        }
        self.genomes = shuffled;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn monomorphic_populations() {
        let plus = PopulationState::monomorphic(10, 70, true).unwrap();
        assert_eq!(plus.plus_count(3), 70);
        assert_eq!(plus.genotype(0).trait_value(), 1.0);
        let minus = PopulationState::monomorphic(10, 70, false).unwrap();
        assert_eq!(minus.plus_count(0), 0);
    }

    #[test]
    fn frequency_initialization_matches_targets() {
        let freqs = vec![0.2; 50];
        let state = PopulationState::from_frequencies(2000, &freqs, &mut stream_rng(8, 0)).unwrap();
        let mean: f64 = (0..state.n()).map(|i| state.plus_count(i) as f64).sum::<f64>()
            / (state.n() * state.loci()) as f64;
        assert!((mean - 0.2).abs() < 0.01, "mean {mean}");
        assert!(PopulationState::from_frequencies(5, &[1.5], &mut stream_rng(8, 0)).is_err());
    }
}
