//! The three crossover-mask families and their summary statistics.
//!
//! A mask is the locus subset `J` that receives parent-1 material (the
//! complement comes from parent 2). Loci sit at positions
//! `(l+1)/(L+1)` on `[0, 1]`. Sampled masks are complemented with a fair
//! coin so the sampled law always matches the symmetrized `nu`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::hypercube::{SubsetDistribution, MAX_EXACT_LOCI};

use super::density::TabulatedDensity;

#[derive(Debug, Clone)]
pub enum RecombKind {
    /// Every subset of loci equally likely.
    Free,
    /// One crossover point drawn from a density on `[0, 1]`; the mask is
    /// the prefix of loci left of the point.
    SingleCrossover { crossover: TabulatedDensity },
    /// A Poisson point process of crossovers with the given intensity
    /// density and total mass `lambda`; the mask alternates between the
    /// points.
    PoissonCrossover {
        intensity: TabulatedDensity,
        lambda: f64,
    },
}

#[derive(Debug, Clone)]
pub struct RecombinationModel {
    kind: RecombKind,
    loci: usize,
}

/// Harmonic recombination summaries: `per_locus[l]` is the harmonic mean of
/// the pairwise rates seen from locus `l`, and `genome` their harmonic mean
/// along the genome.
#[derive(Debug, Clone)]
pub struct HarmonicStats {
    pub per_locus: Vec<f64>,
    pub genome: f64,
}

/// Strong-recombination diagnostics reported (not enforced) with runs.
#[derive(Debug, Clone, Copy)]
pub struct ScalingDiagnostics {
    /// `rho * r**`.
    pub rho_r_genome: f64,
    /// Initial-layer width `1 / sqrt(rho r**)`.
    pub epsilon: f64,
    /// `rho r** / (L^2 ln rho)`; the mean-field theorem wants this large.
    pub theorem_ratio: f64,
}

impl RecombinationModel {
    pub fn free(loci: usize) -> Result<Self> {
        Self::new(RecombKind::Free, loci)
    }

    pub fn single_crossover(loci: usize, crossover: TabulatedDensity) -> Result<Self> {
        Self::new(RecombKind::SingleCrossover { crossover }, loci)
    }

    pub fn single_uniform(loci: usize) -> Result<Self> {
        Self::single_crossover(loci, TabulatedDensity::uniform())
    }

    pub fn poisson_crossover(
        loci: usize,
        intensity: TabulatedDensity,
        lambda: f64,
    ) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::config("Poisson crossover intensity mass must be > 0"));
        }
        Self::new(RecombKind::PoissonCrossover { intensity, lambda }, loci)
    }

    pub fn poisson_uniform(loci: usize, lambda: f64) -> Result<Self> {
        Self::poisson_crossover(loci, TabulatedDensity::uniform(), lambda)
    }

    fn new(kind: RecombKind, loci: usize) -> Result<Self> {
        if loci < 1 {
            return Err(Error::config("recombination model needs at least one locus"));
        }
        Ok(RecombinationModel { kind, loci })
    }

    pub fn kind(&self) -> &RecombKind {
        &self.kind
    }

    pub fn loci(&self) -> usize {
        self.loci
    }

    pub fn words_per_mask(&self) -> usize {
        self.loci.div_ceil(64)
    }

    /// Position of locus `l` (0-indexed) along the chromosome.
    #[inline]
    pub fn locus_position(&self, l: usize) -> f64 {
        (l as f64 + 1.0) / (self.loci as f64 + 1.0)
    }

    /// Sample a mask into `words` (one bit per locus, bits beyond `L`
    /// cleared).
    pub fn sample_mask_into(&self, words: &mut [u64], rng: &mut impl Rng) {
        debug_assert_eq!(words.len(), self.words_per_mask());
        match &self.kind {
            RecombKind::Free => {
                for w in words.iter_mut() {
                    *w = rng.random();
                }
                trim_mask(words, self.loci);
                // Already complement-symmetric; no coin needed.
            }
            RecombKind::SingleCrossover { crossover } => {
                let x = crossover.sample(rng);
                // J = { l : (l+1)/(L+1) <= x }, a prefix of k loci.
                let k = ((x * (self.loci as f64 + 1.0)) as usize).min(self.loci);
                write_prefix(words, k);
                if rng.random::<bool>() {
                    complement_mask(words, self.loci);
                }
            }
            RecombKind::PoissonCrossover { intensity, lambda } => {
                let count = Poisson::new(*lambda).expect("validated lambda").sample(rng) as usize;
                let mut points: Vec<f64> = (0..count).map(|_| intensity.sample(rng)).collect();
                points.sort_by(f64::total_cmp);
                // Locus l joins the mask iff an even number of points lie
                // at or before its position.
                words.iter_mut().for_each(|w| *w = 0);
                let mut next_point = 0usize;
                let mut parity_even = true;
                for l in 0..self.loci {
                    let u = self.locus_position(l);
                    while next_point < points.len() && points[next_point] <= u {
                        parity_even = !parity_even;
                        next_point += 1;
                    }
                    if parity_even {
                        words[l / 64] |= 1 << (l % 64);
                    }
                }
                if rng.random::<bool>() {
                    complement_mask(words, self.loci);
                }
            }
        }
    }

    pub fn sample_mask(&self, rng: &mut impl Rng) -> Vec<u64> {
        let mut words = vec![0u64; self.words_per_mask()];
        self.sample_mask_into(&mut words, rng);
        words
    }

    /// Probability that the mask separates two distinct loci.
    pub fn pairwise_r(&self, l1: usize, l2: usize) -> Result<f64> {
        if l1 == l2 {
            return Err(Error::config("pairwise rate needs two distinct loci"));
        }
        if l1 >= self.loci || l2 >= self.loci {
            return Err(Error::config("locus index out of range"));
        }
        let (a, b) = (
            self.locus_position(l1.min(l2)),
            self.locus_position(l1.max(l2)),
        );
        Ok(match &self.kind {
            RecombKind::Free => 0.5,
            RecombKind::SingleCrossover { crossover } => crossover.mass_between(a, b),
            RecombKind::PoissonCrossover { intensity, lambda } => {
                // The pair splits iff the count between the loci is odd.
                let expected = lambda * intensity.mass_between(a, b);
                0.5 * (1.0 - (-2.0 * expected).exp())
            }
        })
    }

    /// Harmonic recombination rate at each locus and its genome average.
    pub fn harmonic_stats(&self) -> Result<HarmonicStats> {
        if self.loci < 2 {
            return Err(Error::config("harmonic statistics need at least two loci"));
        }
        let mut per_locus = Vec::with_capacity(self.loci);
        for l0 in 0..self.loci {
            let mut inv_sum = 0.0;
            for l1 in 0..self.loci {
                if l1 == l0 {
                    continue;
                }
                let r = self.pairwise_r(l0, l1)?;
                if !(r > 0.0) {
                    return Err(Error::Degenerate(format!(
                        "pairwise recombination rate between loci {l0} and {l1} is zero"
                    )));
                }
                inv_sum += 1.0 / r;
            }
            per_locus.push((self.loci as f64 - 1.0) / inv_sum);
        }
        let genome =
            self.loci as f64 / per_locus.iter().map(|r| 1.0 / r).sum::<f64>();
        Ok(HarmonicStats { per_locus, genome })
    }

    /// Probability of a recombination event strictly inside a set of loci
    /// (sorted, distinct indices).
    pub fn beta_subset(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::config("beta is defined for nonempty subsets"));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) || *subset.last().unwrap() >= self.loci {
            return Err(Error::config("subset must be sorted, distinct, in range"));
        }
        Ok(match &self.kind {
            RecombKind::Free => 1.0 - (2.0f64).powi(1 - subset.len() as i32),
            RecombKind::SingleCrossover { crossover } => {
                // A prefix mask splits I iff the crossover lands between
                // I's extreme loci.
                let a = self.locus_position(subset[0]);
                let b = self.locus_position(*subset.last().unwrap());
                crossover.mass_between(a, b)
            }
            RecombKind::PoissonCrossover { intensity, lambda } => {
                // No internal recombination iff every consecutive gap
                // inside I holds an even count (the segment before the
                // first locus cancels after symmetrization).
                let mut no_split = 1.0;
                for pair in subset.windows(2) {
                    let gap = lambda
                        * intensity
                            .mass_between(self.locus_position(pair[0]), self.locus_position(pair[1]));
                    no_split *= 0.5 * (1.0 + (-2.0 * gap).exp());
                }
                1.0 - no_split
            }
        })
    }

    /// The explicit (symmetrized) subset law, for the exact operators.
    pub fn subset_law(&self) -> Result<SubsetDistribution> {
        let loci = self.loci;
        if loci > MAX_EXACT_LOCI {
            return Err(Error::config(format!(
                "explicit subset law requires L <= {MAX_EXACT_LOCI}"
            )));
        }
        let n = 1usize << loci;
        let mass = match &self.kind {
            RecombKind::Free => vec![1.0 / n as f64; n],
            RecombKind::SingleCrossover { crossover } => {
                let mut mass = vec![0.0; n];
                for k in 0..=loci {
                    let lo = k as f64 / (loci as f64 + 1.0);
                    let hi = if k == loci {
                        1.0
                    } else {
                        (k as f64 + 1.0) / (loci as f64 + 1.0)
                    };
                    let prefix = (1usize << k) - 1;
                    mass[prefix] += crossover.mass_between(lo, hi);
                }
                mass
            }
            RecombKind::PoissonCrossover { intensity, lambda } => {
                // Exact parity-product law: the count in each inter-locus
                // segment is independently Poisson, and the mask bit at l
                // records the parity of the count before position u_l.
                let mut gap_even = Vec::with_capacity(loci);
                let mut prev = 0.0;
                for l in 0..loci {
                    let u = self.locus_position(l);
                    let gap = lambda * intensity.mass_between(prev, u);
                    gap_even.push(0.5 * (1.0 + (-2.0 * gap).exp()));
                    prev = u;
                }
                let mut mass = vec![0.0; n];
                for (set, m) in mass.iter_mut().enumerate() {
                    let mut prob = 1.0;
                    let mut prev_in = true; // parity even before any point
                    for (l, even) in gap_even.iter().enumerate() {
                        let now_in = set >> l & 1 == 1;
                        prob *= if now_in == prev_in { *even } else { 1.0 - *even };
                        prev_in = now_in;
                    }
                    *m = prob;
                }
                mass
            }
        };
        SubsetDistribution::new(loci, mass)
    }

    pub fn scaling_diagnostics(&self, rho: f64) -> Result<ScalingDiagnostics> {
        let stats = self.harmonic_stats()?;
        let rho_r = rho * stats.genome;
        let l2 = (self.loci * self.loci) as f64;
        Ok(ScalingDiagnostics {
            rho_r_genome: rho_r,
            epsilon: if rho_r > 0.0 { rho_r.sqrt().recip() } else { f64::INFINITY },
            theorem_ratio: if rho > 1.0 { rho_r / (l2 * rho.ln()) } else { f64::NAN },
        })
    }
}

#[inline]
fn trim_mask(words: &mut [u64], loci: usize) {
    let rem = loci % 64;
    if rem != 0 {
        *words.last_mut().unwrap() &= (1u64 << rem) - 1;
    }
}

#[inline]
fn write_prefix(words: &mut [u64], k: usize) {
    for (i, w) in words.iter_mut().enumerate() {
        let lo = i * 64;
        *w = if k >= lo + 64 {
            u64::MAX
        } else if k > lo {
            (1u64 << (k - lo)) - 1
        } else {
            0
        };
    }
}

#[inline]
fn complement_mask(words: &mut [u64], loci: usize) {
    for w in words.iter_mut() {
        *w = !*w;
    }
    trim_mask(words, loci);
}

/// Test whether locus `l` is in the mask.
#[inline]
pub fn mask_contains(words: &[u64], l: usize) -> bool {
    words[l / 64] >> (l % 64) & 1 == 1
}
