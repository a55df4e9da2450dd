//! Per-generation population statistics: allele frequencies and their
//! histogram, trait moments, sampled linkage disequilibrium, and sampled
//! three-locus LE-deviation norms.

use rand::seq::index;
use rand::Rng;

use super::population::PopulationState;

/// Locus pairs and triples fixed once per run and reused at every record,
/// so diagnostics cost stays roughly linear in `L`.
#[derive(Debug, Clone, Default)]
pub struct SampledSets {
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<[usize; 3]>,
}

pub fn sample_stat_sets(
    loci: usize,
    max_pairs: usize,
    max_triples: usize,
    rng: &mut impl Rng,
) -> SampledSets {
    let mut sets = SampledSets::default();
    if loci >= 2 {
        for _ in 0..max_pairs {
            let picked = index::sample(rng, loci, 2);
            sets.pairs.push((picked.index(0), picked.index(1)));
        }
    }
    if loci >= 3 {
        for _ in 0..max_triples {
            let picked = index::sample(rng, loci, 3);
            sets.triples
                .push([picked.index(0), picked.index(1), picked.index(2)]);
        }
    }
    sets
}

/// All pairs, for exact small-`L` identities.
pub fn all_pairs(loci: usize) -> SampledSets {
    let mut sets = SampledSets::default();
    for a in 0..loci {
        for b in (a + 1)..loci {
            sets.pairs.push((a, b));
        }
    }
    sets
}

#[derive(Debug, Clone)]
pub struct StatBundle {
    /// `p^l` for every locus.
    pub freqs: Vec<f64>,
    /// Histogram of the allele frequencies (fractions over `bins` equal
    /// cells of `[0, 1]`).
    pub histogram: Vec<f64>,
    pub trait_mean: f64,
    /// Population variance of the trait (divisor `n`).
    pub trait_var: f64,
    /// Mean over loci of the heterozygosity `2 p (1 - p)`.
    pub het_mean: f64,
    /// Sampled pairwise linkage disequilibria.
    pub ld: Vec<(usize, usize, f64)>,
    pub mean_abs_ld: f64,
    /// Sampled three-locus deviations `||x^A - pi(x^A)||_2`.
    pub le_dev: Vec<([usize; 3], f64)>,
    pub mean_le_dev: f64,
}

#[inline]
fn get_bit(row: &[u64], l: usize) -> usize {
    (row[l / 64] >> (l % 64) & 1) as usize
}

pub fn population_stats(state: &PopulationState, sets: &SampledSets, bins: usize) -> StatBundle {
    let n = state.n();
    let loci = state.loci();
    let inv_n = 1.0 / n as f64;

    // Per-locus counts in one sweep over set bits.
    let mut counts = vec![0usize; loci];
    let words = state.words_per_genome();
    for i in 0..n {
        let row = state.genome(i);
        for w in 0..words {
            let mut bits = row[w];
            while bits != 0 {
                counts[w * 64 + bits.trailing_zeros() as usize] += 1;
                bits &= bits - 1;
            }
        }
    }
    let freqs: Vec<f64> = counts.iter().map(|c| *c as f64 * inv_n).collect();

    let bins = bins.max(1);
    let mut histogram = vec![0.0; bins];
    for p in &freqs {
        let b = ((p * bins as f64) as usize).min(bins - 1);
        histogram[b] += 1.0 / loci as f64;
    }

    let het_mean =
        freqs.iter().map(|p| 2.0 * p * (1.0 - p)).sum::<f64>() / loci as f64;

    // Trait moments from integer plus-counts (exactly order-invariant).
    let mut sum_c = 0u64;
    let mut sum_c2 = 0u64;
    for i in 0..n {
        let c = state.plus_count(i) as u64;
        sum_c += c;
        sum_c2 += c * c;
    }
    let l_f = loci as f64;
    let mean_c = sum_c as f64 * inv_n;
    let var_c = (sum_c2 as f64 * inv_n - mean_c * mean_c).max(0.0);
    let mean = (2.0 * mean_c - l_f) / l_f;
    let trait_var = 4.0 * var_c / (l_f * l_f);

    // Sampled pairwise LD from joint counts.
    let mut ld = Vec::with_capacity(sets.pairs.len());
    let mut abs_sum = 0.0;
    for &(a, b) in &sets.pairs {
        let mut n11 = 0usize;
        for i in 0..n {
            let row = state.genome(i);
            n11 += get_bit(row, a) & get_bit(row, b);
        }
        let d = n11 as f64 * inv_n - freqs[a] * freqs[b];
        abs_sum += d.abs();
        ld.push((a, b, d));
    }
    let mean_abs_ld = if ld.is_empty() { 0.0 } else { abs_sum / ld.len() as f64 };

    // Sampled triples: empirical 8-cell tables vs their product form.
    let mut le_dev = Vec::with_capacity(sets.triples.len());
    let mut dev_sum = 0.0;
    for &tri in &sets.triples {
        let mut cell_counts = [0usize; 8];
        for i in 0..n {
            let row = state.genome(i);
            let idx =
                get_bit(row, tri[0]) | get_bit(row, tri[1]) << 1 | get_bit(row, tri[2]) << 2;
            cell_counts[idx] += 1;
        }
        let cells = cell_counts.map(|c| c as f64 * inv_n);
        let p = [freqs[tri[0]], freqs[tri[1]], freqs[tri[2]]];
        let mut sq = 0.0;
        for (idx, cell) in cells.iter().enumerate() {
            let mut product = 1.0;
            for (l, pl) in p.iter().enumerate() {
                product *= if idx >> l & 1 == 1 { *pl } else { 1.0 - *pl };
            }
            sq += (cell - product) * (cell - product);
        }
        let dev = sq.sqrt();
        dev_sum += dev;
        le_dev.push((tri, dev));
    }
    let mean_le_dev = if le_dev.is_empty() {
        0.0
    } else {
        dev_sum / le_dev.len() as f64
    };

    StatBundle {
        freqs,
        histogram,
        trait_mean: mean,
        trait_var,
        het_mean,
        ld,
        mean_abs_ld,
        le_dev,
        mean_le_dev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn monomorphic_statistics_are_degenerate() {
        let state = PopulationState::monomorphic(40, 16, true).unwrap();
        let sets = all_pairs(16);
        let stats = population_stats(&state, &sets, 10);
        assert!(stats.freqs.iter().all(|p| *p == 1.0));
        assert_eq!(stats.trait_mean, 1.0);
        assert_eq!(stats.trait_var, 0.0);
        assert!(stats.ld.iter().all(|(_, _, d)| *d == 0.0));
        assert_eq!(stats.histogram.last().copied().unwrap(), 1.0);
    }

    #[test]
    fn perfectly_correlated_halves_have_quarter_ld() {
        let mut state = PopulationState::monomorphic(40, 2, false).unwrap();
        {
            let flat = state.genomes_flat_mut();
            for i in 20..40 {
                flat[i] = 0b11;
            }
        }
        let stats = population_stats(&state, &all_pairs(2), 4);
        assert_eq!(stats.ld[0].2, 0.25);
        assert_eq!(stats.trait_mean, 0.0);
        assert_eq!(stats.trait_var, 1.0);
    }

    #[test]
    fn trait_variance_decomposes_into_heterozygosity_and_ld() {
        // L Var[Z] = 4 mean(p(1-p)) + (4/L) sum_{l1 != l2} D / L, exactly,
        // when D runs over all ordered pairs.
        let mut rng = stream_rng(13, 0);
        let loci = 12usize;
        let state =
            PopulationState::from_frequencies(300, &vec![0.4; loci], &mut rng).unwrap();
        let stats = population_stats(&state, &all_pairs(loci), 10);
        let ld_sum: f64 = stats.ld.iter().map(|(_, _, d)| d).sum();
        // Unordered pairs stored once; ordered sum doubles them.
        let lhs = loci as f64 * stats.trait_var;
        let rhs = 2.0 * stats.het_mean + 8.0 * ld_sum / loci as f64;
        assert!(
            (lhs - rhs).abs() < 1e-10,
            "identity violated: {lhs} vs {rhs}"
        );
    }

    #[test]
    fn statistics_are_exchangeable() {
        let mut rng = stream_rng(14, 0);
        let loci = 9usize;
        let mut state =
            PopulationState::from_frequencies(120, &vec![0.3; loci], &mut rng).unwrap();
        let sets = sample_stat_sets(loci, 20, 10, &mut rng);
        let before = population_stats(&state, &sets, 8);
        let mut order: Vec<usize> = (0..120).collect();
        order.reverse();
        state.permute(&order);
        let after = population_stats(&state, &sets, 8);
        assert_eq!(before.freqs, after.freqs);
        assert_eq!(before.trait_var, after.trait_var);
        assert_eq!(before.mean_abs_ld, after.mean_abs_ld);
        assert_eq!(before.mean_le_dev, after.mean_le_dev);
    }
}
