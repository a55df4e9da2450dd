//! Exact operators on distributions over the genotype hypercube `{-1,+1}^L`.
//!
//! Everything here stores the full `2^L` weight vector, so `L` is capped at
//! [`MAX_EXACT_LOCI`]. This layer is the brute-force oracle for the rest of
//! the crate: the forward simulator and the mean-field solvers are checked
//! against these operators on small genomes.
//!
//! Genotypes and locus subsets are both encoded as little-endian bitmasks:
//! bit `l` of a genotype index is set iff the allele at locus `l` is `+1`,
//! and bit `l` of a subset mask is set iff locus `l` belongs to the subset.

mod dist;
mod genotype;
mod jacobian;
mod operators;
mod subsets;

pub use dist::HypercubeDistribution;
pub use genotype::{fitness, trait_value, Genotype};
pub use jacobian::{linkage_inner, linkage_vector, recomb_jacobian_entry, recomb_jacobian_matrix};
pub use operators::{
    mutator, nabla_recombinator_apply, recombinator, recombinator_raw, selector, selector_marginal,
};
pub use subsets::SubsetDistribution;

/// Hard cap on the exact-representation genome size (4096 coordinates).
pub const MAX_EXACT_LOCI: usize = 12;

/// Locus subsets on the exact layer, as bitmasks.
pub type LocusSet = usize;

/// Number of genotypes for `loci` loci.
#[inline]
pub(crate) fn dim(loci: usize) -> usize {
    1usize << loci
}

/// Gather the bits of `bits` that lie at the positions of `mask`, packed
/// into the low bits of the result (a software PEXT).
#[inline]
pub(crate) fn compress_bits(bits: usize, mask: usize) -> usize {
    let mut out = 0usize;
    let mut out_bit = 1usize;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if bits & low != 0 {
            out |= out_bit;
        }
        out_bit <<= 1;
        m &= m - 1;
    }
    out
}

/// Additive trait value of the genotype with index `idx`: the mean of its
/// `+/-1` alleles.
#[inline]
pub fn trait_of_index(idx: usize, loci: usize) -> f64 {
    let plus = (idx as u64).count_ones() as f64;
    (2.0 * plus - loci as f64) / loci as f64
}
