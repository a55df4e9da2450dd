//! One Wright-Fisher generation: fitness-proportional parent sampling,
//! recombination by crossover mask, then per-locus mutation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::FitnessSpec;

use super::config::SimConfig;
use super::population::PopulationState;

/// Scratch buffers reused across generations.
pub(crate) struct StepBuffers {
    cumulative: Vec<f64>,
    next: Vec<u64>,
    mask: Vec<u64>,
    flips: Vec<u64>,
}

impl StepBuffers {
    pub(crate) fn new(state: &PopulationState) -> Self {
        let words = state.words_per_genome();
        StepBuffers {
            cumulative: vec![0.0; state.n()],
            next: vec![0; state.n() * words],
            mask: vec![0; words],
            flips: vec![0; words],
        }
    }
}

/// Cumulative sampling weights `exp((L/N)(W - max W))`; errors on
/// non-finite weights or total collapse.
fn fill_cumulative_weights(
    state: &PopulationState,
    spec: &FitnessSpec,
    cumulative: &mut [f64],
) -> Result<f64> {
    let n = state.n() as f64;
    let loci = state.loci() as f64;
    let scale = loci / n;
    let mut raw = vec![0.0; state.n()];
    let mut max_w = f64::NEG_INFINITY;
    for (i, value) in raw.iter_mut().enumerate() {
        let z = (2.0 * state.plus_count(i) as f64 - loci) / loci;
        let w = spec.log_fitness(z);
        if !w.is_finite() {
            return Err(Error::Numerical(format!("non-finite log-fitness {w}")));
        }
        *value = w;
        max_w = max_w.max(w);
    }
    let mut acc = 0.0;
    for (c, w) in cumulative.iter_mut().zip(&raw) {
        acc += (scale * (w - max_w)).exp();
        *c = acc;
    }
    if !(acc > 0.0) || !acc.is_finite() {
        return Err(Error::Numerical(format!(
            "fitness weights degenerate (total = {acc})"
        )));
    }
    Ok(acc)
}

#[inline]
fn pick_parent(cumulative: &[f64], total: f64, rng: &mut impl Rng) -> usize {
    let u = rng.random::<f64>() * total;
    cumulative
        .partition_point(|c| *c <= u)
        .min(cumulative.len() - 1)
}

/// Flip candidate loci at per-locus probability `p`, restricted to loci
/// whose current allele state equals `flip_if_set`; flips accumulate as
/// XOR bits so both directions can be marked against the pre-mutation
/// genome before applying.
#[inline]
fn mark_mutations(
    child: &[u64],
    flips: &mut [u64],
    loci: usize,
    p: f64,
    flip_if_set: bool,
    rng: &mut impl Rng,
) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for l in 0..loci {
            let is_set = child[l / 64] >> (l % 64) & 1 == 1;
            if is_set == flip_if_set {
                flips[l / 64] |= 1 << (l % 64);
            }
        }
        return;
    }
    // Geometric skipping between candidate positions.
    let log1m = (-p).ln_1p();
    let mut pos = ((1.0 - rng.random::<f64>()).ln() / log1m) as usize;
    while pos < loci {
        let is_set = child[pos / 64] >> (pos % 64) & 1 == 1;
        if is_set == flip_if_set {
            flips[pos / 64] |= 1 << (pos % 64);
        }
        pos += 1 + ((1.0 - rng.random::<f64>()).ln() / log1m) as usize;
    }
}

pub(crate) fn step_with_buffers(
    state: &mut PopulationState,
    cfg: &SimConfig,
    rng: &mut impl Rng,
    buffers: &mut StepBuffers,
) -> Result<()> {
    let n = state.n();
    let words = state.words_per_genome();
    let loci = state.loci();

    let neutral = cfg.fitness.is_neutral();
    let total = if neutral {
        0.0
    } else {
        fill_cumulative_weights(state, &cfg.fitness, &mut buffers.cumulative)?
    };

    let recomb_prob = cfg.rho / n as f64;
    let p_plus = cfg.mutation.theta_plus / n as f64;
    let p_minus = cfg.mutation.theta_minus / n as f64;

    for i in 0..n {
        let (p1, p2) = if neutral {
            (rng.random_range(0..n), rng.random_range(0..n))
        } else {
            (
                pick_parent(&buffers.cumulative, total, rng),
                pick_parent(&buffers.cumulative, total, rng),
            )
        };

        let child_row = &mut buffers.next[i * words..(i + 1) * words];
        if recomb_prob > 0.0 && rng.random::<f64>() < recomb_prob {
            cfg.recomb.sample_mask_into(&mut buffers.mask, rng);
            let g1 = state.genome(p1);
            let g2 = state.genome(p2);
            for w in 0..words {
                child_row[w] = (g1[w] & buffers.mask[w]) | (g2[w] & !buffers.mask[w]);
            }
            // Loci beyond L stay clear because both parents are clear there.
        } else {
            let parent = if rng.random::<bool>() { p1 } else { p2 };
            child_row.copy_from_slice(state.genome(parent));
        }

        if p_plus > 0.0 || p_minus > 0.0 {
            buffers.flips.iter_mut().for_each(|w| *w = 0);
            mark_mutations(child_row, &mut buffers.flips, loci, p_plus, false, rng);
            mark_mutations(child_row, &mut buffers.flips, loci, p_minus, true, rng);
            for (c, f) in child_row.iter_mut().zip(&buffers.flips) {
                *c ^= f;
            }
        }
    }

    std::mem::swap(state.genomes_flat_mut(), &mut buffers.next);
    state.bump_generation();
    Ok(())
}

/// Advance the population by one generation (the convenience form; the run
/// loop reuses buffers internally).
pub fn step_generation(
    state: &PopulationState,
    cfg: &SimConfig,
    rng: &mut impl Rng,
) -> Result<PopulationState> {
    cfg.validate()?;
    let mut next = state.clone();
    let mut buffers = StepBuffers::new(state);
    step_with_buffers(&mut next, cfg, rng, &mut buffers)?;
    Ok(next)
}
