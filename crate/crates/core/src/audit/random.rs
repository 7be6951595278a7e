//! Seeded generators for random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entrenchment::{saturate, EntrenchmentOracle, GeneratorBase};
use crate::error::Result;
use crate::formula::{TruthMask, Vocabulary};
use crate::relation::Relation;

/// `k` generators with uniformly drawn sides, rendered as canonical formulas.
pub fn random_base(seed: u64, vocab: &Vocabulary, k: usize) -> GeneratorBase {
    let size = vocab.algebra().size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || TruthMask(rng.gen_range(0..size) as u32);
    let pairs: Vec<(TruthMask, TruthMask)> = (0..k).map(|_| (draw(), draw())).collect();
    GeneratorBase::from_masks(vocab.clone(), &pairs)
}

/// A connected partial entrenchment: a random linear extension of
/// entailment is cut into levels, ordered by level, then saturated.
pub fn random_connected_table(seed: u64, vocab: &Vocabulary) -> Result<EntrenchmentOracle> {
    let alg = vocab.algebra();
    alg.require_vars(crate::entrenchment::TABLE_MAX_VARS, "random connected table")?;
    let size = alg.size() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random topological order of the masks under entailment: a mask becomes
    // available once every mask with one model fewer has been placed.
    let mut placed = vec![false; size];
    let mut level = vec![0usize; size];
    let mut available: Vec<usize> = vec![0];
    let mut current = 0;
    let mut first = true;
    while !available.is_empty() {
        let pick = available.swap_remove(rng.gen_range(0..available.len()));
        placed[pick] = true;
        if !first && rng.gen_bool(0.5) {
            current += 1;
        }
        first = false;
        level[pick] = current;
        let bits = alg.valuations();
        for bit in 0..bits {
            let up = pick | 1 << bit;
            let ready = (0..bits).filter(|b| up >> b & 1 == 1).all(|b| placed[up & !(1 << b)]);
            if !placed[up] && ready && !available.contains(&up) {
                available.push(up);
            }
        }
    }
    let seed_relation = Relation::from_fn(size, |a, b| level[a.index()] <= level[b.index()]);
    saturate(vocab.clone(), seed_relation)
}
