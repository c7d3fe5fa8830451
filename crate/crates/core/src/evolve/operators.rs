//! Recombination and point mutation on the flat chromosome.

use rand::seq::index;
use rand::Rng;

use crate::genome::{Chromosome, Encoding};

/// One-point recombination: swaps every flat position `>= cut`.
///
/// Parents must share a layout; corresponding positions always belong to the
/// same region, so offspring stay valid.
pub fn crossover_at(a: &Chromosome, b: &Chromosome, cut: usize) -> (Chromosome, Chromosome) {
    let (mut x, mut y) = (a.clone(), b.clone());
    for (p, q) in x.slots_mut().zip(y.slots_mut()).skip(cut) {
        std::mem::swap(p, q);
    }
    (x, y)
}

/// With probability `rate`, recombines at a uniform cut in `1..len`;
/// otherwise returns copies. The flag reports whether recombination happened.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rate: f64,
    rng: &mut R,
) -> (Chromosome, Chromosome, bool) {
    let len = a.flat_len();
    if len >= 2 && rng.random_bool(rate) {
        let cut = rng.random_range(1..len);
        let (x, y) = crossover_at(a, b, cut);
        (x, y, true)
    } else {
        (a.clone(), b.clone(), false)
    }
}

/// With probability `rate`, replaces `k` distinct positions with another symbol
/// from the position's alphabet. The flag reports whether the chromosome changed.
pub fn mutate<R: Rng + ?Sized>(
    c: &Chromosome,
    encoding: &Encoding,
    rate: f64,
    k: usize,
    rng: &mut R,
) -> (Chromosome, bool) {
    let mut out = c.clone();
    if !rng.random_bool(rate) {
        return (out, false);
    }
    let len = out.flat_len();
    let mut changed = false;
    for pos in index::sample(rng, len, k.min(len)) {
        let (slot, region) = out.slot_mut(pos).expect("position within chromosome");
        let alphabet = encoding.alphabet(region);
        let replacement = match alphabet.iter().position(|s| s == slot) {
            Some(current) if alphabet.len() >= 2 => {
                let mut i = rng.random_range(0..alphabet.len() - 1);
                if i >= current {
                    i += 1;
                }
                alphabet[i]
            }
            _ => alphabet[rng.random_range(0..alphabet.len())],
        };
        changed |= *slot != replacement;
        *slot = replacement;
    }
    (out, changed)
}
