//! Seeded random corpus of small monoids meeting the rank-2 hypotheses.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::green::GreenStructure;
use crate::monoid::{generate_closure, FiniteMonoid};
use crate::rank2::rank2_class;
use crate::transformation::Transformation;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const CLOSURE_CAP: usize = 500;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub generators: Vec<Transformation>,
    pub monoid: FiniteMonoid,
}

/// An idempotent of rank 2 fixing `a` and `b`.
fn rank2_idempotent(n: usize, rng: &mut ChaCha8Rng) -> Transformation {
    let mut pts: Vec<usize> = (1..=n).collect();
    pts.shuffle(rng);
    let (a, b) = (pts[0], pts[1]);
    let images = (1..=n).map(|p| if p == a || p == b { p } else if rng.gen_bool(0.5) { a } else { b }).collect();
    Transformation::new(images).expect("valid images")
}

/// A rank-2 map with a random two-point image, not necessarily idempotent.
fn rank2_map(n: usize, rng: &mut ChaCha8Rng) -> Transformation {
    loop {
        let mut pts: Vec<usize> = (1..=n).collect();
        pts.shuffle(rng);
        let images: Vec<usize> = (0..n).map(|_| pts[rng.gen_range(0..2)]).collect();
        let t = Transformation::new(images).expect("valid images");
        if t.rank() == 2 {
            return t;
        }
    }
}

fn random_generators(rng: &mut ChaCha8Rng) -> (usize, Vec<Transformation>) {
    let n = rng.gen_range(3..=6);
    let k = rng.gen_range(1..=4);
    let mut gens: Vec<Transformation> = (0..k).map(|_| rank2_idempotent(n, rng)).collect();
    if rng.gen_bool(0.3) {
        gens.push(rank2_map(n, rng));
    }
    gens.push(Transformation::constant(n, rng.gen_range(1..=n)));
    (n, gens)
}

/// At least `count` distinct monoids on n ≤ 6 points, each with at most
/// [`CLOSURE_CAP`] elements, a constant map and a regular rank-2 0-minimal
/// J-class. Deterministic for a given seed.
pub fn rank2_corpus(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: FxHashSet<Vec<Transformation>> = FxHashSet::default();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 1000 * count.max(1), "corpus generator is not making progress");
        let (n, gens) = random_generators(&mut rng);
        let Ok(monoid) = generate_closure(n, &gens, CLOSURE_CAP) else { continue };
        if !seen.insert(monoid.elements().to_vec()) {
            continue;
        }
        let gs = GreenStructure::new(&monoid);
        if rank2_class(&monoid, &gs).is_ok() {
            out.push(CorpusEntry { generators: gens, monoid });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = rank2_corpus(20, 7);
        let b = rank2_corpus(20, 7);
        assert_eq!(a.len(), 20);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.generators, y.generators);
            assert!(x.monoid.degree() <= 6 && x.monoid.len() <= CLOSURE_CAP);
            assert!(x.monoid.has_constant());
        }
    }
}
