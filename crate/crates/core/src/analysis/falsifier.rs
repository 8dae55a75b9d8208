use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::linalg::{EchelonBasis, Rational};
use crate::monoid::FiniteMonoid;

use super::report::simplicity_report;
use super::system::primitive_integer_vector;

/// Which family of trial vectors produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialSource {
    Random,
    Wperp,
    PointDifference,
}

/// A nonzero v ∈ Aug(ℚΩ) whose cyclic submodule span{mv : m ∈ M} is proper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FalsifierWitness {
    pub vector: Vec<i64>,
    pub submodule_dim: usize,
    pub submodule_basis: Vec<Vec<String>>,
    pub source: TrialSource,
}

/// The push-forward m·v: (m·v)_{ω'} = Σ_{mω = ω'} v_ω.
fn act(m: &[u32], v: &[i64], out: &mut [i64]) {
    out.iter_mut().for_each(|x| *x = 0);
    for (w, &x) in v.iter().enumerate() {
        out[m[w] as usize] += x;
    }
}

/// Dimension of span{mv : m ∈ M}, stopping early once it reaches `stop_at`.
fn cyclic_span(m: &FiniteMonoid, v: &[i64], stop_at: usize) -> EchelonBasis {
    let n = m.degree();
    let mut span = EchelonBasis::new(n);
    let mut seen: FxHashSet<Vec<i64>> = FxHashSet::default();
    let mut buf = vec![0i64; n];
    for t in m.elements() {
        act(t.as_zero_based(), v, &mut buf);
        if buf.iter().all(|&x| x == 0) || !seen.insert(buf.clone()) {
            continue;
        }
        let q: Vec<Rational> = buf.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        span.insert(&q).expect("dimension matches");
        if span.len() >= stop_at {
            break;
        }
    }
    span
}

fn random_augmentation_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    loop {
        let mut v: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
        let last = -v.iter().sum::<i64>();
        if !(-3..=3).contains(&last) {
            continue;
        }
        v.push(last);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Searches for a proper cyclic submodule of Aug(ℚΩ).
///
/// Trial vectors: `trials` seeded random vectors with entries in −3..3 summing
/// to zero, then every basis vector of W⊥ (when conditions (1) and (2) hold),
/// then every difference e_i − e_j. A returned witness certifies that the
/// augmentation submodule is not simple; `None` proves nothing.
pub fn cyclic_submodule_falsifier(m: &FiniteMonoid, trials: usize, seed: u64) -> Option<FalsifierWitness> {
    let n = m.degree();
    if n < 3 {
        // Aug has dimension ≤ 1, so every nonzero cyclic submodule is all of it.
        return None;
    }
    let target = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(Vec<i64>, TrialSource)> =
        (0..trials).map(|_| (random_augmentation_vector(n, &mut rng), TrialSource::Random)).collect();
    if let Ok(report) = simplicity_report(m) {
        for b in report.wperp_basis.unwrap_or_default() {
            let ints: Option<Vec<i64>> = primitive_integer_vector(&b).iter().map(ToPrimitive::to_i64).collect();
            if let Some(v) = ints {
                if v.iter().sum::<i64>() == 0 {
                    candidates.push((v, TrialSource::Wperp));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[j] = -1;
            candidates.push((v, TrialSource::PointDifference));
        }
    }
    for (v, source) in candidates {
        let span = cyclic_span(m, &v, target);
        if span.len() < target {
            return Some(FalsifierWitness {
                vector: v,
                submodule_dim: span.len(),
                submodule_basis: span
                    .basis()
                    .iter()
                    .map(|row| row.iter().map(crate::linalg::render_rational).collect())
                    .collect(),
                source,
            });
        }
    }
    None
}
