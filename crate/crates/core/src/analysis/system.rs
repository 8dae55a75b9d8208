use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::graph::SimpleGraph;
use crate::green::JClassInfo;
use crate::linalg::{Rational, RationalMatrix};
use crate::monoid::FiniteMonoid;
use crate::transformation::Transformation;

use super::AnalysisError;

/// Where a block of ℰ first came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "from", rename_all = "kebab-case")]
pub enum BlockOrigin {
    /// f⁻¹(f(ω)) for an idempotent f; `point` is the least ω of the block.
    Idempotent {
        #[serde(serialize_with = "serialize_display")]
        idempotent: Transformation,
        point: usize,
    },
    /// A block of the given kernel partition (0-based index into 𝓑).
    Partition { index: usize },
}

fn serialize_display<S: serde::Serializer>(t: &Transformation, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(t)
}

/// A deduplicated family of nonempty subsets of `1..=n`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetSystem {
    n: usize,
    blocks: Vec<Vec<usize>>,
    provenance: Vec<BlockOrigin>,
}

impl SetSystem {
    /// Deduplicates and sorts; the first origin seen for a block is kept.
    pub fn from_tagged(n: usize, tagged: impl IntoIterator<Item = (Vec<usize>, BlockOrigin)>) -> Self {
        let mut map: BTreeMap<Vec<usize>, BlockOrigin> = BTreeMap::new();
        for (mut block, origin) in tagged {
            block.sort_unstable();
            block.dedup();
            assert!(!block.is_empty(), "empty block");
            assert!(block.iter().all(|p| (1..=n).contains(p)), "block point out of range");
            map.entry(block).or_insert(origin);
        }
        let (blocks, provenance) = map.into_iter().unzip();
        Self { n, blocks, provenance }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn provenance(&self) -> &[BlockOrigin] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn position(&self, block: &[usize]) -> Option<usize> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(block)).ok()
    }
}

pub(crate) fn block_label(block: &[usize]) -> String {
    let inner: Vec<String> = block.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// ℰ = {f⁻¹fω : f ∈ E(J), ω ∈ Ω}.
pub fn set_system(m: &FiniteMonoid, j: &JClassInfo) -> Result<SetSystem, AnalysisError> {
    if j.idempotents.is_empty() {
        return Err(AnalysisError::IrregularClass);
    }
    let tagged = j.idempotents.iter().flat_map(|&f| {
        let e = m.element(f);
        e.kernel().into_iter().map(move |block| {
            let point = block[0];
            (block, BlockOrigin::Idempotent { idempotent: e.clone(), point })
        })
    });
    Ok(SetSystem::from_tagged(m.degree(), tagged))
}

/// The Ω × ℰ incidence matrix with 0/1 entries.
pub fn incidence_matrix(s: &SetSystem) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(s.degree(), s.len());
    for (k, block) in s.blocks().iter().enumerate() {
        for &p in block {
            m.set(p - 1, k, Rational::one());
        }
    }
    m.with_row_labels((1..=s.degree()).map(|p| p.to_string()).collect())
        .with_col_labels(s.blocks().iter().map(|b| block_label(b)).collect())
}

/// Basis of W⊥ = {v ∈ ℚΩ : Σ_{ω∈B} v_ω = 0 for every block B}.
pub fn wperp(s: &SetSystem) -> Vec<Vec<Rational>> {
    incidence_matrix(s).transpose().nullspace()
}

/// Γ(M) as the union of cliques on the image sets of E(J); checked against
/// the pairwise definition (some idempotent of J fixes both points).
pub fn gamma_graph(m: &FiniteMonoid, j: &JClassInfo) -> SimpleGraph {
    let images: Vec<Vec<usize>> = j.idempotents.iter().map(|&e| m.element(e).image_set()).collect();
    let by_cliques = clique_union(m.degree(), &images);
    let mut by_pairs = SimpleGraph::new(m.degree());
    for a in 1..=m.degree() {
        for b in a + 1..=m.degree() {
            if j.idempotents.iter().any(|&e| m.element(e).apply(a) == a && m.element(e).apply(b) == b) {
                by_pairs.add_edge(a, b);
            }
        }
    }
    assert_eq!(by_cliques, by_pairs, "the two descriptions of Γ(M) differ");
    by_cliques
}

pub fn clique_union(n: usize, sets: &[Vec<usize>]) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for s in sets {
        g.add_clique(s);
    }
    g
}

/// Integer scaling of a rational vector with coprime entries.
pub(crate) fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    use num_traits::Zero;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
