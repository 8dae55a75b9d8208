//! Kernel/image data, the Rees-matrix assembly and the explicit families.

mod family;
mod rees;
mod small;

pub use family::{
    build_family, transcription_identities, verify_witness, witness_block_sums, witness_vector, FamilyBuild,
    FamilyVariant, IdentityCheck, OmegaLabels, StarAssignment, Vertex, WitnessVector,
};
pub use rees::{
    assemble_monoid, rees_multiply, rees_sandwich_from, Assembled, ReesElement, ReesMonoid, SandwichMatrix,
};
pub use small::{build_r3, build_r4, r3_images, r3_items, r4_displayed_partitions, r4_images, R4Example};

use serde::Serialize;
use thiserror::Error;

use crate::transformation::Transformation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("invalid partition of 1..={n}: {reason}")]
    InvalidPartition { n: usize, reason: String },
    #[error("invalid image system: {reason}")]
    InvalidImageSystem { reason: String },
    #[error("partition {partition} has {found} blocks, expected {expected}")]
    BlockCount { partition: usize, expected: usize, found: usize },
    #[error("partition {partition} and image set {image} violate J-minimal compatibility")]
    Incompatible { partition: usize, image: usize },
    #[error("sandwich matrix is not regular (empty rows {rows:?}, empty columns {cols:?})")]
    Irregular { rows: Vec<usize>, cols: Vec<usize> },
    #[error("not closed: {left} · {right} = {product} of rank {rank} is missing")]
    ClosureViolation { left: Transformation, right: Transformation, product: Transformation, rank: usize },
    #[error("enumeration needs {needed} elements, above the cap of {cap}")]
    CapExceeded { needed: u64, cap: u64 },
    #[error("index out of range: {what} {index}")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("invalid selection: {reason}")]
    InvalidSelection { reason: String },
    #[error("rank r = {r} is not supported (needs r ≥ 5)")]
    RankTooSmall { r: usize },
    #[error("{n} points into {r} blocks gives {count} candidates, above the limit of 10^7")]
    TooManyPartitions { n: usize, r: usize, count: u128 },
    #[error("construction failed validation: {reason}")]
    Validation { reason: String },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A partition of `1..=n` into nonempty blocks, each sorted, ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, ConstructError> {
        let bad = |reason: String| ConstructError::InvalidPartition { n, reason };
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(bad("empty block".into()));
            }
            for &p in b {
                if p == 0 || p > n {
                    return Err(bad(format!("point {p} out of range")));
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(bad(format!("point {p} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(bad(format!("point {} is not covered", missing + 1)));
        }
        blocks.sort();
        Ok(Self { n, blocks })
    }

    /// From a block label per point (0-based labels, any values).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut slot: Vec<Option<usize>> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (p, &l) in labels.iter().enumerate() {
            if l >= slot.len() {
                slot.resize(l + 1, None);
            }
            let id = *slot[l].get_or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(p + 1);
        }
        Self::new(labels.len(), blocks).expect("labels define a partition")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block holding the 1-based point `p`.
    pub fn block_of(&self, p: usize) -> usize {
        self.blocks.iter().position(|b| b.binary_search(&p).is_ok()).expect("point covered")
    }

    /// Block index per point (0-based points).
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &p in b {
                out[p - 1] = k;
            }
        }
        out
    }
}

/// A list of r-element subsets of `1..=n` (each stored ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageSystem {
    n: usize,
    r: usize,
    sets: Vec<Vec<usize>>,
}

impl ImageSystem {
    pub fn new(n: usize, r: usize, sets: Vec<Vec<usize>>) -> Result<Self, ConstructError> {
        let bad = |reason: String| ConstructError::InvalidImageSystem { reason };
        let mut out = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.len() != r {
                return Err(bad(format!("set {j} has {} distinct points, expected {r}", s.len())));
            }
            if s.iter().any(|&p| p == 0 || p > n) {
                return Err(bad(format!("set {j} has a point outside 1..={n}")));
            }
            out.push(s);
        }
        Ok(Self { n, r, sets: out })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// A (partition, image set) pair meeting neither compatibility case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub partition: usize,
    pub image: usize,
}

/// Case (i): the set lies in one block. Case (ii): each block holds exactly
/// one point of the set.
fn pair_compatible(labels: &[usize], set: &[usize], blocks: usize) -> bool {
    let first = labels[set[0] - 1];
    if set.iter().all(|&p| labels[p - 1] == first) {
        return true;
    }
    let mut hit = vec![false; blocks];
    for &p in set {
        let l = labels[p - 1];
        if std::mem::replace(&mut hit[l], true) {
            return false;
        }
    }
    hit.iter().all(|&h| h)
}

/// Every violating (partition, image set) pair; empty iff compatible.
pub fn jmin_compatible(partitions: &[SetPartition], images: &ImageSystem) -> Result<Vec<Violation>, ConstructError> {
    let mut violations = Vec::new();
    for (i, part) in partitions.iter().enumerate() {
        if part.len() != images.rank() {
            return Err(ConstructError::BlockCount { partition: i, expected: images.rank(), found: part.len() });
        }
        if part.degree() != images.degree() {
            return Err(ConstructError::InvalidPartition {
                n: images.degree(),
                reason: format!("partition {i} has degree {}", part.degree()),
            });
        }
        let labels = part.labels();
        for (j, set) in images.sets().iter().enumerate() {
            if !pair_compatible(&labels, set, part.len()) {
                violations.push(Violation { partition: i, image: j });
            }
        }
    }
    Ok(violations)
}

/// Stirling number of the second kind S(n, k), saturating.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// All partitions of `1..=n` into exactly r blocks that are compatible with
/// every image set, in canonical order.
pub fn enumerate_admissible_partitions(images: &ImageSystem) -> Result<Vec<SetPartition>, ConstructError> {
    let (n, r) = (images.degree(), images.rank());
    let count = stirling2(n, r);
    if count > 10_000_000 {
        return Err(ConstructError::TooManyPartitions { n, r, count });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    rgs_walk(images, &mut labels, 0, 0, r, &mut out);
    out.sort();
    Ok(out)
}

/// Restricted growth strings with exactly `r` distinct labels.
fn rgs_walk(
    images: &ImageSystem,
    labels: &mut [usize],
    pos: usize,
    used: usize,
    r: usize,
    out: &mut Vec<SetPartition>,
) {
    let n = labels.len();
    if n - pos < r - used {
        return;
    }
    if pos == n {
        if images.sets().iter().all(|s| pair_compatible(labels, s, r)) {
            out.push(SetPartition::from_labels(labels));
        }
        return;
    }
    let top = if used < r { used + 1 } else { r };
    for l in 0..top {
        labels[pos] = l;
        rgs_walk(images, labels, pos + 1, used.max(l + 1), r, out);
    }
}
