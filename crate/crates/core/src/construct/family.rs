use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::analysis::incidence_matrix;
use crate::linalg::Rational;

use super::{jmin_compatible, ConstructError, ImageSystem, ReesMonoid, SetPartition};

/// A vertex of the cycle figure, 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Vertex {
    Joint { i: usize },
    Penultimate { i: usize },
    Colored { i: usize, j: usize },
}

/// Point numbering of Ω_r: joints J₁..J_r are 1..r, penultimates P₁..P_r are
/// r+1..2r, and c_{i,j} is 2r + (i−1)(r−3) + j. Edge indices wrap mod r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OmegaLabels {
    r: usize,
}

impl OmegaLabels {
    pub fn new(r: usize) -> Result<Self, ConstructError> {
        if r < 5 {
            return Err(ConstructError::RankTooSmall { r });
        }
        Ok(Self { r })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.r * (self.r - 1)
    }

    fn wrap(&self, i: isize) -> usize {
        (i - 1).rem_euclid(self.r as isize) as usize + 1
    }

    pub fn joint(&self, i: isize) -> usize {
        self.wrap(i)
    }

    pub fn penultimate(&self, i: isize) -> usize {
        self.r + self.wrap(i)
    }

    /// c_{i,j} for j ∈ 1..=r−3.
    pub fn colored(&self, i: isize, j: usize) -> usize {
        assert!((1..=self.r - 3).contains(&j), "colored row out of range");
        2 * self.r + (self.wrap(i) - 1) * (self.r - 3) + j
    }

    pub fn vertex(&self, p: usize) -> Vertex {
        let r = self.r;
        assert!((1..=self.degree()).contains(&p), "point out of range");
        if p <= r {
            Vertex::Joint { i: p }
        } else if p <= 2 * r {
            Vertex::Penultimate { i: p - r }
        } else {
            let y = p - 2 * r - 1;
            Vertex::Colored { i: y / (r - 3) + 1, j: y % (r - 3) + 1 }
        }
    }

    pub fn point(&self, v: Vertex) -> usize {
        match v {
            Vertex::Joint { i } => self.joint(i as isize),
            Vertex::Penultimate { i } => self.penultimate(i as isize),
            Vertex::Colored { i, j } => self.colored(i as isize, j),
        }
    }

    /// "J3", "P1", "c2,1".
    pub fn label(&self, p: usize) -> String {
        match self.vertex(p) {
            Vertex::Joint { i } => format!("J{i}"),
            Vertex::Penultimate { i } => format!("P{i}"),
            Vertex::Colored { i, j } => format!("c{i},{j}"),
        }
    }

    /// E_i as the ordered tuple (J_{i−1}, c_{i,1}, …, c_{i,r−3}, P_i, J_i).
    pub fn edge(&self, i: isize) -> Vec<usize> {
        let mut e = vec![self.joint(i - 1)];
        e.extend((1..=self.r - 3).map(|j| self.colored(i, j)));
        e.push(self.penultimate(i));
        e.push(self.joint(i));
        e
    }

    /// {c_{1,j}, …, c_{r,j}}, meeting every edge once.
    pub fn colored_set(&self, j: usize) -> Vec<usize> {
        (1..=self.r as isize).map(|i| self.colored(i, j)).collect()
    }

    /// The r edges followed by the r−3 colored sets.
    pub fn images(&self) -> ImageSystem {
        let mut sets: Vec<Vec<usize>> = (1..=self.r as isize).map(|i| self.edge(i)).collect();
        sets.extend((1..=self.r - 3).map(|j| self.colored_set(j)));
        ImageSystem::new(self.degree(), self.r, sets).expect("edges and colored sets have r points")
    }

    /// The colored diagonal of the table for B_k that starts at c_{i,r−3}
    /// and climbs one row per column, skipping the omitted column k.
    pub fn dign(&self, i: isize, k: isize) -> Vec<usize> {
        let skip = self.wrap(k);
        let mut out = Vec::with_capacity(self.r - 3);
        let mut col = i;
        while out.len() < self.r - 3 {
            if self.wrap(col) != skip {
                out.push(self.colored(col, self.r - 3 - out.len()));
            }
            col += 1;
        }
        out.sort_unstable();
        out
    }

    /// Shifts every edge index by `s`.
    pub fn rotate(&self, p: usize, s: isize) -> usize {
        match self.vertex(p) {
            Vertex::Joint { i } => self.joint(i as isize + s),
            Vertex::Penultimate { i } => self.penultimate(i as isize + s),
            Vertex::Colored { i, j } => self.colored(i as isize + s, j),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyVariant {
    B,
    Bprime,
}

/// Which joint assignment filled the three non-colored blocks of B_r*.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "pattern", rename_all = "kebab-case")]
pub enum StarAssignment {
    Odd,
    /// Joints by index mod 3; only defined when 3 divides r.
    Literal,
    /// J₂ with the odd joints from J₅, and J₃ with the even joints from J₆.
    AlternatingParity,
    /// Part index (0, 1, 2) per joint J₁..J_r, from exhaustive search.
    Searched { parts: Vec<u8> },
}

impl StarAssignment {
    pub fn name(&self) -> &'static str {
        match self {
            StarAssignment::Odd => "odd",
            StarAssignment::Literal => "literal",
            StarAssignment::AlternatingParity => "alternating-parity",
            StarAssignment::Searched { .. } => "searched",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FamilyBuild {
    pub r: usize,
    pub variant: FamilyVariant,
    pub labels: OmegaLabels,
    pub partitions: Vec<SetPartition>,
    pub images: ImageSystem,
    pub star: Option<StarAssignment>,
    pub handle: ReesMonoid,
}

/// Blocks of B₁: edge E₁ with extra joints in the first block, then the
/// cyclic diagonals of the remaining (r−1) × (r−1) table.
fn first_partition(o: &OmegaLabels) -> Vec<Vec<usize>> {
    let r = o.r;
    let mut first = o.edge(1);
    if r % 2 == 1 {
        first.extend((3..=r - 2).step_by(2).map(|i| o.joint(i as isize)));
    } else {
        first.extend((3..=r - 3).step_by(2).map(|i| o.joint(i as isize)));
        first.push(o.penultimate(r as isize - 1));
    }
    let m = r - 1;
    let cell = |row: usize, t: usize| -> Option<usize> {
        let col = t as isize + 2;
        let (jc, pc) = (o.joint(col), o.penultimate(col));
        if row < r - 3 {
            Some(o.colored(col, row + 1))
        } else if row == r - 3 {
            (!first.contains(&jc) && !first.contains(&pc)).then_some(pc)
        } else if !first.contains(&jc) {
            Some(jc)
        } else if !first.contains(&pc) {
            Some(pc)
        } else {
            None
        }
    };
    let mut blocks = vec![first.clone()];
    for d in 0..m {
        let block: Vec<usize> = (0..m)
            .flat_map(|row| (0..m).map(move |t| (row, t)))
            .filter(|(row, t)| (row + t) % m == d)
            .filter_map(|(row, t)| cell(row, t))
            .collect();
        blocks.push(block);
    }
    blocks
}

/// The three non-colored blocks of B_r* (odd r).
fn odd_star(o: &OmegaLabels) -> [Vec<usize>; 3] {
    let r = o.r as isize;
    let mut a = vec![o.joint(r)];
    a.extend((2..=r - 3).step_by(2).map(|i| o.joint(i)));
    a.push(o.penultimate(r - 1));
    let mut b: Vec<usize> = (1..=r - 2).step_by(2).map(|i| o.joint(i)).collect();
    b.push(o.penultimate(r));
    let mut c = vec![o.joint(r - 1)];
    c.extend((1..=r - 2).map(|i| o.penultimate(i)));
    [a, b, c]
}

/// Even r: penultimates P₁,P₄ | P₂,P₅ | the rest; joints by `part_of`.
fn even_star(o: &OmegaLabels, part_of: impl Fn(usize) -> u8) -> [Vec<usize>; 3] {
    let r = o.r as isize;
    let mut parts = [
        vec![o.penultimate(1), o.penultimate(4)],
        vec![o.penultimate(2), o.penultimate(5)],
        std::iter::once(3).chain(6..=r).map(|i| o.penultimate(i)).collect(),
    ];
    for i in 1..=o.r {
        parts[part_of(i) as usize].push(o.joint(i as isize));
    }
    parts
}

fn literal_part(i: usize) -> u8 {
    match i % 3 {
        2 => 0,
        0 => 1,
        _ => 2,
    }
}

fn alternating_part(i: usize) -> u8 {
    match i {
        1 | 4 => 2,
        2 => 0,
        3 => 1,
        _ if i % 2 == 1 => 0,
        _ => 1,
    }
}

fn star_partition(o: &OmegaLabels, rest: [Vec<usize>; 3]) -> Result<SetPartition, ConstructError> {
    let mut blocks: Vec<Vec<usize>> = (1..=o.r - 3).map(|j| o.colored_set(j)).collect();
    blocks.extend(rest);
    SetPartition::new(o.degree(), blocks).map_err(|e| ConstructError::Validation { reason: format!("B_r*: {e}") })
}

fn validate(o: &OmegaLabels, parts: &[SetPartition], images: &ImageSystem) -> Result<ReesMonoid, ConstructError> {
    for (k, p) in parts.iter().enumerate() {
        if p.len() != o.r {
            return Err(ConstructError::Validation {
                reason: format!("partition {} has {} blocks, expected {}", k + 1, p.len(), o.r),
            });
        }
    }
    if let Some(v) = jmin_compatible(parts, images)?.first() {
        let part = &parts[v.partition];
        let set = &images.sets()[v.image];
        let offending: Vec<&Vec<usize>> = part.blocks().iter().filter(|b| b.iter().any(|p| set.contains(p))).collect();
        return Err(ConstructError::Validation {
            reason: format!(
                "partition {} is incompatible with image set {:?}; blocks met: {:?}",
                v.partition + 1,
                set,
                offending
            ),
        });
    }
    ReesMonoid::new(parts.to_vec(), images.clone())
        .map_err(|e| ConstructError::Validation { reason: format!("sandwich gate: {e}") })
}

fn full_rank(h: &ReesMonoid) -> bool {
    incidence_matrix(&h.set_system()).rank() == h.degree()
}

/// Builds the rank-r family. Variant B closes with B_r*, variant Bprime with
/// the rotation B_r. Every partition passes the partition, compatibility and
/// regularity gates before this returns.
pub fn build_family(r: usize, variant: FamilyVariant) -> Result<FamilyBuild, ConstructError> {
    let o = OmegaLabels::new(r)?;
    let images = o.images();
    let base = first_partition(&o);
    let count = match variant {
        FamilyVariant::B => r - 1,
        FamilyVariant::Bprime => r,
    };
    let mut parts = Vec::with_capacity(r);
    for k in 0..count {
        let blocks = base.iter().map(|b| b.iter().map(|&p| o.rotate(p, k as isize)).collect()).collect();
        let p = SetPartition::new(o.degree(), blocks)
            .map_err(|e| ConstructError::Validation { reason: format!("B_{}: {e}", k + 1) })?;
        parts.push(p);
    }
    let finish = |parts: Vec<SetPartition>, star: Option<StarAssignment>| -> Result<FamilyBuild, ConstructError> {
        let handle = validate(&o, &parts, &images)?;
        Ok(FamilyBuild { r, variant, labels: o, partitions: parts, images: images.clone(), star, handle })
    };
    if variant == FamilyVariant::Bprime {
        return finish(parts, None);
    }
    if r % 2 == 1 {
        parts.push(star_partition(&o, odd_star(&o))?);
        return finish(parts, Some(StarAssignment::Odd));
    }

    let mut candidates: Vec<StarAssignment> = Vec::new();
    if r.is_multiple_of(3) {
        candidates.push(StarAssignment::Literal);
    }
    candidates.push(StarAssignment::AlternatingParity);
    let accept = |assignment: &StarAssignment| -> Option<FamilyBuild> {
        let rest = match assignment {
            StarAssignment::Literal => even_star(&o, literal_part),
            StarAssignment::AlternatingParity => even_star(&o, alternating_part),
            StarAssignment::Searched { parts } => even_star(&o, |i| parts[i - 1]),
            StarAssignment::Odd => unreachable!("odd pattern on even r"),
        };
        let mut all = parts.clone();
        all.push(star_partition(&o, rest).ok()?);
        let build = finish(all, Some(assignment.clone())).ok()?;
        full_rank(&build.handle).then_some(build)
    };
    for c in &candidates {
        if let Some(b) = accept(c) {
            return Ok(b);
        }
    }
    let total = 3usize.pow(r as u32);
    for code in 0..total {
        let mut digits = Vec::with_capacity(r);
        let mut x = code;
        for _ in 0..r {
            digits.push((x % 3) as u8);
            x /= 3;
        }
        digits.reverse();
        if let Some(b) = accept(&StarAssignment::Searched { parts: digits }) {
            return Ok(b);
        }
    }
    Err(ConstructError::Validation { reason: format!("no joint assignment for B_{r}* validates with full rank") })
}

/// Rational coefficients indexed by point (position p−1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessVector {
    pub r: usize,
    pub coefficients: Vec<Rational>,
}

/// +1 on c_{i,j} for odd j, −1 for even j; for even r also −1 on joints and
/// −1/2 on penultimates.
pub fn witness_vector(r: usize) -> Result<WitnessVector, ConstructError> {
    let o = OmegaLabels::new(r)?;
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let coefficients = (1..=o.degree())
        .map(|p| match o.vertex(p) {
            Vertex::Colored { j, .. } => int(if j % 2 == 1 { 1 } else { -1 }),
            Vertex::Joint { .. } if r.is_multiple_of(2) => int(-1),
            Vertex::Penultimate { .. } if r.is_multiple_of(2) => Rational::new(BigInt::from(-1), BigInt::from(2)),
            _ => Rational::zero(),
        })
        .collect();
    Ok(WitnessVector { r, coefficients })
}

/// (partition index, block, coefficient sum) for every block with a nonzero sum.
pub fn witness_block_sums(
    a: &[Rational],
    partitions: &[SetPartition],
) -> Result<Vec<(usize, Vec<usize>, Rational)>, ConstructError> {
    let mut out = Vec::new();
    for (k, p) in partitions.iter().enumerate() {
        if p.degree() != a.len() {
            return Err(ConstructError::DimensionMismatch { expected: p.degree(), found: a.len() });
        }
        for b in p.blocks() {
            let s: Rational = b.iter().map(|&q| &a[q - 1]).sum();
            if !s.is_zero() {
                out.push((k, b.clone(), s));
            }
        }
    }
    Ok(out)
}

/// True iff every block of every partition has coefficient sum exactly 0.
pub fn verify_witness(a: &[Rational], partitions: &[SetPartition]) -> Result<bool, ConstructError> {
    Ok(witness_block_sums(a, partitions)?.is_empty())
}

/// One instance of the diagonal block identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub j: usize,
    /// Which of the six block shapes, 1-based.
    pub relation: usize,
    /// 1-based partition index k of B_k.
    pub partition: usize,
    pub block: Vec<usize>,
    pub holds: bool,
}

/// Checks the six diagonal block shapes for every j ∈ Z_r:
///
/// {J_{j−3}} ∪ Dign_{j,j−1} ∈ B_{j−1}, {P_{j−3}, P_{j−1}} ∪ Dign_{j,j−2} ∈ B_{j−2},
/// {J_{j+1}} ∪ Dign_{j+3,j} ∈ B_j, {J_j} ∪ Dign_{j+3,j+2} ∈ B_{j+2},
/// {J_{j+3}} ∪ Dign_{j+5,j+2} ∈ B_{j+2}, {P_{j+2}, P_{j+4}} ∪ Dign_{j+5,j+3} ∈ B_{j+3},
///
/// together with the equalities of the paired diagonals (reported as
/// relation 0 with `holds` false on mismatch). Shapes landing on B_r* are skipped.
pub fn transcription_identities(build: &FamilyBuild) -> Vec<IdentityCheck> {
    let o = &build.labels;
    let r = o.r as isize;
    let rotated = match build.variant {
        FamilyVariant::B => o.r - 1,
        FamilyVariant::Bprime => o.r,
    };
    let mut out = Vec::new();
    for j in 1..=r {
        let shapes: [(isize, Vec<usize>); 6] = [
            (j - 1, [vec![o.joint(j - 3)], o.dign(j, j - 1)].concat()),
            (j - 2, [vec![o.penultimate(j - 3), o.penultimate(j - 1)], o.dign(j, j - 2)].concat()),
            (j, [vec![o.joint(j + 1)], o.dign(j + 3, j)].concat()),
            (j + 2, [vec![o.joint(j)], o.dign(j + 3, j + 2)].concat()),
            (j + 2, [vec![o.joint(j + 3)], o.dign(j + 5, j + 2)].concat()),
            (j + 3, [vec![o.penultimate(j + 2), o.penultimate(j + 4)], o.dign(j + 5, j + 3)].concat()),
        ];
        for (rel, (k, mut block)) in shapes.into_iter().enumerate() {
            let k = o.wrap(k);
            if k > rotated {
                continue;
            }
            block.sort_unstable();
            let holds = build.partitions[k - 1].blocks().contains(&block);
            out.push(IdentityCheck { j: j as usize, relation: rel + 1, partition: k, block, holds });
        }
        for (a, b) in [((j, j - 1), (j, j - 2)), ((j + 3, j), (j + 3, j + 2)), ((j + 5, j + 3), (j + 5, j + 2))] {
            let da = o.dign(a.0, a.1);
            if da != o.dign(b.0, b.1) {
                out.push(IdentityCheck { j: j as usize, relation: 0, partition: 0, block: da, holds: false });
            }
        }
    }
    out
}
