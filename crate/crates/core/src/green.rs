//! Green's relations on an explicit finite monoid.

use std::hash::Hash;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::monoid::FiniteMonoid;
use crate::perm::PermutationGroup;
use crate::transformation::{compose_into, Transformation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreenError {
    #[error("{element} is not an idempotent of the monoid")]
    NotIdempotent { element: Transformation },
    #[error("the monoid is a group, so M \\ I(M) is empty")]
    GroupInput,
}

/// The Cayley table of a monoid: `product(a, b)` is the index of a·b.
#[derive(Clone)]
pub struct MultiplicationTable {
    size: usize,
    products: Vec<u32>,
}

impl MultiplicationTable {
    pub fn new(m: &FiniteMonoid) -> Self {
        let size = m.len();
        let degree = m.degree();
        let mut products = vec![0u32; size * size];
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
        let rows_per = size.div_ceil(workers).max(1);
        std::thread::scope(|s| {
            for (chunk_index, chunk) in products.chunks_mut(rows_per * size.max(1)).enumerate() {
                s.spawn(move || {
                    let mut buf = vec![0u32; degree];
                    for (offset, row) in chunk.chunks_mut(size).enumerate() {
                        let a = m.element(chunk_index * rows_per + offset).as_zero_based();
                        for (b, slot) in row.iter_mut().enumerate() {
                            compose_into(a, m.element(b).as_zero_based(), &mut buf);
                            *slot = m.index_of_slice(&buf).expect("monoid is closed") as u32;
                        }
                    }
                });
            }
        });
        Self { size, products }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.products[a * self.size + b] as usize
    }
}

/// Summary of one J-class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JClassInfo {
    pub class_id: usize,
    pub elements: Vec<usize>,
    pub idempotents: Vec<usize>,
    pub rank: usize,
    pub is_regular: bool,
}

/// Outcome of searching for the unique minimal J-class of M \ I(M).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroMinimal {
    Unique(JClassInfo),
    /// Several minimal classes (ids listed) sit directly above I(M).
    NotUnique { minimal: Vec<usize> },
}

/// R, L, H and J classes of a monoid with the J-order and regularity flags.
///
/// Class ids are assigned in order of each class's least element index.
pub struct GreenStructure {
    table: MultiplicationTable,
    right_ideals: Vec<FixedBitSet>,
    left_ideals: Vec<FixedBitSet>,
    r_of: Vec<usize>,
    l_of: Vec<usize>,
    h_of: Vec<usize>,
    j_of: Vec<usize>,
    r_classes: Vec<Vec<usize>>,
    l_classes: Vec<Vec<usize>>,
    h_classes: Vec<Vec<usize>>,
    j_classes: Vec<Vec<usize>>,
    j_ideals: Vec<FixedBitSet>,
    j_rank: Vec<usize>,
    j_idempotents: Vec<Vec<usize>>,
}

fn classes_by_key<K: Hash + Eq>(size: usize, key: impl Fn(usize) -> K) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut ids: FxHashMap<K, usize> = FxHashMap::default();
    let mut of = Vec::with_capacity(size);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..size {
        let next = classes.len();
        let id = *ids.entry(key(x)).or_insert(next);
        if id == next {
            classes.push(Vec::new());
        }
        classes[id].push(x);
        of.push(id);
    }
    (of, classes)
}

pub fn green_structure(m: &FiniteMonoid) -> GreenStructure {
    GreenStructure::new(m)
}

impl GreenStructure {
    pub fn new(m: &FiniteMonoid) -> Self {
        Self::with_table(m, MultiplicationTable::new(m))
    }

    #[allow(clippy::needless_range_loop)]
    pub fn with_table(m: &FiniteMonoid, table: MultiplicationTable) -> Self {
        let size = m.len();
        let mut right_ideals = vec![FixedBitSet::with_capacity(size); size];
        let mut left_ideals = vec![FixedBitSet::with_capacity(size); size];
        for a in 0..size {
            for b in 0..size {
                let ab = table.product(a, b);
                right_ideals[a].insert(ab);
                left_ideals[b].insert(ab);
            }
        }
        let (r_of, r_classes) = classes_by_key(size, |x| right_ideals[x].clone());
        let (l_of, l_classes) = classes_by_key(size, |x| left_ideals[x].clone());
        let (h_of, h_classes) = classes_by_key(size, |x| (r_of[x], l_of[x]));

        // MaM = ∪_{c ∈ aM} Mc, and Mc depends only on the L-class of c.
        let r_two_sided: Vec<FixedBitSet> = r_classes
            .iter()
            .map(|class| {
                let a = class[0];
                let mut hit = FixedBitSet::with_capacity(l_classes.len());
                for c in right_ideals[a].ones() {
                    hit.insert(l_of[c]);
                }
                let mut ideal = FixedBitSet::with_capacity(size);
                for l in hit.ones() {
                    ideal.union_with(&left_ideals[l_classes[l][0]]);
                }
                ideal
            })
            .collect();
        let (j_of, j_classes) = classes_by_key(size, |x| r_two_sided[r_of[x]].clone());
        let j_ideals: Vec<FixedBitSet> = j_classes.iter().map(|c| r_two_sided[r_of[c[0]]].clone()).collect();
        let j_rank: Vec<usize> = j_classes
            .iter()
            .map(|class| {
                let rank = m.element(class[0]).rank();
                assert!(class.iter().all(|&x| m.element(x).rank() == rank), "rank not constant on a J-class");
                rank
            })
            .collect();
        let j_idempotents = j_classes
            .iter()
            .map(|class| class.iter().copied().filter(|&x| table.product(x, x) == x).collect())
            .collect();
        Self {
            table,
            right_ideals,
            left_ideals,
            r_of,
            l_of,
            h_of,
            j_of,
            r_classes,
            l_classes,
            h_classes,
            j_classes,
            j_ideals,
            j_rank,
            j_idempotents,
        }
    }

    pub fn table(&self) -> &MultiplicationTable {
        &self.table
    }

    pub fn r_classes(&self) -> &[Vec<usize>] {
        &self.r_classes
    }

    pub fn l_classes(&self) -> &[Vec<usize>] {
        &self.l_classes
    }

    pub fn h_classes(&self) -> &[Vec<usize>] {
        &self.h_classes
    }

    pub fn j_classes(&self) -> &[Vec<usize>] {
        &self.j_classes
    }

    pub fn r_class_of(&self, x: usize) -> usize {
        self.r_of[x]
    }

    pub fn l_class_of(&self, x: usize) -> usize {
        self.l_of[x]
    }

    pub fn h_class_of(&self, x: usize) -> usize {
        self.h_of[x]
    }

    pub fn j_class_of(&self, x: usize) -> usize {
        self.j_of[x]
    }

    /// aM as a set of element indices.
    pub fn right_ideal(&self, a: usize) -> &FixedBitSet {
        &self.right_ideals[a]
    }

    /// Ma as a set of element indices.
    pub fn left_ideal(&self, a: usize) -> &FixedBitSet {
        &self.left_ideals[a]
    }

    /// MaM for any a in the given J-class.
    pub fn two_sided_ideal(&self, class: usize) -> &FixedBitSet {
        &self.j_ideals[class]
    }

    /// J_c ≤ J_d iff McM ⊆ MdM.
    pub fn j_leq(&self, c: usize, d: usize) -> bool {
        self.j_ideals[d].contains(self.j_classes[c][0])
    }

    pub fn is_regular(&self, class: usize) -> bool {
        !self.j_idempotents[class].is_empty()
    }

    pub fn regular_flags(&self) -> Vec<bool> {
        (0..self.j_classes.len()).map(|c| self.is_regular(c)).collect()
    }

    /// J² ∩ J ≠ ∅.
    pub fn square_meets_class(&self, class: usize) -> bool {
        let members = &self.j_classes[class];
        members.iter().any(|&a| members.iter().any(|&b| self.j_of[self.table.product(a, b)] == class))
    }

    /// Some n with a·n·a = a.
    pub fn is_regular_element(&self, a: usize) -> bool {
        (0..self.table.len()).any(|n| self.table.product(self.table.product(a, n), a) == a)
    }

    pub fn jclass_info(&self, class: usize) -> JClassInfo {
        JClassInfo {
            class_id: class,
            elements: self.j_classes[class].clone(),
            idempotents: self.j_idempotents[class].clone(),
            rank: self.j_rank[class],
            is_regular: self.is_regular(class),
        }
    }

    /// Ids of J-classes with no class strictly below them inside `allowed`.
    fn minimal_among(&self, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
        let ids: Vec<usize> = (0..self.j_classes.len()).filter(|&c| allowed(c)).collect();
        ids.iter().copied().filter(|&c| !ids.iter().any(|&d| d != c && self.j_leq(d, c))).collect()
    }

    /// Id of the J-class forming the minimal ideal.
    pub fn minimal_class(&self) -> usize {
        let minimal = self.minimal_among(|_| true);
        assert_eq!(minimal.len(), 1, "a finite monoid has a unique minimal J-class");
        minimal[0]
    }
}

/// I(M), computed as the minimal J-class and checked against the set of
/// minimum-rank elements.
pub fn minimal_ideal(m: &FiniteMonoid, gs: &GreenStructure) -> Vec<usize> {
    let by_order = gs.j_classes()[gs.minimal_class()].clone();
    let min_rank = m.elements().iter().map(Transformation::rank).min().expect("monoid is nonempty");
    let by_rank: Vec<usize> = (0..m.len()).filter(|&x| m.element(x).rank() == min_rank).collect();
    assert_eq!(by_order, by_rank, "minimal ideal differs from the minimum-rank elements");
    by_order
}

pub fn zero_minimal_jclass(m: &FiniteMonoid, gs: &GreenStructure) -> Result<ZeroMinimal, GreenError> {
    if m.is_group() {
        return Err(GreenError::GroupInput);
    }
    let bottom = gs.minimal_class();
    let minimal = gs.minimal_among(|c| c != bottom);
    match minimal.as_slice() {
        [only] => Ok(ZeroMinimal::Unique(gs.jclass_info(*only))),
        _ => Ok(ZeroMinimal::NotUnique { minimal }),
    }
}

/// The maximal subgroup H_e, as permutations of the image set eΩ.
pub fn maximal_subgroup(m: &FiniteMonoid, gs: &GreenStructure, e: usize) -> Result<PermutationGroup, GreenError> {
    let idem = m.element(e);
    if !idem.is_idempotent() {
        return Err(GreenError::NotIdempotent { element: idem.clone() });
    }
    let points = idem.image_set();
    let elements = gs.h_classes()[gs.h_class_of(e)]
        .iter()
        .map(|&h| points.iter().map(|&p| m.element(h).apply(p)).collect())
        .collect();
    Ok(PermutationGroup::new(points, elements))
}
