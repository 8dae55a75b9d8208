//! Explicit finite transformation monoids.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::transformation::{compose_into, Transformation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("closure exceeded the cap of {cap} elements ({partial} found so far)")]
    SizeOverflow { partial: usize, cap: usize },
    #[error("element set is not closed: {left} · {right} = {product} is missing")]
    NotClosed { left: Transformation, right: Transformation, product: Transformation },
    #[error("element set does not contain the identity")]
    MissingIdentity,
    #[error("degree must be at least 1")]
    ZeroDegree,
}

/// A finite submonoid of T_Ω held as an explicit, sorted element list.
#[derive(Clone)]
pub struct FiniteMonoid {
    n: usize,
    elements: Vec<Transformation>,
    index: FxHashMap<Transformation, u32>,
    generators: Vec<usize>,
}

/// How M acts on the points of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransitivityKind {
    /// Mω = Ω for every ω.
    Transitive,
    /// A unique sink ω₀ with Mω₀ = {ω₀}, and Mω = Ω for every other ω.
    ZeroTransitive { sink: usize },
    Neither,
}

/// Breadth-first closure of `generators` under composition, with the identity
/// adjoined. Fails once more than `cap` elements have been found.
pub fn generate_closure(n: usize, generators: &[Transformation], cap: usize) -> Result<FiniteMonoid, MonoidError> {
    if n == 0 {
        return Err(MonoidError::ZeroDegree);
    }
    for (index, g) in generators.iter().enumerate() {
        if g.degree() != n {
            return Err(MonoidError::DegreeMismatch { index, expected: n, found: g.degree() });
        }
    }
    let mut seen: FxHashMap<Transformation, u32> = FxHashMap::default();
    let mut queue = VecDeque::new();
    let id = Transformation::identity(n);
    seen.insert(id.clone(), 0);
    queue.push_back(id);
    let mut buf = vec![0u32; n];
    while let Some(x) = queue.pop_front() {
        for g in generators {
            compose_into(g.as_zero_based(), x.as_zero_based(), &mut buf);
            if seen.contains_key(buf.as_slice()) {
                continue;
            }
            if seen.len() >= cap {
                return Err(MonoidError::SizeOverflow { partial: seen.len() + 1, cap });
            }
            let y = Transformation::from_zero_based(buf.clone());
            seen.insert(y.clone(), 0);
            queue.push_back(y);
        }
    }
    let elements: Vec<Transformation> = seen.into_keys().collect();
    let mut m = FiniteMonoid::from_sorted(n, elements);
    let mut gens: Vec<usize> = generators.iter().map(|g| m.index_of(g).expect("generator in closure")).collect();
    gens.sort_unstable();
    gens.dedup();
    m.generators = gens;
    Ok(m)
}

impl FiniteMonoid {
    fn from_sorted(n: usize, mut elements: Vec<Transformation>) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Self { n, elements, index, generators: Vec::new() }
    }

    /// Wraps an element set whose closure the caller has already checked.
    pub(crate) fn from_verified(n: usize, elements: Vec<Transformation>) -> Self {
        Self::from_sorted(n, elements)
    }

    /// Wraps an explicit element set, verifying that it contains the identity
    /// and is closed under composition (every pairwise product is checked).
    pub fn from_elements(n: usize, elements: Vec<Transformation>) -> Result<Self, MonoidError> {
        if n == 0 {
            return Err(MonoidError::ZeroDegree);
        }
        for (index, t) in elements.iter().enumerate() {
            if t.degree() != n {
                return Err(MonoidError::DegreeMismatch { index, expected: n, found: t.degree() });
            }
        }
        let m = Self::from_sorted(n, elements);
        if !m.contains(&Transformation::identity(n)) {
            return Err(MonoidError::MissingIdentity);
        }
        m.check_closed()?;
        Ok(m)
    }

    /// Returns the first missing product in canonical order, if any.
    pub fn check_closed(&self) -> Result<(), MonoidError> {
        let mut buf = vec![0u32; self.n];
        for a in &self.elements {
            for b in &self.elements {
                compose_into(a.as_zero_based(), b.as_zero_based(), &mut buf);
                if !self.index.contains_key(buf.as_slice()) {
                    return Err(MonoidError::NotClosed {
                        left: a.clone(),
                        right: b.clone(),
                        product: Transformation::from_zero_based(buf),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    /// Indices of the generators the monoid was built from (empty when it was
    /// given as an explicit element set).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    pub(crate) fn index_of_slice(&self, images: &[u32]) -> Option<usize> {
        self.index.get(images).map(|&i| i as usize)
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    /// Indices of all idempotents e = e².
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].is_idempotent()).collect()
    }

    /// M is a group iff every element is a permutation of Ω.
    pub fn is_group(&self) -> bool {
        self.elements.iter().all(Transformation::is_permutation)
    }

    pub fn constants(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].is_constant()).collect()
    }

    pub fn has_constant(&self) -> bool {
        self.elements.iter().any(Transformation::is_constant)
    }

    /// The orbit Mω of a 1-based point, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut hit = vec![false; self.n];
        for t in &self.elements {
            hit[t.apply(point) - 1] = true;
        }
        hit.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i + 1).collect()
    }

    pub fn transitivity_kind(&self) -> TransitivityKind {
        let orbits: Vec<Vec<usize>> = (1..=self.n).map(|p| self.orbit(p)).collect();
        if orbits.iter().all(|o| o.len() == self.n) {
            return TransitivityKind::Transitive;
        }
        let sinks: Vec<usize> = (1..=self.n).filter(|&p| orbits[p - 1] == [p]).collect();
        if sinks.len() == 1 {
            let sink = sinks[0];
            let rest_full = (1..=self.n).filter(|&p| p != sink).all(|p| orbits[p - 1].len() == self.n);
            if rest_full {
                return TransitivityKind::ZeroTransitive { sink };
            }
        }
        TransitivityKind::Neither
    }
}

impl std::fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMonoid").field("n", &self.n).field("len", &self.len()).finish()
    }
}

impl PartialEq for FiniteMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for FiniteMonoid {}

impl std::borrow::Borrow<[u32]> for Transformation {
    fn borrow(&self) -> &[u32] {
        self.as_zero_based()
    }
}

/// The full transformation monoid T_n, generated by a cycle, a transposition
/// and a rank n − 1 map.
pub fn full_transformation_monoid(n: usize) -> FiniteMonoid {
    let mut gens = Vec::new();
    if n >= 2 {
        let cycle: Vec<usize> = (1..=n).map(|p| p % n + 1).collect();
        let mut swap: Vec<usize> = (1..=n).collect();
        swap.swap(0, 1);
        let mut collapse: Vec<usize> = (1..=n).collect();
        collapse[1] = 1;
        for v in [cycle, swap, collapse] {
            gens.push(Transformation::new(v).expect("valid generator"));
        }
    }
    generate_closure(n, &gens, usize::MAX).expect("T_n closure")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn closure_of_swap_is_order_two() {
        let m = generate_closure(2, &[t(&[2, 1])], 100).unwrap();
        assert_eq!(m.elements(), &[t(&[1, 2]), t(&[2, 1])]);
        assert!(m.is_group());
    }

    #[test]
    fn closure_swap_and_constant() {
        let m = generate_closure(2, &[t(&[2, 1]), t(&[1, 1])], 100).unwrap();
        assert_eq!(m.elements(), &[t(&[1, 1]), t(&[1, 2]), t(&[2, 1]), t(&[2, 2])]);
        assert_eq!(m.generators().len(), 2);
    }

    #[test]
    fn closure_generates_t3() {
        let m = generate_closure(3, &[t(&[2, 3, 1]), t(&[2, 1, 3]), t(&[1, 1, 2])], 1000).unwrap();
        assert_eq!(m.len(), 27);
        assert_eq!(m, full_transformation_monoid(3));
    }

    #[test]
    fn closure_cap_overflow_reports_partial() {
        let err = generate_closure(3, &[t(&[2, 3, 1]), t(&[2, 1, 3]), t(&[1, 1, 2])], 10).unwrap_err();
        match err {
            MonoidError::SizeOverflow { partial, cap } => {
                assert_eq!(cap, 10);
                assert_eq!(partial, 11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn closure_rejects_mixed_degrees() {
        let err = generate_closure(2, &[t(&[2, 1]), t(&[1, 1, 1])], 10).unwrap_err();
        assert!(matches!(err, MonoidError::DegreeMismatch { index: 1, expected: 2, found: 3 }));
    }

    #[test]
    fn closure_is_idempotent() {
        let m = generate_closure(4, &[t(&[2, 1, 3, 4]), t(&[1, 1, 3, 3]), t(&[4, 3, 2, 1])], 1000).unwrap();
        let again = generate_closure(4, m.elements(), 1000).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn from_elements_detects_missing_products() {
        let err = FiniteMonoid::from_elements(3, vec![Transformation::identity(3), t(&[2, 3, 1])]).unwrap_err();
        assert!(matches!(err, MonoidError::NotClosed { .. }));
        let err = FiniteMonoid::from_elements(2, vec![t(&[1, 1])]).unwrap_err();
        assert_eq!(err, MonoidError::MissingIdentity);
    }

    #[test]
    fn idempotents_of_t2() {
        let m = full_transformation_monoid(2);
        let idem: Vec<_> = m.idempotents().into_iter().map(|i| m.element(i).clone()).collect();
        assert_eq!(idem, vec![t(&[1, 1]), t(&[1, 2]), t(&[2, 2])]);
    }

    #[test]
    fn units_have_only_identity_idempotent() {
        let m = generate_closure(4, &[t(&[2, 3, 4, 1]), t(&[2, 1, 3, 4])], 100).unwrap();
        assert_eq!(m.len(), 24);
        let idem = m.idempotents();
        assert_eq!(idem.len(), 1);
        assert!(m.element(idem[0]).is_identity());
    }

    #[test]
    fn transitivity_examples() {
        assert_eq!(full_transformation_monoid(3).transitivity_kind(), TransitivityKind::Transitive);
        let m = generate_closure(2, &[t(&[1, 1])], 10).unwrap();
        assert_eq!(m.transitivity_kind(), TransitivityKind::ZeroTransitive { sink: 1 });
        let m = generate_closure(3, &[t(&[1, 1, 3])], 10).unwrap();
        assert_eq!(m.transitivity_kind(), TransitivityKind::Neither);
    }
}
