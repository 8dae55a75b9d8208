//! Permutations and permutation groups on small point sets.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("group element {index} does not permute the point set")]
    NotAPermutation { index: usize },
    #[error("permutation sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
}

/// A permutation of {0, …, r−1}.
///
/// The product `a.then(b)` applies `a` first, then `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Self { images: (0..r as u32).collect() }
    }

    /// Returns `None` unless `images` is a bijection of {0, …, len−1}.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &p in &images {
            let slot = seen.get_mut(p as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Self { images })
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "permutation size mismatch");
        Permutation { images: self.images.iter().map(|&p| other.images[p as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.size()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// All r! permutations in lexicographic order.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..r as u32).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..r).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..r).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, ")")
    }
}

/// A finite set of maps on a fixed set of points, stored explicitly.
///
/// Each element is an image list aligned with `points`: element `g` sends
/// `points[k]` to `g[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    points: Vec<usize>,
    elements: Vec<Vec<usize>>,
}

impl PermutationGroup {
    pub fn new(points: Vec<usize>, elements: Vec<Vec<usize>>) -> Self {
        Self { points, elements }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Converts each element to a [`Permutation`] of point positions, failing
    /// on the first element that does not permute the points.
    pub fn as_permutations(&self) -> Result<Vec<Permutation>, PermError> {
        let pos = |p: usize| self.points.iter().position(|&q| q == p);
        self.elements
            .iter()
            .enumerate()
            .map(|(index, g)| {
                if g.len() != self.points.len() {
                    return Err(PermError::NotAPermutation { index });
                }
                let images = g.iter().map(|&p| pos(p).map(|k| k as u32)).collect::<Option<Vec<u32>>>();
                images.and_then(Permutation::from_images).ok_or(PermError::NotAPermutation { index })
            })
            .collect()
    }

    /// Closed under products and inverses.
    pub fn is_closed(&self) -> Result<bool, PermError> {
        let perms = self.as_permutations()?;
        let set: std::collections::HashSet<&Permutation> = perms.iter().collect();
        for a in &perms {
            if !set.contains(&a.inverse()) {
                return Ok(false);
            }
            for b in &perms {
                if !set.contains(&a.then(b)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// True iff the group has a single orbit on ordered pairs of distinct points.
pub fn is_two_transitive(group: &PermutationGroup) -> Result<bool, PermError> {
    let perms = group.as_permutations()?;
    let k = group.points().len();
    if k < 2 {
        return Ok(true);
    }
    let mut seen = vec![false; k * k];
    let mut queue = VecDeque::from([(0usize, 1usize)]);
    seen[1] = true;
    let mut count = 1;
    while let Some((a, b)) = queue.pop_front() {
        for g in &perms {
            let (x, y) = (g.apply(a), g.apply(b));
            if !seen[x * k + y] {
                seen[x * k + y] = true;
                count += 1;
                queue.push_back((x, y));
            }
        }
    }
    Ok(count == k * (k - 1))
}
