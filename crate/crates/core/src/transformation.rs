//! Total self-maps of Ω = {1, …, n}.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformationError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image {point} out of range 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("a transformation needs degree at least 1")]
    EmptyDegree,
}

/// A transformation of Ω = {1, …, n}, stored as its image array.
///
/// Storage is zero-based; every public accessor speaks 1-based points. The
/// derived ordering is lexicographic on the image array, which is the
/// canonical element order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Box<[u32]>,
}

impl Transformation {
    /// Builds a transformation from a 1-based image array.
    pub fn new(images: Vec<usize>) -> Result<Self, TransformationError> {
        let n = images.len();
        if n == 0 {
            return Err(TransformationError::EmptyDegree);
        }
        let mut out = Vec::with_capacity(n);
        for &p in &images {
            if p == 0 || p > n {
                return Err(TransformationError::PointOutOfRange { point: p, n });
            }
            out.push((p - 1) as u32);
        }
        Ok(Self { images: out.into_boxed_slice() })
    }

    /// Builds a transformation from a zero-based image array.
    ///
    /// Panics if an entry is out of range.
    pub fn from_zero_based(images: Vec<u32>) -> Self {
        let n = images.len();
        assert!(n > 0, "empty transformation");
        assert!(images.iter().all(|&p| (p as usize) < n), "image out of range");
        Self { images: images.into_boxed_slice() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_zero_based((0..n as u32).collect())
    }

    /// The constant map onto `point` (1-based).
    pub fn constant(n: usize, point: usize) -> Self {
        assert!((1..=n).contains(&point));
        Self::from_zero_based(vec![(point - 1) as u32; n])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `p`.
    pub fn apply(&self, p: usize) -> usize {
        self.images[p - 1] as usize + 1
    }

    /// The image array, 1-based.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn as_zero_based(&self) -> &[u32] {
        &self.images
    }

    /// Sorted image set mΩ (1-based).
    pub fn image_set(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        for &p in self.images.iter() {
            seen[p as usize] = true;
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i + 1).collect()
    }

    /// rk(m) = |mΩ|.
    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for &p in self.images.iter() {
            if !seen[p as usize] {
                seen[p as usize] = true;
                count += 1;
            }
        }
        count
    }

    /// Kernel classes m⁻¹(mω), each sorted, ordered by least element.
    pub fn kernel(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut slot = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &img) in self.images.iter().enumerate() {
            let img = img as usize;
            if slot[img] == usize::MAX {
                slot[img] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[img]].push(x + 1);
        }
        blocks
    }

    /// The block f⁻¹(f(ω)) containing the 1-based point `p`.
    pub fn kernel_block_of(&self, p: usize) -> Vec<usize> {
        let target = self.images[p - 1];
        (0..self.degree()).filter(|&x| self.images[x] == target).map(|x| x + 1).collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&p| self.images[p as usize] == p)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(|&p| p == self.images[0])
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    /// Points fixed by the map (1-based).
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| self.images[x] as usize == x).map(|x| x + 1).collect()
    }
}

/// The product `f·g`, acting as "apply `g`, then `f`": `(f·g)ω = f(g(ω))`.
pub fn compose(f: &Transformation, g: &Transformation) -> Result<Transformation, TransformationError> {
    if f.degree() != g.degree() {
        return Err(TransformationError::DegreeMismatch { left: f.degree(), right: g.degree() });
    }
    let images: Vec<u32> = g.images.iter().map(|&x| f.images[x as usize]).collect();
    Ok(Transformation { images: images.into_boxed_slice() })
}

/// Writes `f·g` into `out` without allocating. Degrees must agree.
pub(crate) fn compose_into(f: &[u32], g: &[u32], out: &mut [u32]) {
    for (o, &x) in out.iter_mut().zip(g) {
        *o = f[x as usize];
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&Transformation::identity(3), &t(&[2, 2, 3])).unwrap(), t(&[2, 2, 3]));
        // f(g(1)) = f(1) = 2, f(g(2)) = f(1) = 2, f(g(3)) = f(2) = 2
        assert_eq!(compose(&t(&[2, 2, 3]), &t(&[1, 1, 2])).unwrap(), t(&[2, 2, 2]));
        let c = Transformation::constant(3, 1);
        for g in [t(&[3, 2, 1]), t(&[2, 2, 3]), t(&[1, 1, 1])] {
            assert_eq!(compose(&c, &g).unwrap(), c);
        }
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = compose(&Transformation::identity(2), &Transformation::identity(3)).unwrap_err();
        assert_eq!(err, TransformationError::DegreeMismatch { left: 2, right: 3 });
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(Transformation::new(vec![1, 4, 2]), Err(TransformationError::PointOutOfRange { point: 4, n: 3 })));
        assert!(matches!(Transformation::new(vec![0]), Err(TransformationError::PointOutOfRange { .. })));
        assert_eq!(Transformation::new(vec![]), Err(TransformationError::EmptyDegree));
    }

    #[test]
    fn rank_kernel_and_image() {
        let m = t(&[1, 1, 3, 3, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.image_set(), vec![1, 3]);
        assert_eq!(m.kernel(), vec![vec![1, 2, 5], vec![3, 4]]);
        assert_eq!(m.kernel_block_of(4), vec![3, 4]);
        assert!(m.is_idempotent());
        assert_eq!(m.fixed_points(), vec![1, 3]);
        assert_eq!(Transformation::constant(4, 2).rank(), 1);
        assert_eq!(Transformation::identity(4).rank(), 4);
    }

    #[test]
    fn idempotent_iff_fixes_image() {
        assert!(t(&[1, 1, 3]).is_idempotent());
        assert!(!t(&[2, 1]).is_idempotent());
        assert!(!t(&[2, 3, 3]).is_idempotent());
    }

    #[test]
    fn associativity_exhaustive_n3() {
        let all: Vec<Transformation> = (0..27)
            .map(|code| {
                let v = vec![code % 3 + 1, code / 3 % 3 + 1, code / 9 + 1];
                t(&v)
            })
            .collect();
        for a in &all {
            for b in &all {
                let ab = compose(a, b).unwrap();
                for c in &all {
                    let left = compose(&ab, c).unwrap();
                    let right = compose(a, &compose(b, c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(t(&[2, 1, 3]).to_string(), "[2,1,3]");
    }
}
