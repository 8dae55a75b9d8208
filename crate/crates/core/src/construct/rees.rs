use rustc_hash::FxHashSet;
use serde_json::json;

use crate::analysis::{
    assemble_report, clique_union, condition3_from_group, BlockOrigin, ConditionResult, SetSystem, SimplicityReport,
    Status, ZeroMinimalClass,
};
use crate::graph::SimpleGraph;
use crate::monoid::FiniteMonoid;
use crate::perm::{Permutation, PermutationGroup};
use crate::transformation::{compose_into, Transformation};

use super::{jmin_compatible, ConstructError, ImageSystem, SetPartition};

/// The n₂ × n₁ structure matrix over S_r ∪ {0}; `entry(j, i)` pairs image set
/// j with partition i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichMatrix {
    entries: Vec<Vec<Option<Permutation>>>,
    cols: usize,
}

impl SandwichMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, j: usize, i: usize) -> Option<&Permutation> {
        self.entries[j][i].as_ref()
    }

    /// Rows and columns with no nonzero entry.
    pub fn zero_lines(&self) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..self.rows()).filter(|&j| self.entries[j].iter().all(Option::is_none)).collect();
        let cols = (0..self.cols).filter(|&i| self.entries.iter().all(|row| row[i].is_none())).collect();
        (rows, cols)
    }

    pub fn check_regular(&self) -> Result<(), ConstructError> {
        let (rows, cols) = self.zero_lines();
        if rows.is_empty() && cols.is_empty() {
            Ok(())
        } else {
            Err(ConstructError::Irregular { rows, cols })
        }
    }

    /// Entries as "0" or the 1-based image list of the permutation.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.as_ref().map_or_else(|| "0".to_string(), |p| format!("{p:?}"))).collect())
            .collect()
    }
}

/// Index of the block holding each point of `set`, in order.
fn hits(labels: &[usize], set: &[usize]) -> Vec<u32> {
    set.iter().map(|&p| labels[p - 1] as u32).collect()
}

/// Entry 0 when the image set lies inside one block; otherwise the bijection
/// sending the k-th point of the set to the index of its block.
pub fn rees_sandwich_from(partitions: &[SetPartition], images: &ImageSystem) -> Result<SandwichMatrix, ConstructError> {
    if let Some(v) = jmin_compatible(partitions, images)?.first() {
        return Err(ConstructError::Incompatible { partition: v.partition, image: v.image });
    }
    let labels: Vec<Vec<usize>> = partitions.iter().map(SetPartition::labels).collect();
    let entries = images
        .sets()
        .iter()
        .map(|set| {
            labels
                .iter()
                .map(|l| {
                    let h = hits(l, set);
                    if h.iter().all(|&b| b == h[0]) {
                        None
                    } else {
                        Some(Permutation::from_images(h).expect("compatible pair gives a bijection"))
                    }
                })
                .collect()
        })
        .collect();
    Ok(SandwichMatrix { entries, cols: partitions.len() })
}

/// A nonzero element (i, σ, j) of the Rees matrix semigroup: block k of
/// partition i goes to the σ(k)-th point of image set j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReesElement {
    pub partition: usize,
    pub group: Permutation,
    pub image: usize,
}

/// (i, g, j)·(i′, g′, j′) = (i, g·p_{j i′}·g′, j′), or `None` for zero. The
/// group product applies its left factor first, so the result acts as the
/// transformation "right factor after left factor".
pub fn rees_multiply(
    x: &ReesElement,
    y: &ReesElement,
    sandwich: &SandwichMatrix,
) -> Result<Option<ReesElement>, ConstructError> {
    if x.image >= sandwich.rows() {
        return Err(ConstructError::IndexOutOfRange { what: "image set", index: x.image });
    }
    if y.partition >= sandwich.cols() {
        return Err(ConstructError::IndexOutOfRange { what: "partition", index: y.partition });
    }
    Ok(sandwich.entry(x.image, y.partition).map(|p| ReesElement {
        partition: x.partition,
        group: x.group.then(p).then(&y.group),
        image: y.image,
    }))
}

fn realize(labels: &[usize], group: &Permutation, set: &[usize]) -> Transformation {
    Transformation::from_zero_based(labels.iter().map(|&k| (set[group.apply(k)] - 1) as u32).collect())
}

/// Symbolic view of the monoid J ∪ {constants} ∪ {1} built from kernel and
/// image data, with the compatibility and regularity gates already passed.
#[derive(Debug, Clone)]
pub struct ReesMonoid {
    partitions: Vec<SetPartition>,
    images: ImageSystem,
    labels: Vec<Vec<usize>>,
    sandwich: SandwichMatrix,
}

impl ReesMonoid {
    pub fn new(partitions: Vec<SetPartition>, images: ImageSystem) -> Result<Self, ConstructError> {
        check_distinct(&partitions, &images)?;
        let sandwich = rees_sandwich_from(&partitions, &images)?;
        sandwich.check_regular()?;
        let labels = partitions.iter().map(SetPartition::labels).collect();
        Ok(Self { partitions, images, labels, sandwich })
    }

    pub fn degree(&self) -> usize {
        self.images.degree()
    }

    pub fn rank(&self) -> usize {
        self.images.rank()
    }

    pub fn partitions(&self) -> &[SetPartition] {
        &self.partitions
    }

    pub fn images(&self) -> &ImageSystem {
        &self.images
    }

    pub fn sandwich(&self) -> &SandwichMatrix {
        &self.sandwich
    }

    /// |J| = n₁ · n₂ · r!, saturating.
    pub fn jclass_size(&self) -> u64 {
        let fact = (1..=self.rank() as u64).fold(1u64, |a, k| a.saturating_mul(k));
        (self.partitions.len() as u64).saturating_mul(self.images.len() as u64).saturating_mul(fact)
    }

    pub fn monoid_size(&self) -> u64 {
        self.jclass_size().saturating_add(self.degree() as u64 + 1)
    }

    pub fn to_transformation(&self, x: &ReesElement) -> Result<Transformation, ConstructError> {
        let labels = self
            .labels
            .get(x.partition)
            .ok_or(ConstructError::IndexOutOfRange { what: "partition", index: x.partition })?;
        let set = self
            .images
            .sets()
            .get(x.image)
            .ok_or(ConstructError::IndexOutOfRange { what: "image set", index: x.image })?;
        if x.group.size() != self.rank() {
            return Err(ConstructError::IndexOutOfRange { what: "permutation size", index: x.group.size() });
        }
        Ok(realize(labels, &x.group, set))
    }

    /// Inverse of [`Self::to_transformation`] on J.
    pub fn rees_coordinates(&self, t: &Transformation) -> Option<ReesElement> {
        let kernel = SetPartition::new(t.degree(), t.kernel()).ok()?;
        let partition = self.partitions.iter().position(|p| *p == kernel)?;
        let image = self.images.sets().iter().position(|s| *s == t.image_set())?;
        let set = &self.images.sets()[image];
        let group = kernel
            .blocks()
            .iter()
            .map(|b| set.iter().position(|&p| p == t.apply(b[0])).map(|k| k as u32))
            .collect::<Option<Vec<u32>>>()
            .and_then(Permutation::from_images)?;
        Some(ReesElement { partition, group, image })
    }

    /// Pairs (i, j) with p_{j i} ≠ 0; each carries one idempotent with
    /// kernel partition i and image set j.
    pub fn idempotent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.partitions.len() {
            for j in 0..self.images.len() {
                if self.sandwich.entry(j, i).is_some() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The idempotent (i, p_{j i}⁻¹, j).
    pub fn idempotent(&self, i: usize, j: usize) -> Option<Transformation> {
        let p = self.sandwich.entries.get(j)?.get(i)?.as_ref()?;
        Some(realize(&self.labels[i], &p.inverse(), &self.images.sets()[j]))
    }

    /// ℰ: the blocks of every partition carrying an idempotent.
    pub fn set_system(&self) -> SetSystem {
        let mut used = vec![false; self.partitions.len()];
        for (i, _) in self.idempotent_pairs() {
            used[i] = true;
        }
        let tagged = self.partitions.iter().enumerate().filter(|(i, _)| used[*i]).flat_map(|(index, p)| {
            p.blocks().iter().map(move |b| (b.clone(), BlockOrigin::Partition { index }))
        });
        SetSystem::from_tagged(self.degree(), tagged)
    }

    /// Γ(M): the clique union over image sets carrying an idempotent.
    pub fn gamma_graph(&self) -> SimpleGraph {
        let mut used = vec![false; self.images.len()];
        for (_, j) in self.idempotent_pairs() {
            used[j] = true;
        }
        let sets: Vec<Vec<usize>> =
            self.images.sets().iter().enumerate().filter(|(j, _)| used[*j]).map(|(_, s)| s.clone()).collect();
        clique_union(self.degree(), &sets)
    }

    /// Condition (3) for the maximal subgroup S_r acting on an idempotent's image.
    pub fn condition3(&self) -> ConditionResult {
        let r = self.rank();
        let (_, j) = self.idempotent_pairs()[0];
        let points = self.images.sets()[j].clone();
        if r <= 8 {
            let elements =
                Permutation::all(r).iter().map(|g| g.images().iter().map(|&k| points[k as usize]).collect()).collect();
            condition3_from_group(&PermutationGroup::new(points, elements)).expect("S_r permutes its points")
        } else {
            ConditionResult::new(
                Status::Pass,
                json!({"image_size": r, "group": "symmetric", "two_transitive": true}),
            )
        }
    }

    pub fn zero_minimal_class(&self) -> ZeroMinimalClass {
        ZeroMinimalClass {
            rank: self.rank(),
            size: Some(self.jclass_size()),
            idempotent_count: self.idempotent_pairs().len(),
            system: self.set_system(),
            graph: self.gamma_graph(),
            condition3: self.condition3(),
        }
    }

    /// The five-condition report, without materializing J.
    pub fn report(&self) -> SimplicityReport {
        assemble_report(self.degree(), Some(self.monoid_size()), true, Ok(self.zero_minimal_class()))
    }

    /// Materializes the monoid and verifies closure.
    pub fn enumerate(&self, cap: u64) -> Result<FiniteMonoid, ConstructError> {
        enumerate_checked(&self.partitions, &self.images, cap)
    }
}

fn check_distinct(partitions: &[SetPartition], images: &ImageSystem) -> Result<(), ConstructError> {
    let n = images.degree();
    let mut seen = FxHashSet::default();
    for (i, p) in partitions.iter().enumerate() {
        if p.degree() != n {
            return Err(ConstructError::InvalidPartition { n, reason: format!("partition {i} has degree {}", p.degree()) });
        }
        if p.len() != images.rank() {
            return Err(ConstructError::BlockCount { partition: i, expected: images.rank(), found: p.len() });
        }
        if !seen.insert(p) {
            return Err(ConstructError::InvalidPartition { n, reason: format!("partition {i} is repeated") });
        }
    }
    let mut sets = FxHashSet::default();
    for (j, s) in images.sets().iter().enumerate() {
        if !sets.insert(s) {
            return Err(ConstructError::InvalidImageSystem { reason: format!("image set {j} is repeated") });
        }
    }
    if partitions.is_empty() || images.is_empty() {
        return Err(ConstructError::InvalidImageSystem { reason: "no partitions or no image sets".into() });
    }
    Ok(())
}

/// Every (i, σ, j) as a transformation, plus the identity and the constants;
/// closure is checked on all products inside J.
fn enumerate_checked(
    partitions: &[SetPartition],
    images: &ImageSystem,
    cap: u64,
) -> Result<FiniteMonoid, ConstructError> {
    check_distinct(partitions, images)?;
    let n = images.degree();
    let r = images.rank();
    let fact = (1..=r as u64).fold(1u64, |a, k| a.saturating_mul(k));
    let needed = (partitions.len() as u64)
        .saturating_mul(images.len() as u64)
        .saturating_mul(fact)
        .saturating_add(n as u64 + 1);
    if needed > cap {
        return Err(ConstructError::CapExceeded { needed, cap });
    }
    let perms = Permutation::all(r);
    let mut jclass = Vec::with_capacity(needed as usize);
    for p in partitions {
        let labels = p.labels();
        for set in images.sets() {
            for g in &perms {
                jclass.push(realize(&labels, g, set));
            }
        }
    }
    if let Some(err) = first_closure_violation(n, &jclass) {
        return Err(err);
    }
    let mut elements = jclass;
    elements.push(Transformation::identity(n));
    elements.extend((1..=n).map(|p| Transformation::constant(n, p)));
    Ok(FiniteMonoid::from_verified(n, elements))
}

/// Every product of two elements of J must be in J or constant.
fn first_closure_violation(n: usize, jclass: &[Transformation]) -> Option<ConstructError> {
    let members: FxHashSet<&[u32]> = jclass.iter().map(Transformation::as_zero_based).collect();
    let workers = std::thread::available_parallelism().map_or(1, |k| k.get()).min(16);
    let chunk = jclass.len().div_ceil(workers).max(1);
    let found: Vec<Option<(usize, usize, Vec<u32>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = jclass
            .chunks(chunk)
            .enumerate()
            .map(|(c, rows)| {
                let members = &members;
                s.spawn(move || {
                    let mut buf = vec![0u32; n];
                    for (a_off, a) in rows.iter().enumerate() {
                        for (b, y) in jclass.iter().enumerate() {
                            compose_into(a.as_zero_based(), y.as_zero_based(), &mut buf);
                            let constant = buf.iter().all(|&q| q == buf[0]);
                            if !constant && !members.contains(buf.as_slice()) {
                                return Some((c * chunk + a_off, b, buf));
                            }
                        }
                    }
                    None
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("closure worker panicked")).collect()
    });
    found.into_iter().flatten().next().map(|(a, b, buf)| {
        let product = Transformation::from_zero_based(buf);
        ConstructError::ClosureViolation {
            left: jclass[a].clone(),
            right: jclass[b].clone(),
            rank: product.rank(),
            product,
        }
    })
}

/// The outcome of [`assemble_monoid`].
#[derive(Debug, Clone)]
pub enum Assembled {
    Explicit { monoid: FiniteMonoid, handle: ReesMonoid },
    Symbolic(ReesMonoid),
}

impl Assembled {
    pub fn handle(&self) -> &ReesMonoid {
        match self {
            Assembled::Explicit { handle, .. } | Assembled::Symbolic(handle) => handle,
        }
    }

    pub fn monoid(&self) -> Option<&FiniteMonoid> {
        match self {
            Assembled::Explicit { monoid, .. } => Some(monoid),
            Assembled::Symbolic(_) => None,
        }
    }
}

/// With `enumerate`, every element is materialized and closure is verified
/// before the compatibility and regularity gates; otherwise only the gates run.
pub fn assemble_monoid(
    partitions: &[SetPartition],
    images: &ImageSystem,
    enumerate: bool,
    cap: u64,
) -> Result<Assembled, ConstructError> {
    if enumerate {
        let monoid = enumerate_checked(partitions, images, cap)?;
        let handle = ReesMonoid::new(partitions.to_vec(), images.clone())?;
        Ok(Assembled::Explicit { monoid, handle })
    } else {
        Ok(Assembled::Symbolic(ReesMonoid::new(partitions.to_vec(), images.clone())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{gamma_graph, set_system, simplicity_report, Verdict};
    use crate::green::{green_structure, zero_minimal_jclass, ZeroMinimal};
    use crate::transformation::compose;

    fn i3() -> ImageSystem {
        ImageSystem::new(6, 3, vec![vec![1, 2, 3], vec![3, 4, 5], vec![5, 6, 1]]).unwrap()
    }

    fn items(which: &[usize]) -> Vec<SetPartition> {
        let all = super::super::r3_items();
        which.iter().map(|&k| all[k - 1].clone()).collect()
    }

    #[test]
    fn item4_column_has_no_zero() {
        let s = rees_sandwich_from(&items(&[1, 2, 3, 4]), &i3()).unwrap();
        assert_eq!((s.rows(), s.cols()), (3, 4));
        assert!((0..3).all(|j| s.entry(j, 3).is_some()));
        assert!(s.entry(0, 0).is_none());
    }

    #[test]
    fn single_partition_with_sets_inside_blocks_is_irregular() {
        let p = SetPartition::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let images = ImageSystem::new(4, 2, vec![vec![1, 2]]).unwrap();
        let s = rees_sandwich_from(std::slice::from_ref(&p), &images).unwrap();
        assert!(matches!(s.check_regular(), Err(ConstructError::Irregular { .. })));
        assert!(ReesMonoid::new(vec![p], images).is_err());
    }

    #[test]
    fn r3_enumeration_size_and_cross_checks() {
        let parts = items(&[1, 2, 3]);
        let a = assemble_monoid(&parts, &i3(), true, 10_000).unwrap();
        let m = a.monoid().unwrap();
        assert_eq!(m.len(), 61);
        m.check_closed().unwrap();
        let h = a.handle();
        assert_eq!(h.monoid_size(), 61);
        let gs = green_structure(m);
        let ZeroMinimal::Unique(j) = zero_minimal_jclass(m, &gs).unwrap() else { panic!() };
        assert_eq!(j.elements.len(), 54);
        assert_eq!(set_system(m, &j).unwrap().blocks(), h.set_system().blocks());
        assert_eq!(gamma_graph(m, &j), h.gamma_graph());
        let explicit = simplicity_report(m).unwrap();
        let symbolic = h.report();
        assert_eq!(explicit.verdict, Verdict::Simple);
        assert_eq!(symbolic.verdict, Verdict::Simple);
        assert_eq!(explicit.to_json()["conditions"], symbolic.to_json()["conditions"]);
        for (i, jj) in h.idempotent_pairs() {
            let e = h.idempotent(i, jj).unwrap();
            assert!(e.is_idempotent());
            assert!(m.contains(&e));
        }
        assert_eq!(j.idempotents.len(), h.zero_minimal_class().idempotent_count);
    }

    #[test]
    fn rees_product_matches_composition() {
        let parts = items(&[1, 2, 3, 4]);
        let h = ReesMonoid::new(parts, i3()).unwrap();
        let perms = Permutation::all(3);
        for i in 0..4 {
            for j in 0..3 {
                for i2 in 0..4 {
                    for j2 in [0, 2] {
                        let x = ReesElement { partition: i, group: perms[(i + j) % 6].clone(), image: j };
                        let y = ReesElement { partition: i2, group: perms[(i2 * 5 + j2) % 6].clone(), image: j2 };
                        let tx = h.to_transformation(&x).unwrap();
                        let ty = h.to_transformation(&y).unwrap();
                        let composed = compose(&ty, &tx).unwrap();
                        match rees_multiply(&x, &y, h.sandwich()).unwrap() {
                            Some(z) => {
                                assert_eq!(h.to_transformation(&z).unwrap(), composed);
                                assert_eq!(h.rees_coordinates(&composed), Some(z));
                            }
                            None => assert!(composed.is_constant()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn identity_entries_give_identity_group() {
        let parts = items(&[1, 2, 3, 4]);
        let h = ReesMonoid::new(parts, i3()).unwrap();
        let id = Permutation::identity(3);
        for i in 0..4 {
            for j in 0..3 {
                if h.sandwich().entry(j, i).is_some_and(Permutation::is_identity) {
                    let x = ReesElement { partition: 1, group: id.clone(), image: j };
                    let y = ReesElement { partition: i, group: id.clone(), image: 2 };
                    let z = rees_multiply(&x, &y, h.sandwich()).unwrap().unwrap();
                    assert_eq!(z, ReesElement { partition: 1, group: id.clone(), image: 2 });
                }
            }
        }
        let x = ReesElement { partition: 0, group: id.clone(), image: 7 };
        assert!(rees_multiply(&x, &x, h.sandwich()).is_err());
    }

    #[test]
    fn t3_as_rees_spot_check() {
        let parts = vec![
            SetPartition::new(3, vec![vec![1, 2], vec![3]]).unwrap(),
            SetPartition::new(3, vec![vec![1], vec![2, 3]]).unwrap(),
            SetPartition::new(3, vec![vec![1, 3], vec![2]]).unwrap(),
        ];
        let images = ImageSystem::new(3, 2, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let h = ReesMonoid::new(parts, images).unwrap();
        let e = Transformation::new(vec![1, 1, 3]).unwrap();
        let f = Transformation::new(vec![1, 3, 3]).unwrap();
        let (x, y) = (h.rees_coordinates(&e).unwrap(), h.rees_coordinates(&f).unwrap());
        let z = rees_multiply(&x, &y, h.sandwich()).unwrap().unwrap();
        assert_eq!(h.to_transformation(&z).unwrap(), compose(&f, &e).unwrap());
        // the rank-2 maps, the constants and the identity
        let m = h.enumerate(100).unwrap();
        assert_eq!(m.len(), 18 + 3 + 1);
    }

    #[test]
    fn incompatible_input_is_a_closure_violation() {
        let bad = SetPartition::new(6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let mut parts = items(&[1, 2, 3]);
        parts.push(bad);
        match assemble_monoid(&parts, &i3(), true, 10_000) {
            Err(ConstructError::ClosureViolation { rank, .. }) => assert!(rank > 1 && rank < 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            assemble_monoid(&parts, &i3(), false, 10_000),
            Err(ConstructError::Incompatible { partition: 3, .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            assemble_monoid(&items(&[1, 2, 3]), &i3(), true, 60),
            Err(ConstructError::CapExceeded { needed: 61, cap: 60 })
        ));
    }
}
