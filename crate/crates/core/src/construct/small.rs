use serde::{Deserialize, Serialize};

use super::{ConstructError, ImageSystem, ReesMonoid, SetPartition};

fn partition(n: usize, blocks: &[&[usize]]) -> SetPartition {
    SetPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).expect("hand-entered partition")
}

/// Three triangles on six points, each sharing one vertex with the next.
pub fn r3_images() -> ImageSystem {
    ImageSystem::new(6, 3, vec![vec![1, 2, 3], vec![3, 4, 5], vec![5, 6, 1]]).expect("valid image system")
}

/// The four admissible kernel partitions for the rank-3 triangle system.
pub fn r3_items() -> Vec<SetPartition> {
    vec![
        partition(6, &[&[1, 2, 3], &[4, 6], &[5]]),
        partition(6, &[&[3, 4, 5], &[2, 6], &[1]]),
        partition(6, &[&[5, 6, 1], &[2, 4], &[3]]),
        partition(6, &[&[2, 5], &[1, 4], &[3, 6]]),
    ]
}

/// Kernel data for a selection of items (1-based). Accepted selections are
/// those of size 3 or 4 passing the compatibility and regularity gates.
pub fn build_r3(selection: &[usize]) -> Result<(Vec<SetPartition>, ImageSystem), ConstructError> {
    let bad = |reason: String| ConstructError::InvalidSelection { reason };
    let mut sel = selection.to_vec();
    sel.sort_unstable();
    sel.dedup();
    if sel.len() != selection.len() {
        return Err(bad("repeated item".into()));
    }
    if !(3..=4).contains(&sel.len()) {
        return Err(bad(format!("{} items selected, expected 3 or 4", sel.len())));
    }
    if let Some(&k) = sel.iter().find(|&&k| !(1..=4).contains(&k)) {
        return Err(bad(format!("item {k} does not exist")));
    }
    let items = r3_items();
    let parts: Vec<SetPartition> = sel.iter().map(|&k| items[k - 1].clone()).collect();
    let images = r3_images();
    ReesMonoid::new(parts.clone(), images.clone()).map_err(|e| bad(e.to_string()))?;
    Ok((parts, images))
}

/// A square with an inner square of midpoints on twelve points.
pub fn r4_images() -> ImageSystem {
    ImageSystem::new(
        12,
        4,
        vec![vec![1, 2, 3, 4], vec![4, 5, 6, 7], vec![7, 8, 9, 10], vec![10, 11, 12, 1], vec![2, 5, 8, 11]],
    )
    .expect("valid image system")
}

/// The seven displayed admissible partitions for the rank-4 square.
pub fn r4_displayed_partitions() -> Vec<SetPartition> {
    vec![
        partition(12, &[&[1, 2, 3, 4], &[7, 8, 9, 10], &[5, 12], &[11, 6]]),
        partition(12, &[&[1, 2, 3, 4, 9], &[5, 10], &[7, 11], &[6, 8, 12]]),
        partition(12, &[&[2, 5, 8, 11], &[1, 6, 9], &[3, 7, 12], &[4, 10]]),
        partition(12, &[&[2, 5, 8, 11], &[1, 7], &[3, 6, 10], &[4, 9, 12]]),
        partition(12, &[&[2, 5, 8, 11], &[1, 7], &[3, 6, 9, 12], &[4, 10]]),
        partition(12, &[&[2, 6, 10], &[5, 1, 9], &[8, 4, 12], &[11, 3, 7]]),
        partition(12, &[&[2, 7, 12], &[5, 3, 10], &[8, 1, 6], &[11, 4, 9]]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum R4Example {
    Simple,
    NonSimple,
}

pub fn build_r4(example: R4Example) -> (Vec<SetPartition>, ImageSystem) {
    let parts = match example {
        R4Example::Simple => vec![
            partition(12, &[&[1, 2, 3, 4], &[7, 8, 9, 10], &[5, 12], &[11, 6]]),
            partition(12, &[&[4, 5, 6, 7], &[10, 11, 12, 1], &[2, 9], &[3, 8]]),
            partition(12, &[&[1, 2, 3, 4, 9], &[5, 10], &[7, 11], &[6, 8, 12]]),
            partition(12, &[&[2, 5, 8, 11], &[1, 6, 9], &[3, 7, 12], &[4, 10]]),
        ],
        R4Example::NonSimple => vec![
            partition(12, &[&[1, 2, 3, 4, 9], &[5, 10], &[7, 11], &[6, 8, 12]]),
            partition(12, &[&[4, 5, 6, 7, 12], &[1, 8], &[9, 11, 3], &[2, 10]]),
            partition(12, &[&[7, 8, 9, 10, 3], &[4, 11], &[2, 6, 12], &[1, 5]]),
            partition(12, &[&[10, 11, 12, 1, 6], &[2, 7], &[3, 5, 9], &[4, 8]]),
        ],
    };
    (parts, r4_images())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{incidence_matrix, Verdict};
    use crate::construct::{enumerate_admissible_partitions, jmin_compatible};

    #[test]
    fn r3_classification() {
        assert_eq!(enumerate_admissible_partitions(&r3_images()).unwrap(), {
            let mut v = r3_items();
            v.sort();
            v
        });
    }

    #[test]
    fn r3_selections() {
        for sel in [&[1, 2, 3, 4][..], &[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]] {
            let (parts, images) = build_r3(sel).unwrap();
            let report = ReesMonoid::new(parts, images).unwrap().report();
            assert_eq!(report.incidence_rank, Some(6), "{sel:?}");
            assert_eq!(report.verdict, Verdict::Simple);
        }
        assert!(build_r3(&[1, 2]).is_err());
        assert!(build_r3(&[1, 1, 2]).is_err());
        assert!(build_r3(&[1, 2, 5]).is_err());
    }

    #[test]
    fn r4_examples_validate() {
        for ex in [R4Example::Simple, R4Example::NonSimple] {
            let (parts, images) = build_r4(ex);
            assert!(jmin_compatible(&parts, &images).unwrap().is_empty());
            ReesMonoid::new(parts, images).unwrap();
        }
        assert!(jmin_compatible(&r4_displayed_partitions(), &r4_images()).unwrap().is_empty());
    }

    #[test]
    fn r4_ranks() {
        let rank = |ex| {
            let (parts, images) = build_r4(ex);
            incidence_matrix(&ReesMonoid::new(parts, images).unwrap().set_system()).rank()
        };
        assert_eq!(rank(R4Example::Simple), 12);
        assert_eq!(rank(R4Example::NonSimple), 10);
    }
}
