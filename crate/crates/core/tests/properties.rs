use augsimp_core::analysis::{incidence_matrix, simplicity_report, BlockOrigin, SetSystem};
use augsimp_core::construct::{
    assemble_monoid, build_family, build_r3, build_r4, jmin_compatible, ConstructError, FamilyVariant, ImageSystem,
    R4Example, SetPartition,
};
use augsimp_core::graph::{random_spanning_tree, SimpleGraph};
use augsimp_core::green::{green_structure, zero_minimal_jclass, ZeroMinimal};
use augsimp_core::monoid::full_transformation_monoid;
use augsimp_core::rank2::{difference_set, signed_incidence};
use augsimp_core::transformation::compose;
use augsimp_core::FiniteMonoid;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn composition_is_associative_on_t4() {
    let t4 = full_transformation_monoid(4);
    let els = t4.elements();
    assert_eq!(els.len(), 256);
    for f in els {
        for g in els {
            let fg = compose(f, g).unwrap();
            for h in els {
                assert_eq!(compose(&fg, h).unwrap(), compose(f, &compose(g, h).unwrap()).unwrap());
            }
        }
    }
}

/// Kernels of idempotents in J are the partitions, their images the image
/// sets, and Γ and the report agree with the symbolic handle.
fn cross_validate(parts: &[SetPartition], images: &ImageSystem) {
    let assembled = assemble_monoid(parts, images, true, 1_000_000).unwrap();
    let m: &FiniteMonoid = assembled.monoid().unwrap();
    let h = assembled.handle();
    assert_eq!(m.len() as u64, h.monoid_size());
    let gs = green_structure(m);
    let ZeroMinimal::Unique(j) = zero_minimal_jclass(m, &gs).unwrap() else { panic!("no unique 0-minimal class") };
    assert_eq!(j.rank, images.rank());
    assert_eq!(j.elements.len() as u64, h.jclass_size());
    let mut kernels: Vec<SetPartition> = j
        .idempotents
        .iter()
        .map(|&e| SetPartition::new(m.degree(), m.element(e).kernel()).unwrap())
        .collect();
    kernels.sort();
    kernels.dedup();
    let mut expected = parts.to_vec();
    expected.sort();
    assert_eq!(kernels, expected);
    let mut imgs: Vec<Vec<usize>> = j.idempotents.iter().map(|&e| m.element(e).image_set()).collect();
    imgs.sort();
    imgs.dedup();
    let mut expected_imgs = images.sets().to_vec();
    expected_imgs.sort();
    assert_eq!(imgs, expected_imgs);
    let explicit = simplicity_report(m).unwrap();
    let symbolic = h.report();
    assert_eq!(explicit.to_json(), symbolic.to_json());
}

#[test]
fn symbolic_matches_enumerated_r3() {
    for sel in [&[1, 2, 3, 4][..], &[1, 2, 4]] {
        let (parts, images) = build_r3(sel).unwrap();
        cross_validate(&parts, &images);
    }
}

#[test]
fn symbolic_matches_enumerated_r4() {
    for ex in [R4Example::Simple, R4Example::NonSimple] {
        let (parts, images) = build_r4(ex);
        cross_validate(&parts, &images);
    }
}

#[test]
fn symbolic_matches_enumerated_r5() {
    for v in [FamilyVariant::B, FamilyVariant::Bprime] {
        let b = build_family(5, v).unwrap();
        cross_validate(&b.partitions, &b.images);
    }
}

#[test]
fn family_graphs_are_connected_but_not_complete() {
    for r in 5..=8 {
        for v in [FamilyVariant::B, FamilyVariant::Bprime] {
            let b = build_family(r, v).unwrap();
            let g = b.handle.gamma_graph();
            assert!(g.is_connected(), "r={r} {v:?}");
            assert!(!g.is_complete());
            assert!(!g.has_edge(b.labels.penultimate(1), b.labels.penultimate(2)));
        }
    }
}

#[test]
fn family_incidence_ranks() {
    let expected_bprime = [(5, 19), (6, 28), (7, 39), (8, 50)];
    for (r, bprime) in expected_bprime {
        let b = build_family(r, FamilyVariant::B).unwrap();
        assert_eq!(incidence_matrix(&b.handle.set_system()).rank(), r * (r - 1));
        let bp = build_family(r, FamilyVariant::Bprime).unwrap();
        assert_eq!(incidence_matrix(&bp.handle.set_system()).rank(), bprime);
    }
}

fn system_strategy() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    (4usize..=8).prop_flat_map(|n| {
        let set = proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 3);
        let labels = proptest::collection::vec(0usize..3, n);
        (Just(n), proptest::collection::vec(set, 1..=3), proptest::collection::vec(labels, 1..=3))
    })
}

fn to_partitions(labels: Vec<Vec<usize>>) -> Vec<SetPartition> {
    let mut parts: Vec<SetPartition> =
        labels.iter().map(|l| SetPartition::from_labels(l)).filter(|p| p.len() == 3).collect();
    parts.sort();
    parts.dedup();
    parts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_holds_iff_compatible((n, sets, labels) in system_strategy()) {
        let parts = to_partitions(labels);
        prop_assume!(!parts.is_empty());
        let mut sets = sets;
        sets.sort();
        sets.dedup();
        let images = ImageSystem::new(n, 3, sets).unwrap();
        let compatible = jmin_compatible(&parts, &images).unwrap().is_empty();
        match assemble_monoid(&parts, &images, true, 100_000) {
            Ok(a) => {
                prop_assert!(compatible);
                a.monoid().unwrap().check_closed().unwrap();
            }
            Err(ConstructError::ClosureViolation { rank, .. }) => {
                prop_assert!(!compatible);
                prop_assert!(rank > 1 && rank < 3);
            }
            Err(ConstructError::Irregular { .. }) => prop_assert!(compatible),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn tree_rank_matches_incidence_rank(
        n in 3usize..=7,
        labels in proptest::collection::vec(proptest::collection::vec(0usize..4, 7), 1..=4),
        seed in any::<u64>(),
    ) {
        let tagged = labels.iter().enumerate().flat_map(|(index, l)| {
            SetPartition::from_labels(&l[..n])
                .blocks()
                .iter()
                .map(|b| (b.clone(), BlockOrigin::Partition { index }))
                .collect::<Vec<_>>()
        });
        let s = SetSystem::from_tagged(n, tagged);
        let inc = incidence_matrix(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_spanning_tree(&SimpleGraph::complete(n), &mut rng).unwrap();
        let signed = signed_incidence(&inc, &difference_set(&tree)).unwrap();
        prop_assert_eq!(inc.rank() == n, signed.rank() == n - 1);
    }
}
