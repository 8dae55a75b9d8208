//! The set system ℰ, the graph Γ(M) and the five-condition simplicity check.

mod falsifier;
mod report;
mod system;

pub use falsifier::{cyclic_submodule_falsifier, FalsifierWitness, TrialSource};
pub use report::{
    assemble_report, check_bound_b, check_condition3, condition3_from_group, simplicity_report, simplicity_report_with,
    zero_minimal_class, ConditionResult, SimplicityReport, Status, Verdict, ZeroMinimalClass,
};
pub use system::{clique_union, gamma_graph, incidence_matrix, set_system, wperp, BlockOrigin, SetSystem};

pub(crate) use system::block_label;

use thiserror::Error;

use crate::green::GreenError;
use crate::perm::PermError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("the monoid is a group; the characterization needs a non-group monoid")]
    GroupInput,
    #[error("the J-class has no idempotent")]
    IrregularClass,
    #[error(transparent)]
    Green(GreenError),
    #[error(transparent)]
    Perm(PermError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::green::{green_structure, zero_minimal_jclass, ZeroMinimal};
    use crate::monoid::{full_transformation_monoid, generate_closure, FiniteMonoid};
    use crate::transformation::Transformation;

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    fn disconnected_example() -> FiniteMonoid {
        generate_closure(4, &[t(&[1, 2, 1, 2]), t(&[3, 4, 3, 4]), t(&[1, 1, 1, 1])], 100).unwrap()
    }

    fn zero_minimal(m: &FiniteMonoid) -> crate::green::JClassInfo {
        let gs = green_structure(m);
        match zero_minimal_jclass(m, &gs).unwrap() {
            ZeroMinimal::Unique(j) => j,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn t3_set_system_and_graph() {
        let m = full_transformation_monoid(3);
        let j = zero_minimal(&m);
        let s = set_system(&m, &j).unwrap();
        assert_eq!(s.blocks(), &[vec![1], vec![1, 2], vec![1, 3], vec![2], vec![2, 3], vec![3]]);
        assert_eq!(gamma_graph(&m, &j), SimpleGraph::complete(3));
        for &f in &j.idempotents {
            let kernel = m.element(f).kernel();
            let mut union: Vec<usize> = kernel.concat();
            union.sort();
            assert_eq!(union, vec![1, 2, 3]);
        }
    }

    #[test]
    fn disconnected_example_system() {
        let m = disconnected_example();
        let j = zero_minimal(&m);
        let s = set_system(&m, &j).unwrap();
        assert_eq!(s.blocks(), &[vec![1, 3], vec![2, 4]]);
        let g = gamma_graph(&m, &j);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (3, 4)]);
        assert!(!g.is_connected());
    }

    #[test]
    fn singleton_system_has_trivial_wperp() {
        let s = SetSystem::from_tagged(3, (1..=3).map(|p| (vec![p], BlockOrigin::Partition { index: 0 })));
        assert!(wperp(&s).is_empty());
        assert_eq!(incidence_matrix(&s).rank(), 3);
    }

    #[test]
    fn t3_report_is_simple() {
        let r = simplicity_report(&full_transformation_monoid(3)).unwrap();
        assert_eq!(r.verdict, Verdict::Simple);
        assert_eq!(r.incidence_rank, Some(3));
        assert!(r.conditions.iter().all(ConditionResult::passed));
        assert_eq!(r.to_json()["conditions"][3]["status"], "pass");
    }

    #[test]
    fn disconnected_report_fails_condition5() {
        let r = simplicity_report(&disconnected_example()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSimple);
        assert_eq!(r.conditions[4].status, Status::Fail);
        assert_eq!(r.conditions[2].status, Status::Pass);
    }

    #[test]
    fn short_circuit_without_constants() {
        let m = generate_closure(3, &[t(&[1, 1, 3])], 10).unwrap();
        let r = simplicity_report(&m).unwrap();
        assert_eq!(r.conditions[0].status, Status::Fail);
        assert!(r.conditions[1..].iter().all(|c| c.status == Status::NotEvaluated));
        assert_eq!(r.verdict, Verdict::NotSimple);
    }

    #[test]
    fn group_input_is_an_error() {
        let m = generate_closure(3, &[t(&[2, 3, 1])], 10).unwrap();
        assert_eq!(simplicity_report(&m), Err(AnalysisError::GroupInput));
    }

    #[test]
    fn condition3_fails_for_cyclic_subgroup() {
        // the rank-4 class is generated by an idempotent with image {1,2,3,4}
        // and a 4-cycle on that image; constants sit below it
        let e = t(&[1, 2, 3, 4, 4]);
        let c = t(&[2, 3, 4, 1, 1]);
        let m = generate_closure(5, &[e, c, t(&[1, 1, 1, 1, 1])], 1000).unwrap();
        let gs = green_structure(&m);
        let j = zero_minimal(&m);
        assert_eq!(j.rank, 4);
        let r = check_condition3(&m, &gs, &j).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.evidence["group_order"], 4);
    }

    #[test]
    fn falsifier_examples() {
        let w = cyclic_submodule_falsifier(&disconnected_example(), 20, 1).unwrap();
        assert!(w.submodule_dim < 3);
        assert!(w.vector.iter().any(|&x| x != 0));
        assert_eq!(w.vector.iter().sum::<i64>(), 0);
        assert!(cyclic_submodule_falsifier(&full_transformation_monoid(3), 100, 1).is_none());
    }

    #[test]
    fn bound_b() {
        assert!(check_bound_b(3, 3, 6, Verdict::Simple));
        assert!(check_bound_b(5, 5, 20, Verdict::Simple));
        assert!(check_bound_b(1, 4, 4, Verdict::Simple));
        assert!(!check_bound_b(1, 4, 5, Verdict::Simple));
        assert!(!check_bound_b(2, 3, 6, Verdict::Simple));
        assert!(check_bound_b(2, 3, 6, Verdict::NotSimple));
    }
}
