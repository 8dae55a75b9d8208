//! The sandwich-matrix criterion for a 0-minimal J-class of rank 2.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{block_label, Verdict};
use crate::graph::SimpleGraph;
use crate::green::{maximal_subgroup, zero_minimal_jclass, GreenStructure, JClassInfo, ZeroMinimal};
use crate::linalg::{Rational, RationalMatrix};
use crate::monoid::FiniteMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rank2Error {
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("the monoid is a group")]
    GroupInput,
    #[error("hypothesis violated: the monoid has no constant map")]
    NoConstant,
    #[error("hypothesis violated: M \\ I(M) has no unique minimal J-class")]
    NoUniqueMinimal,
    #[error("hypothesis violated: the minimal J-class above I(M) is not regular")]
    IrregularClass,
    #[error("hypothesis violated: the J-class has rank {rank}, not 2")]
    RankNotTwo { rank: usize },
    #[error("pair ({i}, {j}) references a row outside 1..={rows}")]
    IndexOutOfRange { i: usize, j: usize, rows: usize },
}

/// Δ(Γ): one pair (i, j), i < j, per edge, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSet {
    pub pairs: Vec<(usize, usize)>,
}

pub fn difference_set(g: &SimpleGraph) -> DifferenceSet {
    DifferenceSet { pairs: g.edges().collect() }
}

fn pair_label(i: usize, j: usize) -> String {
    format!("{i}-{j}")
}

/// Rows ω_i − ω_j of the incidence matrix for each pair of `d`.
pub fn signed_incidence(incidence: &RationalMatrix, d: &DifferenceSet) -> Result<RationalMatrix, Rank2Error> {
    let rows = incidence.rows();
    let mut out = RationalMatrix::zeros(d.pairs.len(), incidence.cols());
    for (k, &(i, j)) in d.pairs.iter().enumerate() {
        if i == 0 || j == 0 || i > rows || j > rows {
            return Err(Rank2Error::IndexOutOfRange { i, j, rows });
        }
        for c in 0..incidence.cols() {
            out.set(k, c, incidence.get(i - 1, c) - incidence.get(j - 1, c));
        }
    }
    let out = out.with_row_labels(d.pairs.iter().map(|&(i, j)| pair_label(i, j)).collect());
    Ok(match incidence.col_labels() {
        Some(l) => out.with_col_labels(l.to_vec()),
        None => out,
    })
}

/// An entry of the sandwich matrix over G ∪ {0}, G = {1_G, g}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichEntry {
    Zero,
    Identity,
    Flip,
}

impl SandwichEntry {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Zero => "0",
            Self::Identity => "1",
            Self::Flip => "g",
        }
    }

    pub fn signed(self) -> i64 {
        match self {
            Self::Zero => 0,
            Self::Identity => 1,
            Self::Flip => -1,
        }
    }
}

/// N₁, N₂ and the sandwich matrix P of a rank-2 J-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesData {
    pub n: usize,
    pub group_order: usize,
    /// Kernel blocks containing point 1, ordered by characteristic vector, descending.
    pub n1_kernels: Vec<Vec<usize>>,
    pub n2_images: Vec<(usize, usize)>,
    /// Rows indexed by `n2_images`, columns by `n1_kernels`.
    pub p: Vec<Vec<SandwichEntry>>,
}

fn indicator_order(n: usize, a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    let ind = |s: &[usize]| (1..=n).map(|p| s.contains(&p)).collect::<Vec<bool>>();
    ind(b).cmp(&ind(a))
}

pub fn sandwich_data(m: &FiniteMonoid, gs: &GreenStructure, j: &JClassInfo) -> Result<ReesData, Rank2Error> {
    if j.rank != 2 {
        return Err(Rank2Error::RankNotTwo { rank: j.rank });
    }
    if !j.is_regular {
        return Err(Rank2Error::IrregularClass);
    }
    let mut kernels: Vec<Vec<usize>> = j
        .idempotents
        .iter()
        .map(|&e| m.element(e).kernel_block_of(1))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    kernels.sort_by(|a, b| indicator_order(m.degree(), a, b));
    let images: Vec<(usize, usize)> = j
        .idempotents
        .iter()
        .map(|&e| {
            let s = m.element(e).image_set();
            (s[0], s[1])
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let group = maximal_subgroup(m, gs, j.idempotents[0]).expect("idempotent");
    let group_order = group.order();
    assert!(group_order == 1 || group_order == 2, "maximal subgroup of a rank-2 class has order {group_order}");
    let p = images
        .iter()
        .map(|&(i, jj)| {
            kernels
                .iter()
                .map(|b| match (b.contains(&i), b.contains(&jj)) {
                    (true, false) => SandwichEntry::Identity,
                    (false, true) => SandwichEntry::Flip,
                    _ => SandwichEntry::Zero,
                })
                .collect()
        })
        .collect();
    Ok(ReesData { n: m.degree(), group_order, n1_kernels: kernels, n2_images: images, p })
}

impl ReesData {
    fn row_labels(&self) -> Vec<String> {
        self.n2_images.iter().map(|&(i, j)| pair_label(i, j)).collect()
    }

    fn col_labels(&self) -> Vec<String> {
        self.n1_kernels.iter().map(|b| block_label(b)).collect()
    }

    /// P in the matrix dump layout, entries "0", "1" (for 1_G) or "g".
    pub fn dump_p(&self) -> String {
        let mut out = format!("% shape\t{}\t{}\n", self.p.len(), self.n1_kernels.len());
        out += &format!("% rows\t{}\n% cols\t{}\n", self.row_labels().join("\t"), self.col_labels().join("\t"));
        for row in &self.p {
            let cells: Vec<&str> = row.iter().map(|e| e.symbol()).collect();
            out += &cells.join("\t");
            out.push('\n');
        }
        out
    }
}

/// P′: 0 ↦ 0, 1_G ↦ 1, g ↦ −1.
pub fn signed_sandwich(r: &ReesData) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(r.p.len(), r.n1_kernels.len());
    for (i, row) in r.p.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            out.set(i, k, Rational::from_integer(BigInt::from(e.signed())));
        }
    }
    out.with_row_labels(r.row_labels()).with_col_labels(r.col_labels())
}

/// Result of the rank-2 criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank2Outcome {
    pub data: ReesData,
    pub pprime: RationalMatrix,
    pub rank: usize,
    pub verdict: Verdict,
}

impl Rank2Outcome {
    pub fn to_json(&self) -> Value {
        json!({
            "rank2": {
                "n": self.data.n,
                "group_order": self.data.group_order,
                "N1": self.data.n1_kernels,
                "N2": self.data.n2_images.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
                "P": self.data.dump_p(),
                "Pprime": self.pprime.dump(),
                "rank": self.rank,
                "verdict": self.verdict,
            }
        })
    }
}

/// Checks the standing hypotheses and returns the 0-minimal class.
pub fn rank2_class(m: &FiniteMonoid, gs: &GreenStructure) -> Result<JClassInfo, Rank2Error> {
    if m.degree() < 2 {
        return Err(Rank2Error::DegreeTooSmall);
    }
    if m.is_group() {
        return Err(Rank2Error::GroupInput);
    }
    if !m.has_constant() {
        return Err(Rank2Error::NoConstant);
    }
    let j = match zero_minimal_jclass(m, gs).map_err(|_| Rank2Error::GroupInput)? {
        ZeroMinimal::Unique(j) => j,
        ZeroMinimal::NotUnique { .. } => return Err(Rank2Error::NoUniqueMinimal),
    };
    if !j.is_regular {
        return Err(Rank2Error::IrregularClass);
    }
    if j.rank != 2 {
        return Err(Rank2Error::RankNotTwo { rank: j.rank });
    }
    Ok(j)
}

/// Simple iff rank P′ = n − 1.
pub fn rank2_verdict(m: &FiniteMonoid) -> Result<Rank2Outcome, Rank2Error> {
    let gs = GreenStructure::new(m);
    rank2_verdict_with(m, &gs)
}

pub fn rank2_verdict_with(m: &FiniteMonoid, gs: &GreenStructure) -> Result<Rank2Outcome, Rank2Error> {
    let j = rank2_class(m, gs)?;
    let data = sandwich_data(m, gs, &j)?;
    let pprime = signed_sandwich(&data);
    let rank = pprime.rank();
    let verdict = if rank == m.degree() - 1 { Verdict::Simple } else { Verdict::NotSimple };
    Ok(Rank2Outcome { data, pprime, rank, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{gamma_graph, incidence_matrix, set_system};
    use crate::monoid::{full_transformation_monoid, generate_closure};
    use crate::transformation::Transformation;
    use SandwichEntry::{Flip as G, Identity as I, Zero as Z};

    fn t(v: &[usize]) -> Transformation {
        Transformation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn difference_sets() {
        let path = SimpleGraph::from_edges(3, [(2, 3), (1, 2)]);
        assert_eq!(difference_set(&path).pairs, vec![(1, 2), (2, 3)]);
        assert_eq!(difference_set(&SimpleGraph::complete(3)).pairs, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn signed_incidence_examples() {
        let id = RationalMatrix::identity(3);
        let s = signed_incidence(&id, &DifferenceSet { pairs: vec![(1, 2)] }).unwrap();
        assert_eq!(s, RationalMatrix::from_integer_rows(&[vec![1, -1, 0]]).with_row_labels(vec!["1-2".into()]));
        let empty = signed_incidence(&id, &DifferenceSet { pairs: vec![] }).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));
        assert!(matches!(
            signed_incidence(&id, &DifferenceSet { pairs: vec![(1, 4)] }),
            Err(Rank2Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn t3_sandwich() {
        let m = full_transformation_monoid(3);
        let out = rank2_verdict(&m).unwrap();
        assert_eq!(out.data.n1_kernels, vec![vec![1, 2], vec![1, 3], vec![1]]);
        assert_eq!(out.data.n2_images, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(out.data.p, vec![vec![Z, I, I], vec![I, Z, I], vec![I, G, Z]]);
        assert_eq!(out.data.group_order, 2);
        assert_eq!(out.pprime.entries(), RationalMatrix::from_integer_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, -1, 0]]).entries());
        assert_eq!(out.rank, 2);
        assert_eq!(out.verdict, Verdict::Simple);
        let gs = GreenStructure::new(&m);
        let j = rank2_class(&m, &gs).unwrap();
        let signed = signed_incidence(&incidence_matrix(&set_system(&m, &j).unwrap()), &difference_set(&gamma_graph(&m, &j))).unwrap();
        assert_eq!((signed.rows(), signed.cols(), signed.rank()), (3, 6, 2));
    }

    #[test]
    fn disconnected_sandwich() {
        let m = generate_closure(4, &[t(&[1, 2, 1, 2]), t(&[3, 4, 3, 4]), t(&[1, 1, 1, 1])], 100).unwrap();
        let out = rank2_verdict(&m).unwrap();
        assert_eq!(out.data.n1_kernels, vec![vec![1, 3]]);
        assert_eq!(out.data.n2_images, vec![(1, 2), (3, 4)]);
        assert_eq!(out.data.p, vec![vec![I], vec![I]]);
        assert_eq!(out.rank, 1);
        assert_eq!(out.verdict, Verdict::NotSimple);
    }

    #[test]
    fn swap_with_constants() {
        let m = generate_closure(2, &[t(&[2, 1]), t(&[1, 1])], 10).unwrap();
        assert_eq!(m.len(), 4);
        let out = rank2_verdict(&m).unwrap();
        assert_eq!(out.data.n1_kernels, vec![vec![1]]);
        assert_eq!(out.data.p, vec![vec![I]]);
        assert_eq!(out.verdict, Verdict::Simple);
    }

    #[test]
    fn hypothesis_errors() {
        let no_const = generate_closure(3, &[t(&[1, 1, 3])], 10).unwrap();
        assert_eq!(rank2_verdict(&no_const).unwrap_err(), Rank2Error::NoConstant);
        let rank3 = generate_closure(4, &[t(&[1, 2, 3, 3]), t(&[2, 3, 1, 3]), t(&[1, 1, 1, 1])], 1000).unwrap();
        assert!(matches!(rank2_verdict(&rank3).unwrap_err(), Rank2Error::RankNotTwo { rank: 3 }));
        let e1 = t(&[1, 2, 2, 1, 1]);
        let e2 = t(&[4, 4, 5, 4, 5]);
        let two_min = generate_closure(5, &[e1, e2, t(&[1, 1, 1, 1, 1])], 100).unwrap();
        assert_eq!(rank2_verdict(&two_min).unwrap_err(), Rank2Error::NoUniqueMinimal);
        let group = generate_closure(3, &[t(&[2, 3, 1])], 10).unwrap();
        assert_eq!(rank2_verdict(&group).unwrap_err(), Rank2Error::GroupInput);
    }

    #[test]
    fn full_incidence_rank_with_disconnected_graph() {
        // Γ(M) = {1–3} ∪ {2}, yet the blocks {1}, {1,2}, {2,3}, {3} span ℚ³
        let m = generate_closure(3, &[t(&[1, 1, 3]), t(&[1, 3, 3]), t(&[1, 1, 1])], 100).unwrap();
        let report = crate::analysis::simplicity_report(&m).unwrap();
        assert_eq!(report.incidence_rank, Some(3));
        assert!(!report.graph.as_ref().unwrap().is_connected());
        let out = rank2_verdict(&m).unwrap();
        assert_eq!(out.rank, 1);
        assert_eq!(out.verdict, report.verdict);
    }
}
