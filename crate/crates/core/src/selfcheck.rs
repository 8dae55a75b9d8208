//! End-to-end checks of the headline claims, shared by the acceptance tests
//! and `augsimp selftest`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    check_bound_b, cyclic_submodule_falsifier, incidence_matrix, simplicity_report, simplicity_report_with, SetSystem,
    SimplicityReport, Status, Verdict,
};
use crate::construct::{
    assemble_monoid, build_family, build_r3, build_r4, enumerate_admissible_partitions, r3_images, r3_items,
    r4_displayed_partitions, r4_images, stirling2, transcription_identities, witness_block_sums,
    witness_vector, FamilyVariant, R4Example, ReesMonoid,
};
use crate::corpus::{rank2_corpus, CorpusEntry};
use crate::graph::{random_disconnected_graph, random_spanning_tree, SimpleGraph};
use crate::green::GreenStructure;
use crate::linalg::RationalMatrix;
use crate::monoid::FiniteMonoid;
use crate::rank2::{difference_set, rank2_verdict_with, signed_incidence};

/// Incidence rank of the second rank-4 example, pinned from the first verified run.
pub const R4_NONSIMPLE_RANK: usize = 10;
pub const CORPUS_SIZE: usize = 240;
pub const FALSIFIER_TRIALS: usize = 100;
pub const SELECTIONS_R3: [&[usize]; 5] = [&[1, 2, 3, 4], &[1, 2, 3], &[2, 3, 4], &[1, 3, 4], &[1, 2, 4]];
const CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: Value,
}

impl CriterionOutcome {
    fn new(id: &str, title: &str, passed: bool, detail: Value) -> Self {
        Self { id: id.into(), title: title.into(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!("criterion {} {}: {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title)
    }
}

/// The random corpus plus everything computed on it once.
pub struct Context {
    pub seed: u64,
    pub corpus: Vec<CorpusEntry>,
    pub reports: Vec<SimplicityReport>,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        let corpus = rank2_corpus(CORPUS_SIZE, seed);
        let reports = corpus.iter().map(|e| simplicity_report(&e.monoid).expect("corpus monoids are not groups")).collect();
        Self { seed, corpus, reports }
    }
}

fn graph_ok(r: &SimplicityReport) -> (bool, bool) {
    let g = r.graph.as_ref();
    (g.is_some_and(SimpleGraph::is_connected), g.is_some_and(SimpleGraph::is_complete))
}

pub fn criterion_1() -> CriterionOutcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for sel in SELECTIONS_R3 {
        let (parts, images) = build_r3(sel).expect("valid selection");
        let assembled = assemble_monoid(&parts, &images, true, CAP).expect("closure holds");
        let symbolic = assembled.handle().report();
        let explicit = simplicity_report(assembled.monoid().expect("enumerated")).expect("not a group");
        let (connected, complete) = graph_ok(&symbolic);
        let all_pass = symbolic.conditions.iter().all(|c| c.status == Status::Pass);
        let agree = symbolic.to_json()["conditions"] == explicit.to_json()["conditions"]
            && symbolic.incidence_rank == explicit.incidence_rank;
        let good = symbolic.incidence_rank == Some(6)
            && connected
            && !complete
            && all_pass
            && symbolic.verdict == Verdict::Simple
            && agree;
        ok &= good;
        rows.push(json!({
            "selection": sel,
            "incidence_rank": symbolic.incidence_rank,
            "connected": connected,
            "complete": complete,
            "verdict": symbolic.verdict,
            "explicit_agrees": agree,
            "monoid_size": explicit.monoid_size,
        }));
    }
    CriterionOutcome::new("1", "r=3 family: rank 6, simple for every valid selection", ok, json!(rows))
}

pub fn criterion_2() -> CriterionOutcome {
    let found = enumerate_admissible_partitions(&r3_images()).expect("small enumeration");
    let mut expected = r3_items();
    expected.sort();
    let ok = found == expected && stirling2(6, 3) == 90;
    let blocks: Vec<_> = found.iter().map(|p| p.blocks().to_vec()).collect();
    CriterionOutcome::new(
        "2",
        "r=3 classification: exactly the four admissible partitions",
        ok,
        json!({"candidates": stirling2(6, 3), "admissible": blocks}),
    )
}

pub fn criterion_3() -> CriterionOutcome {
    let mut detail = serde_json::Map::new();
    let mut ok = true;
    for (ex, name) in [(R4Example::Simple, "simple"), (R4Example::NonSimple, "nonsimple")] {
        let (parts, images) = build_r4(ex);
        match ReesMonoid::new(parts, images) {
            Ok(h) => {
                let rank = incidence_matrix(&h.set_system()).rank();
                let expected = if ex == R4Example::Simple { 12 } else { R4_NONSIMPLE_RANK };
                ok &= rank == expected;
                detail.insert(name.into(), json!({"incidence_rank": rank, "verdict": h.report().verdict}));
            }
            Err(e) => {
                ok = false;
                detail.insert(name.into(), json!({"error": e.to_string()}));
            }
        }
    }
    let admissible = enumerate_admissible_partitions(&r4_images()).expect("S(12,4) is below the guard");
    let displayed = r4_displayed_partitions();
    let missing: Vec<usize> =
        (0..displayed.len()).filter(|&k| admissible.binary_search(&displayed[k]).is_err()).map(|k| k + 1).collect();
    ok &= missing.is_empty();
    detail.insert(
        "enumeration".into(),
        json!({"candidates": stirling2(12, 4), "admissible": admissible.len(), "missing_displayed": missing}),
    );
    CriterionOutcome::new("3", "r=4: rank 12 and rank < 12, displayed partitions admissible", ok, Value::Object(detail))
}

/// Per-r facts about both variants of the general family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyFacts {
    pub r: usize,
    pub star: Option<String>,
    pub b_rank: usize,
    pub b_verdict: Verdict,
    pub b_connected: bool,
    pub b_complete: bool,
    pub bound_b: bool,
    pub bprime_rank: usize,
    pub bprime_verdict: Verdict,
    pub bprime_connected: bool,
    pub bprime_complete: bool,
    pub witness_verified: bool,
    /// Up to three blocks where the witness sum is nonzero: (partition, block, sum).
    pub witness_failures: Vec<(usize, Vec<usize>, String)>,
}

pub fn family_facts(r: usize) -> FamilyFacts {
    let b = build_family(r, FamilyVariant::B).expect("variant B validates");
    let bp = build_family(r, FamilyVariant::Bprime).expect("variant Bprime validates");
    let rb = b.handle.report();
    let rp = bp.handle.report();
    let a = witness_vector(r).expect("r ≥ 5");
    let failures = witness_block_sums(&a.coefficients, &bp.partitions).expect("dimensions match");
    let (b_connected, b_complete) = graph_ok(&rb);
    let (bprime_connected, bprime_complete) = graph_ok(&rp);
    FamilyFacts {
        r,
        star: b.star.as_ref().map(|s| s.name().to_string()),
        b_rank: rb.incidence_rank.unwrap_or(0),
        b_verdict: rb.verdict,
        b_connected,
        b_complete,
        bound_b: check_bound_b(b.partitions.len(), r, r * (r - 1), rb.verdict),
        bprime_rank: rp.incidence_rank.unwrap_or(0),
        bprime_verdict: rp.verdict,
        bprime_connected,
        bprime_complete,
        witness_verified: failures.is_empty(),
        witness_failures: failures
            .into_iter()
            .take(3)
            .map(|(k, blk, s)| (k + 1, blk, crate::linalg::render_rational(&s)))
            .collect(),
    }
}

/// Ranks, verdicts and graphs for r = 5..8 plus the odd-r witness.
pub fn criterion_4_family(facts: &[FamilyFacts]) -> CriterionOutcome {
    let ok = facts.iter().all(|f| {
        f.b_rank == f.r * (f.r - 1)
            && f.b_verdict == Verdict::Simple
            && f.b_connected
            && !f.b_complete
            && f.bound_b
            && f.bprime_verdict == Verdict::NotSimple
            && f.bprime_rank < f.r * (f.r - 1)
            && f.bprime_connected
            && !f.bprime_complete
            && (f.r % 2 == 0 || f.witness_verified)
    });
    CriterionOutcome::new("4a", "general family r=5..8: ranks, verdicts, graphs, odd-r witness", ok, json!(facts))
}

/// The even-r witness vector against B′_r.
pub fn criterion_4_even_witness(facts: &[FamilyFacts]) -> CriterionOutcome {
    let even: Vec<&FamilyFacts> = facts.iter().filter(|f| f.r % 2 == 0).collect();
    let ok = !even.is_empty() && even.iter().all(|f| f.witness_verified);
    let detail: Vec<Value> = even
        .iter()
        .map(|f| json!({"r": f.r, "witness_verified": f.witness_verified, "nonzero_blocks": f.witness_failures}))
        .collect();
    CriterionOutcome::new("4b", "general family even r: witness vector lies in W-perp", ok, json!(detail))
}

pub fn criterion_5(ctx: &Context) -> CriterionOutcome {
    let mut mismatches = Vec::new();
    let (mut simple, mut not_simple) = (0, 0);
    let mut disconnected_full_rank = 0;
    for (k, (entry, report)) in ctx.corpus.iter().zip(&ctx.reports).enumerate() {
        let gs = GreenStructure::new(&entry.monoid);
        let outcome = match rank2_verdict_with(&entry.monoid, &gs) {
            Ok(o) => o,
            Err(e) => {
                mismatches.push(json!({"index": k, "error": e.to_string()}));
                continue;
            }
        };
        let n = entry.monoid.degree();
        let full_p = outcome.rank == n - 1;
        let full_i = report.incidence_rank == Some(n);
        let connected = report.graph.as_ref().is_some_and(SimpleGraph::is_connected);
        // with Γ(M) disconnected, I(ℰ) may still have rank n while rank P′ < n − 1
        let rank_match = if connected { full_p == full_i } else { !full_p || full_i };
        if full_p != full_i {
            disconnected_full_rank += 1;
        }
        if outcome.verdict != report.verdict || !rank_match {
            mismatches.push(json!({
                "index": k,
                "rank2": outcome.verdict,
                "report": report.verdict,
                "pprime_rank": outcome.rank,
                "incidence_rank": report.incidence_rank,
                "connected": connected,
            }));
        }
        match report.verdict {
            Verdict::Simple => simple += 1,
            _ => not_simple += 1,
        }
    }
    let ok = mismatches.is_empty() && ctx.corpus.len() >= 200;
    CriterionOutcome::new(
        "5",
        "rank-2 criterion agrees with the five-condition report",
        ok,
        json!({
            "instances": ctx.corpus.len(),
            "simple": simple,
            "not_simple": not_simple,
            "disconnected_with_full_incidence_rank": disconnected_full_rank,
            "mismatches": mismatches,
        }),
    )
}

fn difference_rank(incidence: &RationalMatrix, g: &SimpleGraph) -> usize {
    signed_incidence(incidence, &difference_set(g)).expect("edges in range").rank()
}

/// Spanning-tree and disconnected-graph checks on one system.
fn ie_gamma_violations(system: &SetSystem, gamma: &SimpleGraph, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = system.degree();
    let incidence = incidence_matrix(system);
    let full = incidence.rank() == n;
    let mut checks = 0;
    let mut violations = 0;
    if gamma.is_connected() {
        for _ in 0..5 {
            let tree = random_spanning_tree(gamma, rng).expect("connected");
            checks += 1;
            if full != (difference_rank(&incidence, &tree) == n - 1) {
                violations += 1;
            }
        }
    }
    for _ in 0..5 {
        if let Some(g) = random_disconnected_graph(n, rng, 1000) {
            checks += 1;
            if difference_rank(&incidence, &g) >= n - 1 {
                violations += 1;
            }
        }
    }
    (checks, violations)
}

pub fn criterion_6(ctx: &Context) -> CriterionOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x6);
    let mut systems: Vec<(String, SetSystem, SimpleGraph)> = Vec::new();
    for (k, r) in ctx.reports.iter().enumerate() {
        if let (Some(s), Some(g)) = (&r.system, &r.graph) {
            systems.push((format!("corpus[{k}]"), s.clone(), g.clone()));
        }
    }
    for sel in SELECTIONS_R3 {
        let (parts, images) = build_r3(sel).expect("valid selection");
        let h = ReesMonoid::new(parts, images).expect("valid");
        systems.push((format!("r3{sel:?}"), h.set_system(), h.gamma_graph()));
    }
    for ex in [R4Example::Simple, R4Example::NonSimple] {
        let (parts, images) = build_r4(ex);
        let h = ReesMonoid::new(parts, images).expect("valid");
        systems.push((format!("r4 {ex:?}"), h.set_system(), h.gamma_graph()));
    }
    for r in 5..=8 {
        for v in [FamilyVariant::B, FamilyVariant::Bprime] {
            let b = build_family(r, v).expect("validates");
            systems.push((format!("r{r} {v:?}"), b.handle.set_system(), b.handle.gamma_graph()));
        }
    }
    let mut total = 0;
    let mut bad = Vec::new();
    for (name, s, g) in &systems {
        let (checks, violations) = ie_gamma_violations(s, g, &mut rng);
        total += checks;
        if violations > 0 {
            bad.push(json!({"system": name, "violations": violations}));
        }
    }
    CriterionOutcome::new(
        "6",
        "spanning-tree and disconnected-graph rank properties",
        bad.is_empty(),
        json!({"systems": systems.len(), "checks": total, "violations": bad}),
    )
}

pub fn criterion_7(ctx: &Context) -> CriterionOutcome {
    let mut bad = Vec::new();
    for (k, (entry, report)) in ctx.corpus.iter().zip(&ctx.reports).enumerate() {
        let gs = GreenStructure::new(&entry.monoid);
        let Ok(outcome) = rank2_verdict_with(&entry.monoid, &gs) else {
            bad.push(json!({"index": k, "reason": "hypotheses"}));
            continue;
        };
        let (Some(system), Some(gamma)) = (&report.system, &report.graph) else {
            bad.push(json!({"index": k, "reason": "no system"}));
            continue;
        };
        let signed = signed_incidence(&incidence_matrix(system), &difference_set(gamma)).expect("edges in range");
        if signed.row_labels() != outcome.pprime.row_labels() {
            bad.push(json!({"index": k, "reason": "row index sets differ"}));
            continue;
        }
        let n = entry.monoid.degree();
        let mut ok = true;
        for (c, block) in outcome.data.n1_kernels.iter().enumerate() {
            let complement: Vec<usize> = (1..=n).filter(|p| !block.contains(p)).collect();
            let (Some(bc), Some(cc)) = (system.position(block), system.position(&complement)) else {
                ok = false;
                break;
            };
            let col = outcome.pprime.column(c);
            let neg: Vec<_> = col.iter().map(|x| -x).collect();
            ok &= signed.column(bc) == col && signed.column(cc) == neg;
        }
        if !ok {
            bad.push(json!({"index": k, "reason": "entrywise mismatch"}));
        }
    }
    CriterionOutcome::new(
        "7",
        "signed sandwich matrix equals the signed incidence matrix entrywise",
        bad.is_empty(),
        json!({"instances": ctx.corpus.len(), "mismatches": bad}),
    )
}

fn falsifier_agrees(m: &FiniteMonoid, verdict: Verdict, seed: u64) -> (bool, Option<usize>) {
    let w = cyclic_submodule_falsifier(m, FALSIFIER_TRIALS, seed);
    let dim = w.as_ref().map(|w| w.submodule_dim);
    ((verdict == Verdict::NotSimple) == w.is_some(), dim)
}

pub fn criterion_8(ctx: &Context) -> CriterionOutcome {
    let mut explicit: Vec<(String, FiniteMonoid)> = Vec::new();
    for sel in SELECTIONS_R3 {
        let (parts, images) = build_r3(sel).expect("valid selection");
        let a = assemble_monoid(&parts, &images, true, CAP).expect("closure holds");
        explicit.push((format!("r3{sel:?}"), a.monoid().expect("enumerated").clone()));
    }
    for ex in [R4Example::Simple, R4Example::NonSimple] {
        let (parts, images) = build_r4(ex);
        let a = assemble_monoid(&parts, &images, true, CAP).expect("closure holds");
        explicit.push((format!("r4 {ex:?}"), a.monoid().expect("enumerated").clone()));
    }
    let mut bad = Vec::new();
    let mut witnessed = 0;
    let mut rows = Vec::new();
    for (name, m) in &explicit {
        let report = simplicity_report(m).expect("not a group");
        let (ok, dim) = falsifier_agrees(m, report.verdict, ctx.seed);
        witnessed += usize::from(dim.is_some());
        rows.push(json!({"instance": name, "verdict": report.verdict, "witness_dim": dim}));
        if !ok {
            bad.push(json!({"instance": name}));
        }
    }
    for (k, (entry, report)) in ctx.corpus.iter().zip(&ctx.reports).enumerate() {
        let gs = GreenStructure::new(&entry.monoid);
        let verdict = simplicity_report_with(&entry.monoid, &gs).expect("not a group").verdict;
        debug_assert_eq!(verdict, report.verdict);
        let (ok, dim) = falsifier_agrees(&entry.monoid, verdict, ctx.seed.wrapping_add(k as u64));
        witnessed += usize::from(dim.is_some());
        if !ok {
            bad.push(json!({"instance": format!("corpus[{k}]"), "verdict": verdict}));
        }
    }
    CriterionOutcome::new(
        "8",
        "falsifier finds a witness exactly for not-simple verdicts",
        bad.is_empty(),
        json!({"explicit": rows, "corpus": ctx.corpus.len(), "witnessed": witnessed, "disagreements": bad}),
    )
}

pub fn criterion_9() -> CriterionOutcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for r in [5, 7] {
        for v in [FamilyVariant::B, FamilyVariant::Bprime] {
            let checks = transcription_identities(&build_family(r, v).expect("validates"));
            let failed: Vec<_> = checks.iter().filter(|c| !c.holds).collect();
            ok &= !checks.is_empty() && failed.is_empty();
            rows.push(json!({"r": r, "variant": v, "checked": checks.len(), "failed": failed}));
        }
    }
    CriterionOutcome::new("9", "diagonal block identities for r = 5 and r = 7", ok, json!(rows))
}

/// Every criterion in order; 4 is reported as 4a and 4b.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let ctx = Context::new(seed);
    let facts: Vec<FamilyFacts> = (5..=8).map(family_facts).collect();
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4_family(&facts),
        criterion_4_even_witness(&facts),
        criterion_5(&ctx),
        criterion_6(&ctx),
        criterion_7(&ctx),
        criterion_8(&ctx),
        criterion_9(),
    ]
}
