use serde::Serialize;
use serde_json::{json, Value};

use crate::graph::SimpleGraph;
use crate::green::{maximal_subgroup, zero_minimal_jclass, GreenStructure, JClassInfo, ZeroMinimal};
use crate::linalg::{render_rational, Rational};
use crate::monoid::FiniteMonoid;
use crate::perm::{is_two_transitive, PermutationGroup};

use super::system::{gamma_graph, incidence_matrix, set_system, wperp, SetSystem};
use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Simple,
    NotSimple,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub status: Status,
    pub evidence: Value,
}

impl ConditionResult {
    pub fn new(status: Status, evidence: Value) -> Self {
        Self { status, evidence }
    }

    fn not_evaluated() -> Self {
        Self::new(Status::NotEvaluated, Value::Null)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What conditions (3)–(5) need about the 0-minimal J-class. Built either
/// from an explicit monoid or directly from kernel/image data.
#[derive(Debug, Clone)]
pub struct ZeroMinimalClass {
    pub rank: usize,
    /// |J|, when known.
    pub size: Option<u64>,
    pub idempotent_count: usize,
    pub system: SetSystem,
    pub graph: SimpleGraph,
    pub condition3: ConditionResult,
}

/// The five-condition checklist and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityReport {
    pub n: usize,
    pub monoid_size: Option<u64>,
    pub verdict: Verdict,
    pub conditions: [ConditionResult; 5],
    pub jclass: Option<Value>,
    pub incidence_rank: Option<usize>,
    pub wperp_basis: Option<Vec<Vec<Rational>>>,
    pub graph: Option<SimpleGraph>,
    pub system: Option<SetSystem>,
}

impl SimplicityReport {
    pub fn wperp_dim(&self) -> Option<usize> {
        self.wperp_basis.as_ref().map(Vec::len)
    }

    /// Canonical JSON (object keys sorted, rationals as "p" or "p/q").
    pub fn to_json(&self) -> Value {
        let conditions: Vec<Value> = self
            .conditions
            .iter()
            .enumerate()
            .map(|(i, c)| json!({"id": i + 1, "status": c.status, "evidence": c.evidence}))
            .collect();
        let basis = self.wperp_basis.as_ref().map(|b| {
            b.iter().map(|v| v.iter().map(render_rational).collect::<Vec<_>>()).collect::<Vec<_>>()
        });
        json!({
            "n": self.n,
            "monoid_size": self.monoid_size,
            "verdict": self.verdict,
            "conditions": conditions,
            "jclass": self.jclass,
            "incidence_rank": self.incidence_rank,
            "wperp_dim": self.wperp_dim(),
            "wperp_basis": basis,
            "graph": self.graph.as_ref().map(|g| json!({
                "edges": g.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
                "connected": g.is_connected(),
                "complete": g.is_complete(),
            })),
            "set_system": self.system.as_ref().map(|s| json!({"blocks": s.blocks()})),
        })
    }
}

/// Condition (3) from a maximal subgroup acting on eΩ.
pub fn condition3_from_group(group: &PermutationGroup) -> Result<ConditionResult, AnalysisError> {
    let k = group.points().len();
    if k == 2 {
        return Ok(ConditionResult::new(Status::Pass, json!({"image_size": 2, "reason": "one-dimensional augmentation"})));
    }
    let two = is_two_transitive(group).map_err(AnalysisError::Perm)?;
    let evidence = json!({"image_size": k, "group_order": group.order(), "two_transitive": two});
    Ok(ConditionResult::new(if two { Status::Pass } else { Status::Fail }, evidence))
}

pub fn check_condition3(m: &FiniteMonoid, gs: &GreenStructure, j: &JClassInfo) -> Result<ConditionResult, AnalysisError> {
    let &e = j.idempotents.first().ok_or(AnalysisError::IrregularClass)?;
    let group = maximal_subgroup(m, gs, e).map_err(AnalysisError::Green)?;
    condition3_from_group(&group)
}

fn constant_condition(has_constant: bool) -> ConditionResult {
    ConditionResult::new(if has_constant { Status::Pass } else { Status::Fail }, json!({"has_constant": has_constant}))
}

/// Evaluates conditions (4) and (5) and the verdict once (1)–(3) are known.
/// `class` is `Err(evidence)` when condition (2) fails.
pub fn assemble_report(
    n: usize,
    monoid_size: Option<u64>,
    has_constant: bool,
    class: Result<ZeroMinimalClass, Value>,
) -> SimplicityReport {
    let cond1 = constant_condition(has_constant);
    let mut report = SimplicityReport {
        n,
        monoid_size,
        verdict: Verdict::NotSimple,
        conditions: [
            cond1,
            ConditionResult::not_evaluated(),
            ConditionResult::not_evaluated(),
            ConditionResult::not_evaluated(),
            ConditionResult::not_evaluated(),
        ],
        jclass: None,
        incidence_rank: None,
        wperp_basis: None,
        graph: None,
        system: None,
    };
    if !has_constant {
        return report;
    }
    let class = match class {
        Ok(c) => c,
        Err(evidence) => {
            report.conditions[1] = ConditionResult::new(Status::Fail, evidence);
            return report;
        }
    };
    report.conditions[1] = ConditionResult::new(Status::Pass, json!({"rank": class.rank, "regular": true}));
    report.conditions[2] = class.condition3.clone();

    let incidence = incidence_matrix(&class.system);
    let rank = incidence.rank();
    let basis = wperp(&class.system);
    assert_eq!(rank == n, basis.is_empty(), "rank–nullity mismatch on the incidence matrix");
    report.conditions[3] = ConditionResult::new(
        if rank == n { Status::Pass } else { Status::Fail },
        json!({"incidence_rank": rank, "n": n, "blocks": class.system.len(), "wperp_dim": basis.len()}),
    );
    let components = class.graph.components();
    report.conditions[4] = ConditionResult::new(
        if components.len() == 1 { Status::Pass } else { Status::Fail },
        json!({"components": components}),
    );
    report.jclass = Some(json!({
        "rank": class.rank,
        "size": class.size,
        "idempotents": class.idempotent_count,
        "regular": true,
    }));
    report.incidence_rank = Some(rank);
    report.wperp_basis = Some(basis);
    report.graph = Some(class.graph);
    report.system = Some(class.system);

    let statuses: Vec<Status> = report.conditions.iter().map(|c| c.status).collect();
    report.verdict = if statuses.contains(&Status::Fail) {
        Verdict::NotSimple
    } else if statuses.contains(&Status::Undetermined) {
        Verdict::Undetermined
    } else {
        Verdict::Simple
    };
    report
}

/// Everything about the 0-minimal J-class of an explicit monoid, or the
/// evidence for condition (2) failing.
pub fn zero_minimal_class(m: &FiniteMonoid, gs: &GreenStructure) -> Result<Result<ZeroMinimalClass, Value>, AnalysisError> {
    let j = match zero_minimal_jclass(m, gs).map_err(AnalysisError::Green)? {
        ZeroMinimal::NotUnique { minimal } => {
            let ranks: Vec<usize> = minimal.iter().map(|&c| gs.jclass_info(c).rank).collect();
            return Ok(Err(json!({"reason": "no unique minimal class", "minimal_class_ranks": ranks})));
        }
        ZeroMinimal::Unique(j) if !j.is_regular => {
            return Ok(Err(json!({"reason": "minimal class is not regular", "rank": j.rank, "size": j.elements.len()})));
        }
        ZeroMinimal::Unique(j) => j,
    };
    Ok(Ok(ZeroMinimalClass {
        rank: j.rank,
        size: Some(j.elements.len() as u64),
        idempotent_count: j.idempotents.len(),
        system: set_system(m, &j)?,
        graph: gamma_graph(m, &j),
        condition3: check_condition3(m, gs, &j)?,
    }))
}

pub fn simplicity_report(m: &FiniteMonoid) -> Result<SimplicityReport, AnalysisError> {
    if m.is_group() {
        return Err(AnalysisError::GroupInput);
    }
    let has_constant = m.has_constant();
    if !has_constant {
        return Ok(assemble_report(m.degree(), Some(m.len() as u64), false, Err(Value::Null)));
    }
    let gs = GreenStructure::new(m);
    simplicity_report_with(m, &gs)
}

/// As [`simplicity_report`], reusing a computed Green structure.
pub fn simplicity_report_with(m: &FiniteMonoid, gs: &GreenStructure) -> Result<SimplicityReport, AnalysisError> {
    if m.is_group() {
        return Err(AnalysisError::GroupInput);
    }
    let has_constant = m.has_constant();
    let class = if has_constant { zero_minimal_class(m, gs)? } else { Err(Value::Null) };
    Ok(assemble_report(m.degree(), Some(m.len() as u64), has_constant, class))
}

/// For a simple verdict: |Ω| = r when |𝓑| = 1, and |Ω| < r·|𝓑| otherwise.
/// Vacuously true for other verdicts.
pub fn check_bound_b(partition_count: usize, r: usize, n: usize, verdict: Verdict) -> bool {
    if verdict != Verdict::Simple {
        return true;
    }
    match partition_count {
        0 => false,
        1 => n == r,
        k => n < r * k,
    }
}
