//! Iterative refinement of the metric set.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::metric_id::MetricId;
use crate::suitability::records::KnowledgeBase;
use crate::suitability::requirements::{Requirement, RequirementOrder};

/// One applied requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    pub requirement: String,
    pub removed: Vec<MetricId>,
    pub remaining: Vec<MetricId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuitabilityOutcome {
    pub survivors: Vec<MetricId>,
    pub rounds: Vec<Round>,
}

impl SuitabilityOutcome {
    /// No metric satisfies all requirements.
    pub fn no_suitable_metric(&self) -> bool {
        self.survivors.is_empty()
    }
}

/// Applies the requirements in the given sequence.
pub fn run_sequence(kb: &KnowledgeBase, requirements: &[Requirement], sequence: &[&str]) -> Result<SuitabilityOutcome> {
    let mut current: Vec<MetricId> = kb.records().iter().map(|r| r.metric).collect();
    let mut rounds = Vec::new();
    for id in sequence {
        let req = requirements
            .iter()
            .find(|r| r.id == *id)
            .ok_or_else(|| Error::UnknownRequirement((*id).into()))?;
        let (keep, removed): (Vec<MetricId>, Vec<MetricId>) = current.iter().partition(|m| {
            kb.get(**m).is_some_and(|r| req.predicate.holds(r))
        });
        current = keep;
        rounds.push(Round { requirement: req.id.clone(), removed, remaining: current.clone() });
    }
    Ok(SuitabilityOutcome { survivors: current, rounds })
}

/// Repeatedly applies a most important remaining requirement, taking the
/// lexicographically smallest id among equally important ones.
pub fn run_suitability(kb: &KnowledgeBase, requirements: &[Requirement], order: &RequirementOrder) -> Result<SuitabilityOutcome> {
    order.validate(requirements)?;
    let mut remaining: BTreeSet<&str> = requirements.iter().map(|r| r.id.as_str()).collect();
    let mut sequence = Vec::new();
    while let Some(&next) = order.maxima(&remaining).first() {
        sequence.push(next);
        remaining.remove(next);
    }
    run_sequence(kb, requirements, &sequence)
}

/// Every sequence of the requirements compatible with the order.
pub fn topological_orders<'a>(requirements: &'a [Requirement], order: &RequirementOrder) -> Result<Vec<Vec<&'a str>>> {
    order.validate(requirements)?;
    fn extend<'a>(order: &RequirementOrder, remaining: &mut BTreeSet<&'a str>, prefix: &mut Vec<&'a str>, out: &mut Vec<Vec<&'a str>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for r in order.maxima(remaining) {
            remaining.remove(r);
            prefix.push(r);
            extend(order, remaining, prefix, out);
            prefix.pop();
            remaining.insert(r);
        }
    }
    let mut remaining: BTreeSet<&str> = requirements.iter().map(|r| r.id.as_str()).collect();
    let mut out = Vec::new();
    extend(order, &mut remaining, &mut Vec::new(), &mut out);
    Ok(out)
}

fn join(ids: &[MetricId]) -> String {
    if ids.is_empty() {
        return String::from("-");
    }
    let mut s = String::new();
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(id.as_str());
    }
    s
}

/// Plain-text report of the rounds and the result.
pub fn explain(outcome: &SuitabilityOutcome) -> String {
    let mut out = String::new();
    if outcome.rounds.is_empty() {
        return out;
    }
    for (k, r) in outcome.rounds.iter().enumerate() {
        let _ = writeln!(out, "round {}: {}", k + 1, r.requirement);
        let _ = writeln!(out, "  removed ({}): {}", r.removed.len(), join(&r.removed));
        let _ = writeln!(out, "  remaining ({}): {}", r.remaining.len(), join(&r.remaining));
    }
    if outcome.no_suitable_metric() {
        let _ = writeln!(out, "result: no suitable metric");
    } else {
        let _ = writeln!(out, "result ({}): {}", outcome.survivors.len(), join(&outcome.survivors));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suitability::records::{Grade, InputTag, MetricPropertyRecord, SubjectType};
    use crate::suitability::requirements::Predicate;
    use crate::types::{Scale, Unit};
    use alloc::vec;

    fn record(metric: MetricId, scale: Scale, subjects: &[SubjectType]) -> MetricPropertyRecord {
        MetricPropertyRecord {
            metric,
            runtime_capable: true,
            target_values_exist: true,
            subject_types: subjects.iter().copied().collect(),
            scenario_types: ["any".into()].into_iter().collect(),
            required_inputs: [InputTag::Positions].into_iter().collect(),
            output_scale: scale,
            output_unit: Unit::TimeS,
            reliability: Grade::High,
            validity: Grade::High,
            sensitivity: Grade::Medium,
            specificity: Grade::Medium,
            prediction: Default::default(),
            horizon: Default::default(),
        }
    }

    fn kb() -> KnowledgeBase {
        use SubjectType::*;
        KnowledgeBase::new(vec![
            record(MetricId::Ttc, Scale::Ratio, &[Human, Automation]),
            record(MetricId::Am, Scale::Nominal, &[Human, Automation]),
            record(MetricId::Ttz, Scale::Ratio, &[Pedestrian]),
        ])
        .unwrap()
    }

    fn req(id: &str, predicate: Predicate) -> Requirement {
        Requirement { id: id.into(), property: String::new(), predicate, rationale: String::new() }
    }

    #[test]
    fn vacuous_requirement_keeps_everything() {
        let out = run_suitability(&kb(), &[req("r", Predicate::Always)], &RequirementOrder::default()).unwrap();
        assert_eq!(out.survivors, vec![MetricId::Ttc, MetricId::Am, MetricId::Ttz]);
    }

    #[test]
    fn excluding_everything_reports_no_metric() {
        let none = Predicate::Not { predicate: alloc::boxed::Box::new(Predicate::Always) };
        let out = run_suitability(&kb(), &[req("r", none)], &RequirementOrder::default()).unwrap();
        assert!(out.no_suitable_metric());
        assert!(explain(&out).contains("no suitable metric"));
    }

    #[test]
    fn rounds_follow_order_and_partition() {
        let reqs = [
            req("b", Predicate::SubjectsAnyOf { subjects: vec![SubjectType::Human] }),
            req("a", Predicate::ScaleAtLeast { scale: Scale::Ordinal }),
        ];
        let order = RequirementOrder { edges: vec![("b".into(), "a".into())] };
        let out = run_suitability(&kb(), &reqs, &order).unwrap();
        assert_eq!(out.rounds[0].requirement, "b");
        assert_eq!(out.rounds[0].removed, vec![MetricId::Ttz]);
        assert_eq!(out.rounds[1].removed, vec![MetricId::Am]);
        assert_eq!(out.survivors, vec![MetricId::Ttc]);
        let report = explain(&out);
        assert!(report.starts_with("round 1: b\n  removed (1): TTZ\n"), "{report}");
        assert_eq!(topological_orders(&reqs, &order).unwrap(), vec![vec!["b", "a"]]);
    }

    #[test]
    fn invalid_orders() {
        let reqs = [req("a", Predicate::Always), req("b", Predicate::Always)];
        let cyc = RequirementOrder { edges: vec![("a".into(), "b".into()), ("b".into(), "a".into())] };
        assert_eq!(run_suitability(&kb(), &reqs, &cyc), Err(Error::CyclicOrder));
        let unknown = RequirementOrder { edges: vec![("a".into(), "z".into())] };
        assert_eq!(run_suitability(&kb(), &reqs, &unknown), Err(Error::UnknownRequirement("z".into())));
        assert_eq!(explain(&SuitabilityOutcome { survivors: vec![], rounds: vec![] }), "");
    }

    #[test]
    fn duplicate_records_are_rejected() {
        let r = record(MetricId::Ttc, Scale::Ratio, &[SubjectType::Human]);
        assert_eq!(KnowledgeBase::new(vec![r.clone(), r]), Err(Error::DuplicateId("TTC".into())));
    }
}
