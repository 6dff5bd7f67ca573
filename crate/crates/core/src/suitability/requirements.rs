//! Application requirements as predicates over property records, and their
//! importance order.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::suitability::records::{Grade, InputTag, MetricPropertyRecord, SubjectType};
use crate::types::Scale;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GradedProperty {
    Reliability,
    Validity,
    Sensitivity,
    Specificity,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Predicate {
    /// Satisfied by every record.
    Always,
    /// The record covers at least one of the subject types.
    SubjectsAnyOf { subjects: Vec<SubjectType> },
    /// The record covers all of the subject types.
    SubjectsAllOf { subjects: Vec<SubjectType> },
    /// The record is suitable for at least one of the scenario types.
    ScenariosAnyOf { scenarios: Vec<String> },
    /// Every required input is available.
    InputsAvailable { available: Vec<InputTag> },
    /// The output scale is at least as informative as `scale`.
    ScaleAtLeast { scale: Scale },
    GradeIn { property: GradedProperty, accepted: Vec<Grade> },
    RuntimeCapable,
    TargetValuesExist,
    All { of: Vec<Predicate> },
    Not { predicate: Box<Predicate> },
}

impl Predicate {
    pub fn holds(&self, r: &MetricPropertyRecord) -> bool {
        match self {
            Predicate::Always => true,
            Predicate::SubjectsAnyOf { subjects } => subjects.iter().any(|s| r.subject_types.contains(s)),
            Predicate::SubjectsAllOf { subjects } => subjects.iter().all(|s| r.subject_types.contains(s)),
            Predicate::ScenariosAnyOf { scenarios } => scenarios.iter().any(|s| r.scenario_types.contains(s)),
            Predicate::InputsAvailable { available } => r.required_inputs.iter().all(|i| available.contains(i)),
            Predicate::ScaleAtLeast { scale } => r.output_scale >= *scale,
            Predicate::GradeIn { property, accepted } => {
                let g = match property {
                    GradedProperty::Reliability => r.reliability,
                    GradedProperty::Validity => r.validity,
                    GradedProperty::Sensitivity => r.sensitivity,
                    GradedProperty::Specificity => r.specificity,
                };
                accepted.contains(&g)
            }
            Predicate::RuntimeCapable => r.runtime_capable,
            Predicate::TargetValuesExist => r.target_values_exist,
            Predicate::All { of } => of.iter().all(|p| p.holds(r)),
            Predicate::Not { predicate } => !predicate.holds(r),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Requirement {
    pub id: String,
    pub property: String,
    pub predicate: Predicate,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rationale: String,
}

/// "More important than" edges between requirement ids.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RequirementOrder {
    pub edges: Vec<(String, String)>,
}

impl RequirementOrder {
    /// Checks that every edge names a known requirement and that the order is acyclic.
    pub fn validate(&self, requirements: &[Requirement]) -> Result<()> {
        let ids: BTreeSet<&str> = requirements.iter().map(|r| r.id.as_str()).collect();
        if ids.len() != requirements.len() {
            return Err(Error::DuplicateId("requirement".into()));
        }
        for (a, b) in &self.edges {
            if a == b {
                return Err(Error::CyclicOrder);
            }
            for id in [a, b] {
                if !ids.contains(id.as_str()) {
                    return Err(Error::UnknownRequirement(id.clone()));
                }
            }
        }
        let mut remaining = ids;
        while !remaining.is_empty() {
            let top = self.maxima(&remaining);
            if top.is_empty() {
                return Err(Error::CyclicOrder);
            }
            for t in top {
                remaining.remove(t);
            }
        }
        Ok(())
    }

    /// Requirements in `remaining` that no other remaining requirement outranks, sorted.
    pub fn maxima<'a>(&self, remaining: &BTreeSet<&'a str>) -> Vec<&'a str> {
        remaining
            .iter()
            .copied()
            .filter(|r| !self.edges.iter().any(|(a, b)| b == r && remaining.contains(a.as_str())))
            .collect()
    }
}
