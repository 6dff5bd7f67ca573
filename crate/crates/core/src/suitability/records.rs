//! Property records of the metric catalog.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric_id::MetricId;
use crate::types::{Scale, Unit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SubjectType {
    Human,
    Automation,
    Pedestrian,
    Bicycle,
}

/// Qualitative grade of a metric property. `Depends` marks a grade that
/// hinges on the model or application and has to be accepted explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Grade {
    Low,
    Medium,
    High,
    Depends,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InputTag {
    Positions,
    Velocities,
    Accelerations,
    Masses,
    Widths,
    Capability,
    ConflictArea,
    DrivableArea,
    CollisionEvent,
    ManeuverModel,
}

/// What kind of prediction a metric relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PredictionKind {
    #[default]
    None,
    /// A single predicted trace.
    LinearTime,
    /// Several possible futures.
    BranchingTime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HorizonClass {
    #[default]
    None,
    Short,
    Long,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct MetricPropertyRecord {
    pub metric: MetricId,
    pub runtime_capable: bool,
    pub target_values_exist: bool,
    pub subject_types: BTreeSet<SubjectType>,
    /// Scenario types the metric is suitable for, e.g. `car_following` or `intersection`.
    pub scenario_types: BTreeSet<String>,
    pub required_inputs: BTreeSet<InputTag>,
    pub output_scale: Scale,
    pub output_unit: Unit,
    pub reliability: Grade,
    pub validity: Grade,
    pub sensitivity: Grade,
    pub specificity: Grade,
    #[cfg_attr(feature = "serde", serde(default))]
    pub prediction: PredictionKind,
    #[cfg_attr(feature = "serde", serde(default))]
    pub horizon: HorizonClass,
}

impl MetricPropertyRecord {
    pub fn validate(&self) -> Result<()> {
        let id = self.metric.as_str();
        if self.subject_types.is_empty() {
            return Err(Error::MissingField(alloc::format!("{id}: subject_types")));
        }
        if self.scenario_types.is_empty() {
            return Err(Error::MissingField(alloc::format!("{id}: scenario_types")));
        }
        if self.required_inputs.is_empty() {
            return Err(Error::MissingField(alloc::format!("{id}: required_inputs")));
        }
        Ok(())
    }
}

/// Records with unique metric ids, kept in input order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KnowledgeBase {
    records: Vec<MetricPropertyRecord>,
}

impl KnowledgeBase {
    pub fn new(records: Vec<MetricPropertyRecord>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &records {
            r.validate()?;
            if !seen.insert(r.metric) {
                return Err(Error::DuplicateId(r.metric.as_str().into()));
            }
        }
        Ok(KnowledgeBase { records })
    }

    pub fn records(&self) -> &[MetricPropertyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: MetricId) -> Option<&MetricPropertyRecord> {
        self.records.iter().find(|r| r.metric == id)
    }
}
