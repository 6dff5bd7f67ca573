//! Metric suitability analysis: filter a knowledge base of metric properties
//! through application requirements, most important first.

pub mod analysis;
pub mod records;
pub mod requirements;

pub use analysis::{explain, run_sequence, run_suitability, topological_orders, Round, SuitabilityOutcome};
pub use records::{Grade, HorizonClass, InputTag, KnowledgeBase, MetricPropertyRecord, PredictionKind, SubjectType};
pub use requirements::{GradedProperty, Predicate, Requirement, RequirementOrder};
