//! Knowledge-base and requirement documents of the suitability analysis.

use std::path::Path;

use criticality::suitability::{explain, run_suitability, KnowledgeBase, MetricPropertyRecord, Requirement, RequirementOrder};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KbDocument {
    #[serde(default)]
    records: Vec<MetricPropertyRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequirementsDocument {
    #[serde(default)]
    requirements: Vec<Requirement>,
    /// Pairs `[more important, less important]`.
    #[serde(default)]
    order: Vec<(String, String)>,
}

pub fn parse_knowledge_base(text: &str) -> Result<KnowledgeBase> {
    let doc: KbDocument = toml::from_str(text).map_err(|e| CliError::data(format!("knowledge base: {e}")))?;
    Ok(KnowledgeBase::new(doc.records)?)
}

pub fn parse_requirements(text: &str) -> Result<(Vec<Requirement>, RequirementOrder)> {
    let doc: RequirementsDocument = toml::from_str(text).map_err(|e| CliError::data(format!("requirements: {e}")))?;
    let order = RequirementOrder { edges: doc.order };
    order.validate(&doc.requirements)?;
    Ok((doc.requirements, order))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Runs the analysis and renders the round-by-round report.
pub fn suitability_report(kb: &Path, requirements: &Path) -> Result<String> {
    let kb = parse_knowledge_base(&read(kb)?).map_err(|e| CliError::data(format!("{}: {e}", kb.display())))?;
    let (reqs, order) =
        parse_requirements(&read(requirements)?).map_err(|e| CliError::data(format!("{}: {e}", requirements.display())))?;
    if reqs.is_empty() {
        return Err(CliError::data("no requirements given"));
    }
    Ok(explain(&run_suitability(&kb, &reqs, &order)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_knowledge_base() {
        assert!(parse_knowledge_base("").unwrap().is_empty());
    }

    #[test]
    fn unknown_metric_is_rejected() {
        let text = r#"
            [[records]]
            metric = "XYZ"
        "#;
        assert!(parse_knowledge_base(text).is_err());
    }
}
