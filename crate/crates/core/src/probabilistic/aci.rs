//! Collision trees: branches conditioned on metric values against uncertain
//! thresholds, leaves marking collision outcomes.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric_id::MetricId;
use crate::probabilistic::NORMALIZATION_TOL;
use crate::stats::Distribution;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TreeNode {
    /// Takes `holds` with probability `P(threshold ≤ metric value)`, else `fails`.
    Condition {
        metric: MetricId,
        threshold: Distribution,
        holds: Box<TreeNode>,
        fails: Box<TreeNode>,
    },
    /// Branches with fixed probabilities summing to one.
    Chance { branches: Vec<(f64, TreeNode)> },
    Leaf {
        #[cfg_attr(feature = "serde", serde(default))]
        label: String,
        collision: bool,
    },
}

/// Reach probability and outcome of every leaf, depth first.
pub fn leaf_probabilities(
    tree: &TreeNode,
    metric: &mut dyn FnMut(MetricId) -> Result<f64>,
) -> Result<Vec<(String, f64, bool)>> {
    let mut out = Vec::new();
    walk(tree, 1.0, metric, &mut out)?;
    let sum: f64 = out.iter().map(|l| l.1).sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(sum));
    }
    Ok(out)
}

fn walk(
    node: &TreeNode,
    p: f64,
    metric: &mut dyn FnMut(MetricId) -> Result<f64>,
    out: &mut Vec<(String, f64, bool)>,
) -> Result<()> {
    match node {
        TreeNode::Leaf { label, collision } => out.push((label.clone(), p, *collision)),
        TreeNode::Condition { metric: id, threshold, holds, fails } => {
            threshold.validate()?;
            let q = threshold.cdf(metric(*id)?);
            walk(holds, p * q, metric, out)?;
            walk(fails, p * (1.0 - q), metric, out)?;
        }
        TreeNode::Chance { branches } => {
            if branches.iter().any(|(q, _)| !(*q >= 0.0)) {
                return Err(Error::InvalidParameter("negative branch probability".into()));
            }
            for (q, child) in branches {
                walk(child, p * q, metric, out)?;
            }
        }
    }
    Ok(())
}

/// Sum over leaves of reach probability times collision outcome.
pub fn aci(tree: &TreeNode, metric: &mut dyn FnMut(MetricId) -> Result<f64>) -> Result<f64> {
    let leaves = leaf_probabilities(tree, metric)?;
    Ok(leaves.iter().filter(|l| l.2).map(|l| l.1).sum::<f64>().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn leaf(collision: bool) -> TreeNode {
        TreeNode::Leaf { label: String::new(), collision }
    }

    fn no_metrics(_: MetricId) -> Result<f64> {
        Err(Error::InvalidParameter("unused".into()))
    }

    #[test]
    fn chance_trees() {
        let t = TreeNode::Chance { branches: vec![(0.2, leaf(true)), (0.8, leaf(false))] };
        assert_eq!(aci(&t, &mut no_metrics).unwrap(), 0.2);
        let all = TreeNode::Chance { branches: vec![(0.3, leaf(true)), (0.7, leaf(true))] };
        assert_eq!(aci(&all, &mut no_metrics).unwrap(), 1.0);
        assert_eq!(aci(&leaf(true), &mut no_metrics).unwrap(), 1.0);
        let bad = TreeNode::Chance { branches: vec![(0.3, leaf(true))] };
        assert!(matches!(aci(&bad, &mut no_metrics), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn condition_on_reaction_time() {
        // the driver reacts in time when the reaction time is at most the TTC
        let t = TreeNode::Condition {
            metric: MetricId::Ttc,
            threshold: Distribution::Uniform { low: 0.5, high: 1.5 },
            holds: Box::new(leaf(false)),
            fails: Box::new(leaf(true)),
        };
        let p = aci(&t, &mut |_| Ok(1.2)).unwrap();
        assert!((p - 0.3).abs() < 1e-12);
    }
}
