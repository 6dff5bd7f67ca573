//! Collision probability estimators: sampled futures (P-MC), weighted
//! hypothesis pairs (P-SMH), Markov chain reachability (P-SRS) and collision
//! trees (ACI).

pub mod aci;
pub mod pmc;
pub mod psmh;
pub mod psrs;

pub use aci::{aci, leaf_probabilities, TreeNode};
pub use pmc::{
    p_mc, pmc_estimate, ComfortGoal, ControlSampler, ControlSequence, DiscreteControls, GoalFunction, PmcConfig, PmcEstimate,
    PmcProblem, UniformControls,
};
pub use psmh::{p_smh, Hypotheses};
pub use psrs::{p_srs, srs_along_path, PathChain, SrsInput, SrsInterval};

/// Tolerance on probabilities that must sum to one.
pub const NORMALIZATION_TOL: f64 = 1e-9;
