//! Fuzzy rule induction over an environment lattice.
//!
//! Given input-output examples, [`lattice`] learns, for each consequent
//! label, every antecedent (a partial assignment of linguistic labels to
//! inputs) that matches the examples it covers with positive degree, and
//! keeps only those not dominated by a shorter antecedent. [`classifier`]
//! combines one such rule base per class into a one-vs-rest classifier.

pub mod classifier;
pub mod dataset;
pub mod error;
pub mod fuzzy;
pub mod lattice;
pub mod model;

pub use classifier::{
    class_score, classify, evaluate, rule_activation, ClassRuleBase, EvalReport, Prediction, Rule,
    ScoringPolicy, Verdict,
};
pub use dataset::{Dataset, LoadOptions};
pub use error::{Error, Result};
pub use fuzzy::{
    build_partition, firing_strength, matching_degree_example, Atom, Environment, Example,
    Partition,
};
pub use lattice::{
    learn_node, learn_one_vs_rest, learn_rulebase, minimize_label, subsumes, LatticeStats,
    LearnConfig, LearnedNode, NodeEntry, Subsumption, TiePolicy,
};
pub use model::{ModelConfig, OneVsRestModel};
