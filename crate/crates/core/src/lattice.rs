//! Environment-lattice rule learner.
//!
//! For a fixed consequent label every environment (partial assignment of
//! input labels) is treated as an assumption. Each one gets the set of
//! examples its antecedent fires on and the minimum matching degree over
//! that set. Environments with positive degree form the node's label, which
//! is then minimized: an environment is dropped when a strict subset of it
//! reaches a strictly greater degree.
//!
//! The lattice is walked level by level in increasing cardinality. An
//! environment's coverage is derived from its parent (itself minus its last
//! atom), so each level only filters the coverage lists of the one below.
//! With pruning on, strict supersets of an environment whose degree is
//! exactly 1 are never evaluated against the full example set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{ClassRuleBase, Rule};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fuzzy::{Atom, Environment, Partition};
use crate::model::{ModelConfig, OneVsRestModel};

/// How equal degrees are treated by subsumption.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// A subset witness must have a strictly greater degree.
    #[default]
    Strict,
    /// A subset witness with an equal degree also removes the superset.
    DropTies,
}

impl TiePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TiePolicy::Strict => "strict",
            TiePolicy::DropTies => "drop-ties",
        }
    }
}

impl std::str::FromStr for TiePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "strict" => Ok(TiePolicy::Strict),
            "drop-ties" | "drop-superset-on-tie" => Ok(TiePolicy::DropTies),
            other => Err(format!("unknown tie policy {other:?}")),
        }
    }
}

/// The subsumption predicate: tie handling plus a comparison tolerance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Subsumption {
    pub tie_policy: TiePolicy,
    /// Tolerance on degree comparisons; 0 means exact.
    pub epsilon: f64,
}

impl Subsumption {
    /// Whether a subset witness with degree `witness` removes an
    /// environment with degree `degree`.
    #[inline]
    pub fn dominates(&self, witness: f64, degree: f64) -> bool {
        match self.tie_policy {
            TiePolicy::Strict => witness - degree > self.epsilon,
            TiePolicy::DropTies => witness + self.epsilon >= degree,
        }
    }

    /// True when `a` is removed because of `b`: `b`'s environment is a
    /// strict subset of `a`'s and `b` dominates `a`'s degree.
    pub fn subsumes(&self, a: &NodeEntry, b: &NodeEntry) -> bool {
        b.environment.is_strict_subset_of(&a.environment) && self.dominates(b.degree, a.degree)
    }
}

/// [`Subsumption::subsumes`] under the default strict, exact predicate.
pub fn subsumes(a: &NodeEntry, b: &NodeEntry) -> bool {
    Subsumption::default().subsumes(a, b)
}

/// Learner settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    pub prune: bool,
    pub subsumption: Subsumption,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            prune: true,
            subsumption: Subsumption::default(),
        }
    }
}

/// One environment in a node's label.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEntry {
    pub environment: Environment,
    /// Minimum matching degree over `coverage`; always positive.
    pub degree: f64,
    /// Sorted indices of the examples the antecedent fires on.
    pub coverage: Vec<usize>,
}

/// All rules learned for one consequent label.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedNode {
    pub consequent: usize,
    pub entries: Vec<NodeEntry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LatticeStats {
    /// Environments evaluated against the full example set.
    pub environments_enumerated: u64,
    /// Environments skipped because a subset had degree 1.
    pub environments_pruned: u64,
    pub lattice_size: u64,
}

impl std::ops::AddAssign for LatticeStats {
    fn add_assign(&mut self, rhs: Self) {
        self.environments_enumerated += rhs.environments_enumerated;
        self.environments_pruned += rhs.environments_pruned;
        self.lattice_size += rhs.lattice_size;
    }
}

/// Number of environments over variables with the given label counts:
/// each variable is either absent or takes one of its labels.
pub fn lattice_size(label_counts: &[usize]) -> u64 {
    label_counts
        .iter()
        .fold(1u64, |acc, &k| acc.saturating_mul(k as u64 + 1))
}

/// All environments of one cardinality, lexicographic by `(variable, label)`.
pub fn environments_of_size(label_counts: &[usize], size: usize) -> Vec<Environment> {
    fn walk(
        counts: &[usize],
        from: usize,
        remaining: usize,
        prefix: &mut Vec<Atom>,
        out: &mut Vec<Environment>,
    ) {
        if remaining == 0 {
            out.push(Environment::from_sorted(prefix.clone()));
            return;
        }
        for v in from..=counts.len().saturating_sub(remaining) {
            for l in 0..counts[v] {
                prefix.push(Atom::new(v, l));
                walk(counts, v + 1, remaining - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if size <= label_counts.len() {
        walk(
            label_counts,
            0,
            size,
            &mut Vec::with_capacity(size),
            &mut out,
        );
    }
    out
}

/// Every environment, empty first, in non-decreasing cardinality.
pub fn enumerate_environments(label_counts: &[usize]) -> impl Iterator<Item = Environment> + '_ {
    (0..=label_counts.len()).flat_map(move |c| environments_of_size(label_counts, c))
}

/// Indices of the examples on which `t` fires with positive strength.
pub fn coverage(t: &Environment, d: &Dataset) -> Vec<usize> {
    let parts = d.schema();
    d.examples()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            t.atoms()
                .iter()
                .all(|a| parts[a.variable].grade(a.label, e.inputs[a.variable]) > 0.0)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Minimum per-example matching degree over `cov`; 0 when `cov` is empty.
pub fn matching_degree_set(
    t: &Environment,
    consequent: usize,
    d: &Dataset,
    cov: &[usize],
) -> Result<f64> {
    let out = d.output_partition().ok_or(Error::MissingOutputPartition)?;
    if cov.is_empty() {
        return Ok(0.0);
    }
    let mut degree = 1.0f64;
    for &i in cov {
        let e = &d.examples()[i];
        degree = degree.min(crate::fuzzy::matching_degree_example(
            t,
            consequent,
            e,
            d.schema(),
            out,
        )?);
    }
    Ok(degree)
}

/// Drops every entry that has a strict-subset witness among `entries`
/// dominating its degree. All input entries act as witnesses, removed or
/// not, so the result does not depend on input order. Survivors keep their
/// relative order.
pub fn minimize_label(entries: Vec<NodeEntry>, rule: &Subsumption) -> Vec<NodeEntry> {
    let degrees: HashMap<&Environment, f64> =
        entries.iter().map(|e| (&e.environment, e.degree)).collect();
    let mut memo: HashMap<Environment, f64> = HashMap::new();
    let keep: Vec<bool> = entries
        .iter()
        .map(|e| {
            let best = best_strict_subset(&e.environment, &degrees, &mut memo);
            !rule.dominates(best, e.degree)
        })
        .collect();
    entries
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

/// Highest degree among entries that are strict subsets of `t`, or -inf.
fn best_strict_subset(
    t: &Environment,
    degrees: &HashMap<&Environment, f64>,
    memo: &mut HashMap<Environment, f64>,
) -> f64 {
    if let Some(&v) = memo.get(t) {
        return v;
    }
    let mut best = f64::NEG_INFINITY;
    for skip in 0..t.len() {
        let sub = Environment::from_sorted(
            t.atoms()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, a)| *a)
                .collect(),
        );
        if let Some(&d) = degrees.get(&sub) {
            best = best.max(d);
        }
        best = best.max(best_strict_subset(&sub, degrees, memo));
    }
    memo.insert(t.clone(), best);
    best
}

/// Pairwise check that no entry subsumes another.
pub fn check_minimal(entries: &[NodeEntry], rule: &Subsumption) -> Result<()> {
    for a in entries {
        for b in entries {
            if rule.subsumes(a, b) {
                return Err(Error::Invariant(format!(
                    "{} (degree {}) is subsumed by {} (degree {})",
                    a.environment, a.degree, b.environment, b.degree
                )));
            }
        }
    }
    Ok(())
}

/// Precomputed memberships of one dataset, shared across consequents.
pub struct LatticeLearner<'a> {
    data: &'a Dataset,
    output: &'a Partition,
    label_counts: Vec<usize>,
    /// `grades[e * stride + offsets[v] + l]` = membership of example `e`'s
    /// value of variable `v` in label `l`.
    grades: Vec<f64>,
    offsets: Vec<usize>,
    stride: usize,
    config: LearnConfig,
}

type Cover = Vec<(u32, f64)>;

impl<'a> LatticeLearner<'a> {
    pub fn new(data: &'a Dataset, config: LearnConfig) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let output = data
            .output_partition()
            .ok_or(Error::MissingOutputPartition)?;
        let label_counts: Vec<usize> = data.schema().iter().map(Partition::label_count).collect();
        let mut offsets = Vec::with_capacity(label_counts.len());
        let mut stride = 0;
        for &k in &label_counts {
            offsets.push(stride);
            stride += k;
        }
        let mut grades = Vec::with_capacity(stride * data.len());
        for e in data.examples() {
            for (v, p) in data.schema().iter().enumerate() {
                grades.extend((0..p.label_count()).map(|l| p.grade(l, e.inputs[v])));
            }
        }
        Ok(Self {
            data,
            output,
            label_counts,
            grades,
            offsets,
            stride,
            config,
        })
    }

    #[inline]
    fn grade(&self, example: usize, atom: Atom) -> f64 {
        self.grades[example * self.stride + self.offsets[atom.variable] + atom.label]
    }

    /// Mixed-radix code of an environment, unique within the lattice.
    fn code(&self, atoms: &[Atom]) -> u64 {
        let mut code = 0u64;
        for a in atoms {
            let mut stride = 1u64;
            for &k in &self.label_counts[..a.variable] {
                stride = stride.wrapping_mul(k as u64 + 1);
            }
            code = code.wrapping_add((a.label as u64 + 1).wrapping_mul(stride));
        }
        code
    }

    /// Learns the minimized node for one consequent label.
    pub fn learn_node(&self, consequent: usize) -> Result<(LearnedNode, LatticeStats)> {
        if consequent >= self.output.label_count() {
            return Err(Error::BadLabelSpec(format!(
                "consequent {consequent} out of range for {} output labels",
                self.output.label_count()
            )));
        }
        let out_grades: Vec<f64> = self
            .data
            .examples()
            .iter()
            .map(|e| self.output.grade(consequent, e.output))
            .collect();
        let rule = self.config.subsumption;
        let mut stats = LatticeStats {
            lattice_size: lattice_size(&self.label_counts),
            ..Default::default()
        };
        let mut entries = Vec::new();
        // Degree-1 environments with their coverage.
        let mut certain: Vec<(Environment, Vec<u32>)> = Vec::new();

        let mut prev: HashMap<u64, Cover> = HashMap::new();
        for size in 0..=self.label_counts.len() {
            let mut level: HashMap<u64, Cover> = HashMap::new();
            for env in environments_of_size(&self.label_counts, size) {
                if self.config.prune {
                    let witness = certain
                        .iter()
                        .filter(|(s, _)| s.is_strict_subset_of(&env))
                        .min_by_key(|(_, c)| c.len());
                    if let Some((_, cov)) = witness {
                        stats.environments_pruned += 1;
                        // Only a tie can survive a degree-1 witness.
                        if !rule.dominates(1.0, 1.0) {
                            if let Some(entry) = self.evaluate_within(&env, cov, &out_grades) {
                                if !rule.dominates(1.0, entry.degree) {
                                    entries.push(entry);
                                }
                            }
                        }
                        continue;
                    }
                }
                stats.environments_enumerated += 1;

                let cover: Cover = match env.atoms().split_last() {
                    None => (0..self.data.len() as u32).map(|e| (e, 1.0)).collect(),
                    Some((&last, rest)) => match prev.get(&self.code(rest)) {
                        Some(parent) => parent
                            .iter()
                            .filter_map(|&(e, f)| {
                                let g = self.grade(e as usize, last);
                                (g > 0.0).then_some((e, f.min(g)))
                            })
                            .collect(),
                        None => Vec::new(),
                    },
                };
                if cover.is_empty() {
                    continue;
                }
                let degree = cover
                    .iter()
                    .fold(1.0f64, |d, &(e, f)| d.min(f.min(out_grades[e as usize])));
                if degree > 0.0 {
                    if self.config.prune && degree == 1.0 {
                        certain.push((env.clone(), cover.iter().map(|&(e, _)| e).collect()));
                    }
                    entries.push(NodeEntry {
                        environment: env.clone(),
                        degree,
                        coverage: cover.iter().map(|&(e, _)| e as usize).collect(),
                    });
                }
                level.insert(self.code(env.atoms()), cover);
            }
            prev = level;
        }
        let entries = minimize_label(entries, &rule);
        Ok((
            LearnedNode {
                consequent,
                entries,
            },
            stats,
        ))
    }

    /// Evaluates `env` restricted to `within`, which must contain its whole
    /// coverage.
    fn evaluate_within(
        &self,
        env: &Environment,
        within: &[u32],
        out_grades: &[f64],
    ) -> Option<NodeEntry> {
        let mut degree = 1.0f64;
        let mut coverage = Vec::new();
        for &e in within {
            let f = env
                .atoms()
                .iter()
                .fold(1.0f64, |f, &a| f.min(self.grade(e as usize, a)));
            if f > 0.0 {
                coverage.push(e as usize);
                degree = degree.min(f.min(out_grades[e as usize]));
            }
        }
        (!coverage.is_empty() && degree > 0.0).then(|| NodeEntry {
            environment: env.clone(),
            degree,
            coverage,
        })
    }

    /// Learns a node for every consequent label, omitting empty ones.
    pub fn learn_rulebase(&self) -> Result<RuleBaseLearning> {
        let results: Vec<(LearnedNode, LatticeStats)> = (0..self.output.label_count())
            .into_par_iter()
            .map(|c| self.learn_node(c))
            .collect::<Result<_>>()?;
        let mut stats = Vec::with_capacity(results.len());
        let mut nodes = Vec::new();
        for (node, s) in results {
            stats.push((node.consequent, s));
            if !node.entries.is_empty() {
                nodes.push(node);
            }
        }
        Ok(RuleBaseLearning { nodes, stats })
    }
}

/// Output of [`learn_rulebase`].
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBaseLearning {
    /// Non-empty nodes in consequent order.
    pub nodes: Vec<LearnedNode>,
    /// Per-consequent lattice statistics, including empty nodes.
    pub stats: Vec<(usize, LatticeStats)>,
}

impl RuleBaseLearning {
    pub fn total_stats(&self) -> LatticeStats {
        let mut total = LatticeStats::default();
        for (_, s) in &self.stats {
            total += *s;
        }
        total
    }
}

/// Learns the minimized node for `consequent` over `d`.
pub fn learn_node(
    consequent: usize,
    d: &Dataset,
    config: LearnConfig,
) -> Result<(LearnedNode, LatticeStats)> {
    LatticeLearner::new(d, config)?.learn_node(consequent)
}

/// Learns nodes for every consequent label of `d`'s output partition.
pub fn learn_rulebase(d: &Dataset, config: LearnConfig) -> Result<RuleBaseLearning> {
    LatticeLearner::new(d, config)?.learn_rulebase()
}

/// Training summary for one class of a one-vs-rest model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTraining {
    pub class: String,
    pub learning: RuleBaseLearning,
}

/// Learns one rule base per class, each separating the class from the
/// rest under crisp 0/1 outputs over the unit `label_count` partition.
pub fn learn_one_vs_rest(
    d: &Dataset,
    config: &ModelConfig,
    prune: bool,
) -> Result<(OneVsRestModel, Vec<ClassTraining>)> {
    let names = d.class_names().unwrap_or_default();
    if names.len() < 2 {
        return Err(Error::TooFewClasses(names.len()));
    }
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let output = Partition::unit_output(config.label_count)?;
    let learn = config.learn_config(prune);
    let trained: Vec<(ClassRuleBase, ClassTraining)> = names
        .par_iter()
        .map(|name| {
            let encoded = d.encode_one_vs_rest(name, output.clone())?;
            let learning = learn_rulebase(&encoded, learn)?;
            let rules = learning
                .nodes
                .iter()
                .flat_map(|node| {
                    node.entries.iter().map(move |e| Rule {
                        antecedent: e.environment.clone(),
                        consequent: node.consequent,
                        degree: e.degree,
                    })
                })
                .collect();
            Ok((
                ClassRuleBase {
                    name: name.clone(),
                    rules,
                },
                ClassTraining {
                    class: name.clone(),
                    learning,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let (classes, reports) = trained.into_iter().unzip();
    let model = OneVsRestModel {
        config: config.clone(),
        class_column: d.class_column().unwrap_or("class").to_string(),
        partitions: d.schema().to_vec(),
        output,
        classes,
    };
    Ok((model, reports))
}
