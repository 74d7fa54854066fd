//! Brute-force reference learner used as an oracle in tests.
//!
//! It shares nothing with the lattice walk: environments come from an
//! odometer over per-variable choices, degrees are recomputed per example
//! from `matching_degree_example`, and minimization is an exhaustive
//! pairwise scan.

#![allow(dead_code)]

use rand::Rng;
use rulelattice::{
    matching_degree_example, Atom, Dataset, Environment, Example, Partition, Subsumption, TiePolicy,
};

/// Positive-degree environment with its coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub environment: Environment,
    pub degree: f64,
    pub coverage: Vec<usize>,
}

/// Every environment, as an odometer over "absent or label j" per variable.
pub fn all_environments(label_counts: &[usize]) -> Vec<Environment> {
    let mut digits = vec![0usize; label_counts.len()];
    let mut out = Vec::new();
    loop {
        let atoms = digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(v, &d)| Atom::new(v, d - 1));
        out.push(Environment::new(atoms).unwrap());
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] <= label_counts[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn firing(t: &Environment, e: &Example, parts: &[Partition]) -> f64 {
    t.atoms()
        .iter()
        .map(|a| {
            parts[a.variable]
                .membership(a.label, e.inputs[a.variable])
                .unwrap()
        })
        .fold(1.0, f64::min)
}

/// Degree of every environment with positive degree for `consequent`.
pub fn positive_degrees(d: &Dataset, consequent: usize) -> Vec<Scored> {
    let parts = d.schema();
    let out = d.output_partition().unwrap();
    let counts: Vec<usize> = parts.iter().map(Partition::label_count).collect();
    let mut scored = Vec::new();
    for t in all_environments(&counts) {
        let coverage: Vec<usize> = d
            .examples()
            .iter()
            .enumerate()
            .filter(|(_, e)| firing(&t, e, parts) > 0.0)
            .map(|(i, _)| i)
            .collect();
        if coverage.is_empty() {
            continue;
        }
        let degree = coverage
            .iter()
            .map(|&i| {
                matching_degree_example(&t, consequent, &d.examples()[i], parts, out).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        if degree > 0.0 {
            scored.push(Scored {
                environment: t,
                degree,
                coverage,
            });
        }
    }
    scored
}

fn removes(rule: &Subsumption, witness: &Scored, victim: &Scored) -> bool {
    let gap = witness.degree - victim.degree;
    witness.environment.is_strict_subset_of(&victim.environment)
        && match rule.tie_policy {
            TiePolicy::Strict => gap > rule.epsilon,
            TiePolicy::DropTies => gap >= -rule.epsilon,
        }
}

/// The minimal label: entries with no subsuming witness among all entries.
pub fn minimal_label(scored: &[Scored], rule: &Subsumption) -> Vec<Scored> {
    scored
        .iter()
        .filter(|a| !scored.iter().any(|b| removes(rule, b, a)))
        .cloned()
        .collect()
}

/// Oracle node for `consequent`, sorted by environment.
pub fn oracle_node(d: &Dataset, consequent: usize, rule: &Subsumption) -> Vec<Scored> {
    let mut label = minimal_label(&positive_degrees(d, consequent), rule);
    label.sort_by(|a, b| a.environment.cmp(&b.environment));
    label
}

/// Pairs in `label` where one subsumes the other.
pub fn minimality_violations(label: &[Scored], rule: &Subsumption) -> usize {
    label
        .iter()
        .map(|a| label.iter().filter(|b| removes(rule, b, a)).count())
        .sum()
}

/// Positive-degree environments missing from `label` with no strict-subset
/// label entry that removes them.
pub fn completeness_violations(all: &[Scored], label: &[Scored], rule: &Subsumption) -> usize {
    all.iter()
        .filter(|t| !label.iter().any(|l| l.environment == t.environment))
        .filter(|t| !label.iter().any(|l| removes(rule, l, t)))
        .count()
}

/// A random small instance: inputs land on a label center half the time so
/// degree-1 environments and ties actually occur.
pub fn random_instance(rng: &mut impl Rng, n_vars: usize, labels: usize, rows: usize) -> Dataset {
    let part = |name: String| Partition::with_default_labels(name, 0.0, 1.0, labels).unwrap();
    let schema: Vec<Partition> = (0..n_vars).map(|v| part(format!("x{v}"))).collect();
    let examples = (0..rows)
        .map(|_| {
            let inputs = (0..n_vars)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        rng.random_range(0..labels) as f64 / (labels - 1) as f64
                    } else {
                        rng.random::<f64>()
                    }
                })
                .collect();
            let output = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
            Example::new(inputs, output)
        })
        .collect();
    Dataset::new(schema, examples, Some(part("y".into()))).unwrap()
}
