//! Linguistic partitions, antecedent environments and the min-based
//! compositional rule of inference.
//!
//! A [`Partition`] splits one variable's domain into `K` triangular labels
//! whose centers are evenly spaced and whose memberships sum to one at every
//! point of the domain. An [`Environment`] is a partial assignment of labels
//! to input variables: read as a set of assumptions it is a node of the
//! lattice searched by the learner, read as a conjunction it is a rule
//! antecedent.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The seven-label vocabulary, from "high negative" to "high positive".
pub const SEVEN_LABELS: [&str; 7] = ["HN", "MN", "SN", "Z", "SP", "MP", "HP"];

/// Default label names for a partition with `count` labels.
///
/// Counts 2, 3, 5 and 7 get symbolic names; anything else falls back to
/// `L0`, `L1`, ...
pub fn default_label_names(count: usize) -> Vec<String> {
    let named: &[&str] = match count {
        2 => &["N", "P"],
        3 => &["N", "Z", "P"],
        5 => &["HN", "SN", "Z", "SP", "HP"],
        7 => &SEVEN_LABELS,
        _ => &[],
    };
    if named.is_empty() {
        (0..count).map(|j| format!("L{j}")).collect()
    } else {
        named.iter().map(|s| s.to_string()).collect()
    }
}

/// A variable's domain together with its triangular linguistic labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    variable_name: String,
    domain_min: f64,
    domain_max: f64,
    label_names: Vec<String>,
    centers: Vec<f64>,
}

/// Builds a uniform triangular partition over `[domain_min, domain_max]`.
pub fn build_partition(
    domain_min: f64,
    domain_max: f64,
    label_count: usize,
    label_names: &[String],
) -> Result<Partition> {
    if label_names.len() != label_count {
        return Err(Error::BadLabelSpec(format!(
            "{} names given for {} labels",
            label_names.len(),
            label_count
        )));
    }
    Partition::uniform("", domain_min, domain_max, label_names.to_vec())
}

impl Partition {
    /// Uniform partition: centers `min + j * (max - min) / (K - 1)`, the last
    /// one pinned to `max`.
    pub fn uniform(
        variable_name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        label_names: Vec<String>,
    ) -> Result<Self> {
        check_domain(domain_min, domain_max)?;
        check_names(&label_names)?;
        let k = label_names.len();
        let step = (domain_max - domain_min) / (k - 1) as f64;
        let mut centers: Vec<f64> = (0..k).map(|j| domain_min + j as f64 * step).collect();
        centers[k - 1] = domain_max;
        Self::from_parts(variable_name, domain_min, domain_max, label_names, centers)
    }

    /// Uniform partition with the default names for `label_count` labels.
    pub fn with_default_labels(
        variable_name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        label_count: usize,
    ) -> Result<Self> {
        if label_count < 2 {
            return Err(Error::BadLabelSpec(format!(
                "need at least 2 labels, got {label_count}"
            )));
        }
        Self::uniform(
            variable_name,
            domain_min,
            domain_max,
            default_label_names(label_count),
        )
    }

    /// The unit-interval partition used for one-vs-rest outputs.
    pub fn unit_output(label_count: usize) -> Result<Self> {
        Self::with_default_labels("class", 0.0, 1.0, label_count)
    }

    /// Rebuilds a partition from explicit centers, validating every invariant.
    pub fn from_parts(
        variable_name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        label_names: Vec<String>,
        centers: Vec<f64>,
    ) -> Result<Self> {
        check_domain(domain_min, domain_max)?;
        check_names(&label_names)?;
        if centers.len() != label_names.len() {
            return Err(Error::BadLabelSpec(format!(
                "{} centers for {} labels",
                centers.len(),
                label_names.len()
            )));
        }
        if centers[0] != domain_min || centers[centers.len() - 1] != domain_max {
            return Err(Error::BadLabelSpec(
                "outer centers must sit on the domain bounds".into(),
            ));
        }
        if centers
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::BadLabelSpec(
                "centers must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            variable_name: variable_name.into(),
            domain_min,
            domain_max,
            label_names,
            centers,
        })
    }

    pub fn variable_name(&self) -> &str {
        &self.variable_name
    }

    pub fn set_variable_name(&mut self, name: impl Into<String>) {
        self.variable_name = name.into();
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_name(&self, label: usize) -> Option<&str> {
        self.label_names.get(label).map(String::as_str)
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.label_names.iter().position(|n| n == name)
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Membership of `x` in label `label`.
    ///
    /// `x` is clamped to the domain first, so the outer labels behave as
    /// shoulders.
    pub fn membership(&self, label: usize, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteInput(x));
        }
        if label >= self.label_count() {
            return Err(Error::BadLabelSpec(format!(
                "label index {label} out of range for {} labels",
                self.label_count()
            )));
        }
        Ok(self.grade(label, x))
    }

    /// Unchecked membership; `x` must be finite and `label` in range.
    pub(crate) fn grade(&self, label: usize, x: f64) -> f64 {
        let x = x.clamp(self.domain_min, self.domain_max);
        let c = self.centers[label];
        match x.partial_cmp(&c) {
            Some(Ordering::Equal) | None => 1.0,
            Some(Ordering::Less) => {
                if label == 0 {
                    return 1.0;
                }
                let left = self.centers[label - 1];
                if x <= left {
                    0.0
                } else {
                    (x - left) / (c - left)
                }
            }
            Some(Ordering::Greater) => {
                if label + 1 == self.label_count() {
                    return 1.0;
                }
                let right = self.centers[label + 1];
                if x >= right {
                    0.0
                } else {
                    (right - x) / (right - c)
                }
            }
        }
    }
}

fn check_domain(min: f64, max: f64) -> Result<()> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidDomain { min, max });
    }
    Ok(())
}

fn check_names(names: &[String]) -> Result<()> {
    if names.len() < 2 {
        return Err(Error::BadLabelSpec(format!(
            "need at least 2 labels, got {}",
            names.len()
        )));
    }
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(Error::BadLabelSpec(format!("duplicate label name {a:?}")));
        }
    }
    Ok(())
}

/// The proposition "variable `variable` is label `label`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub variable: usize,
    pub label: usize,
}

impl Atom {
    pub fn new(variable: usize, label: usize) -> Self {
        Self { variable, label }
    }
}

/// A set of atoms with at most one atom per variable.
///
/// Atoms are kept sorted by variable, so equality and hashing are
/// insensitive to construction order. Environments order first by
/// cardinality and then lexicographically by `(variable, label)`, which is
/// the order the lattice is walked in.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Environment {
    atoms: Vec<Atom>,
}

impl Environment {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an environment, rejecting two atoms on one variable.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort_unstable();
        atoms.dedup();
        if let Some(w) = atoms.windows(2).find(|w| w[0].variable == w[1].variable) {
            return Err(Error::InvalidEnvironment(format!(
                "variable {} assigned labels {} and {}",
                w[0].variable, w[0].label, w[1].label
            )));
        }
        Ok(Self { atoms })
    }

    /// `atoms` must already be sorted by variable with no repeats.
    pub(crate) fn from_sorted(atoms: Vec<Atom>) -> Self {
        debug_assert!(atoms.windows(2).all(|w| w[0].variable < w[1].variable));
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn label_of(&self, variable: usize) -> Option<usize> {
        self.atoms
            .binary_search_by_key(&variable, |a| a.variable)
            .ok()
            .map(|i| self.atoms[i].label)
    }

    pub fn is_subset_of(&self, other: &Environment) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut theirs = other.atoms.iter();
        'outer: for a in &self.atoms {
            for b in theirs.by_ref() {
                match b.variable.cmp(&a.variable) {
                    Ordering::Less => continue,
                    Ordering::Equal if b.label == a.label => continue 'outer,
                    _ => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_strict_subset_of(&self, other: &Environment) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    /// Checks every atom against the partitions.
    pub fn validate(&self, partitions: &[Partition]) -> Result<()> {
        for a in &self.atoms {
            let p = partitions.get(a.variable).ok_or_else(|| {
                Error::InvalidEnvironment(format!(
                    "variable {} out of range for {} inputs",
                    a.variable,
                    partitions.len()
                ))
            })?;
            if a.label >= p.label_count() {
                return Err(Error::InvalidEnvironment(format!(
                    "label {} out of range for variable {}",
                    a.label, a.variable
                )));
            }
        }
        Ok(())
    }

    /// Renders as `X is N AND Y is P`, or `TRUE` when empty.
    pub fn describe(&self, partitions: &[Partition]) -> String {
        if self.atoms.is_empty() {
            return "TRUE".to_string();
        }
        self.atoms
            .iter()
            .map(|a| {
                let p = &partitions[a.variable];
                format!("{} is {}", p.variable_name(), p.label_names()[a.label])
            })
            .collect::<Vec<_>>()
            .join(" AND ")
    }
}

impl Ord for Environment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.atoms.cmp(&other.atoms))
    }
}

impl PartialOrd for Environment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "X{}:{}", a.variable, a.label)?;
        }
        f.write_str("}")
    }
}

/// One input-output example.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub inputs: Vec<f64>,
    pub output: f64,
}

impl Example {
    pub fn new(inputs: Vec<f64>, output: f64) -> Self {
        Self { inputs, output }
    }
}

/// Min of the antecedent memberships at `inputs`; 1 for the empty antecedent.
pub fn firing_strength(t: &Environment, inputs: &[f64], partitions: &[Partition]) -> Result<f64> {
    t.validate(partitions)?;
    if inputs.len() != partitions.len() {
        return Err(Error::ArityMismatch {
            expected: partitions.len(),
            found: inputs.len(),
        });
    }
    let mut strength = 1.0f64;
    for a in t.atoms() {
        strength = strength.min(partitions[a.variable].membership(a.label, inputs[a.variable])?);
    }
    Ok(strength)
}

/// Degree to which the rule `t -> Y is consequent` matches one example:
/// the antecedent's firing strength cut by the consequent's membership at
/// the example's output.
pub fn matching_degree_example(
    t: &Environment,
    consequent: usize,
    e: &Example,
    partitions: &[Partition],
    output_partition: &Partition,
) -> Result<f64> {
    let firing = firing_strength(t, &e.inputs, partitions)?;
    let out = output_partition.membership(consequent, e.output)?;
    Ok(firing.min(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit7() -> Partition {
        Partition::with_default_labels("x", 0.0, 1.0, 7).unwrap()
    }

    fn unit3() -> Partition {
        Partition::with_default_labels("x", 0.0, 1.0, 3).unwrap()
    }

    #[test]
    fn unit_partition_centers() {
        let p = unit7();
        let expected = [
            0.0,
            1.0 / 6.0,
            2.0 / 6.0,
            3.0 / 6.0,
            4.0 / 6.0,
            5.0 / 6.0,
            1.0,
        ];
        for (c, e) in p.centers().iter().zip(expected) {
            assert!((c - e).abs() < 1e-15, "{c} vs {e}");
        }
        assert_eq!(p.label_names(), &SEVEN_LABELS.map(String::from));
    }

    #[test]
    fn sepal_length_centers() {
        let p = Partition::with_default_labels("sepal_length", 4.3, 7.9, 7).unwrap();
        for (j, c) in p.centers().iter().enumerate() {
            assert!((c - (4.3 + 0.6 * j as f64)).abs() < 1e-12);
        }
        assert_eq!(p.centers()[6], 7.9);
    }

    #[test]
    fn rejects_bad_specs() {
        let one = vec!["A".to_string()];
        assert!(matches!(
            build_partition(0.0, 1.0, 1, &one),
            Err(Error::BadLabelSpec(_))
        ));
        let names = default_label_names(7);
        assert!(matches!(
            build_partition(1.0, 1.0, 7, &names),
            Err(Error::InvalidDomain { .. })
        ));
        assert!(matches!(
            build_partition(0.0, 1.0, 6, &names),
            Err(Error::BadLabelSpec(_))
        ));
        let dup: Vec<String> = ["A", "B", "A"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(
            build_partition(0.0, 1.0, 3, &dup),
            Err(Error::BadLabelSpec(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let p = unit7();
        assert_eq!(p.membership(3, 0.5).unwrap(), 1.0);
        assert!((p.membership(2, 0.25).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(p.membership(0, 0.5).unwrap(), 0.0);
        assert!(matches!(
            p.membership(0, f64::NAN),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(p.membership(7, 0.5).is_err());
    }

    #[test]
    fn clamps_outside_domain() {
        let p = unit7();
        assert_eq!(p.membership(0, -3.0).unwrap(), 1.0);
        assert_eq!(p.membership(6, 12.0).unwrap(), 1.0);
        assert_eq!(p.membership(5, 12.0).unwrap(), 0.0);
    }

    #[test]
    fn environment_rejects_double_assignment() {
        assert!(Environment::new([Atom::new(0, 1), Atom::new(0, 2)]).is_err());
        let a = Environment::new([Atom::new(1, 0), Atom::new(0, 2)]).unwrap();
        let b = Environment::new([Atom::new(0, 2), Atom::new(1, 0), Atom::new(0, 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.label_of(1), Some(0));
        assert_eq!(a.label_of(2), None);
    }

    #[test]
    fn subset_relation() {
        let a = Environment::new([Atom::new(0, 1)]).unwrap();
        let ab = Environment::new([Atom::new(0, 1), Atom::new(2, 0)]).unwrap();
        let other = Environment::new([Atom::new(0, 2), Atom::new(2, 0)]).unwrap();
        assert!(a.is_subset_of(&ab));
        assert!(a.is_strict_subset_of(&ab));
        assert!(!ab.is_subset_of(&a));
        assert!(!a.is_subset_of(&other));
        assert!(Environment::empty().is_strict_subset_of(&a));
        assert!(ab.is_subset_of(&ab));
        assert!(!ab.is_strict_subset_of(&ab));
    }

    #[test]
    fn environment_order_is_cardinality_then_lex() {
        let mut envs = [
            Environment::new([Atom::new(0, 0), Atom::new(1, 0)]).unwrap(),
            Environment::new([Atom::new(1, 0)]).unwrap(),
            Environment::empty(),
            Environment::new([Atom::new(0, 1)]).unwrap(),
        ];
        envs.sort();
        assert!(envs[0].is_empty());
        assert_eq!(envs[1].atoms(), &[Atom::new(0, 1)]);
        assert_eq!(envs[2].atoms(), &[Atom::new(1, 0)]);
        assert_eq!(envs[3].len(), 2);
    }

    #[test]
    fn firing_is_min_of_memberships() {
        let parts = vec![unit7(), unit7()];
        // SN at 0.25 -> 0.5; Z at 0.45 -> 0.7
        let t = Environment::new([Atom::new(0, 2), Atom::new(1, 3)]).unwrap();
        let f = firing_strength(&t, &[0.25, 0.45], &parts).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
        assert_eq!(
            firing_strength(&Environment::empty(), &[0.3, 0.9], &parts).unwrap(),
            1.0
        );
        let zero = Environment::new([Atom::new(0, 0), Atom::new(1, 3)]).unwrap();
        assert_eq!(firing_strength(&zero, &[0.9, 0.5], &parts).unwrap(), 0.0);
        assert!(matches!(
            firing_strength(&t, &[0.1], &parts),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn matching_degree_cuts_by_consequent() {
        let parts = vec![unit3()];
        let out = unit3();
        // firing 0.6 under N at x = 0.2, output at P center
        let t = Environment::new([Atom::new(0, 0)]).unwrap();
        let e = Example::new(vec![0.2], 1.0);
        let md = matching_degree_example(&t, 2, &e, &parts, &out).unwrap();
        assert!((md - 0.6).abs() < 1e-12);
        let e = Example::new(vec![0.0], 0.0);
        assert_eq!(
            matching_degree_example(&t, 2, &e, &parts, &out).unwrap(),
            0.0
        );
        // empty antecedent passes the output membership through
        let e = Example::new(vec![0.7], 0.9);
        let md = matching_degree_example(&Environment::empty(), 2, &e, &parts, &out).unwrap();
        assert!((md - 0.8).abs() < 1e-12);
    }

    #[test]
    fn default_names() {
        assert_eq!(default_label_names(3), ["N", "Z", "P"]);
        assert_eq!(default_label_names(4), ["L0", "L1", "L2", "L3"]);
    }
}
