//! One-vs-rest models and their JSON file format.
//!
//! Variables and labels are written by name so a model file can be read
//! as a rule listing. Degrees carry 17 significant digits, which is enough
//! to reproduce every 64-bit float exactly.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::classifier::{ClassRuleBase, Rule, ScoringPolicy};
use crate::dataset::SHUFFLE_ALGORITHM;
use crate::error::{Error, Result};
use crate::fuzzy::{Atom, Environment, Partition};
use crate::lattice::{LearnConfig, Subsumption, TiePolicy};

pub const FORMAT_VERSION: u32 = 1;

/// Training settings recorded alongside the rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub label_count: usize,
    pub tie_policy: TiePolicy,
    pub epsilon: f64,
    pub scoring_policy: ScoringPolicy,
    pub seed: u64,
    pub split_fraction: f64,
    pub shuffle_algorithm: String,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            label_count: 7,
            tie_policy: TiePolicy::Strict,
            epsilon: 0.0,
            scoring_policy: ScoringPolicy::Positive,
            seed: 42,
            split_fraction: 0.8,
            shuffle_algorithm: SHUFFLE_ALGORITHM.to_string(),
        }
    }
}

impl ModelConfig {
    pub fn subsumption(&self) -> Subsumption {
        Subsumption {
            tie_policy: self.tie_policy,
            epsilon: self.epsilon,
        }
    }

    pub fn learn_config(&self, prune: bool) -> LearnConfig {
        LearnConfig {
            prune,
            subsumption: self.subsumption(),
        }
    }
}

/// Per-class rule bases plus everything needed to evaluate them.
#[derive(Debug, Clone, PartialEq)]
pub struct OneVsRestModel {
    pub config: ModelConfig,
    pub class_column: String,
    pub partitions: Vec<Partition>,
    pub output: Partition,
    pub classes: Vec<ClassRuleBase>,
}

impl OneVsRestModel {
    /// Pretty-printed JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            format_version: FORMAT_VERSION,
            config: self.config.clone(),
            class_column: self.class_column.clone(),
            variables: self.partitions.iter().map(PartitionDoc::from).collect(),
            output: PartitionDoc::from(&self.output),
            classes: self
                .classes
                .iter()
                .map(|c| ClassDoc {
                    name: c.name.clone(),
                    rules: c
                        .rules
                        .iter()
                        .map(|r| RuleDoc {
                            antecedent: r
                                .antecedent
                                .atoms()
                                .iter()
                                .map(|a| {
                                    let p = &self.partitions[a.variable];
                                    AtomDoc {
                                        variable: p.variable_name().to_string(),
                                        label: p.label_names()[a.label].clone(),
                                    }
                                })
                                .collect(),
                            consequent: self.output.label_names()[r.consequent].clone(),
                            degree: Degree(r.degree),
                        })
                        .collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("model document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::ModelParse {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        })?;
        let semantic = |message: String| Error::ModelParse { offset: 0, message };
        if doc.format_version != FORMAT_VERSION {
            return Err(semantic(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        let partitions = doc
            .variables
            .into_iter()
            .map(PartitionDoc::into_partition)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| semantic(e.to_string()))?;
        let output = doc
            .output
            .into_partition()
            .map_err(|e| semantic(e.to_string()))?;
        let mut classes = Vec::with_capacity(doc.classes.len());
        for class in doc.classes {
            let mut rules = Vec::with_capacity(class.rules.len());
            for r in class.rules {
                let mut atoms = Vec::with_capacity(r.antecedent.len());
                for a in &r.antecedent {
                    let v = partitions
                        .iter()
                        .position(|p| p.variable_name() == a.variable)
                        .ok_or_else(|| semantic(format!("unknown variable {:?}", a.variable)))?;
                    let l = partitions[v]
                        .label_index(&a.label)
                        .ok_or_else(|| semantic(format!("unknown label {:?}", a.label)))?;
                    atoms.push(Atom::new(v, l));
                }
                let antecedent = Environment::new(atoms).map_err(|e| semantic(e.to_string()))?;
                let consequent = output
                    .label_index(&r.consequent)
                    .ok_or_else(|| semantic(format!("unknown output label {:?}", r.consequent)))?;
                if !(r.degree.0 > 0.0 && r.degree.0 <= 1.0) {
                    return Err(semantic(format!("degree {} outside (0, 1]", r.degree.0)));
                }
                rules.push(Rule {
                    antecedent,
                    consequent,
                    degree: r.degree.0,
                });
            }
            classes.push(ClassRuleBase {
                name: class.name,
                rules,
            });
        }
        Ok(Self {
            config: doc.config,
            class_column: doc.class_column,
            partitions,
            output,
            classes,
        })
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

/// Formats `x` with 17 significant digits, positional for moderate
/// exponents.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}");
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Degree(f64);

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if !v.is_finite() {
            return Err(D::Error::custom("degree must be finite"));
        }
        Ok(Degree(v))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format_version: u32,
    config: ModelConfig,
    class_column: String,
    variables: Vec<PartitionDoc>,
    output: PartitionDoc,
    classes: Vec<ClassDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    name: String,
    domain_min: f64,
    domain_max: f64,
    labels: Vec<String>,
    centers: Vec<f64>,
}

impl From<&Partition> for PartitionDoc {
    fn from(p: &Partition) -> Self {
        Self {
            name: p.variable_name().to_string(),
            domain_min: p.domain_min(),
            domain_max: p.domain_max(),
            labels: p.label_names().to_vec(),
            centers: p.centers().to_vec(),
        }
    }
}

impl PartitionDoc {
    fn into_partition(self) -> Result<Partition> {
        Partition::from_parts(
            self.name,
            self.domain_min,
            self.domain_max,
            self.labels,
            self.centers,
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    rules: Vec<RuleDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    #[serde(rename = "if")]
    antecedent: Vec<AtomDoc>,
    #[serde(rename = "then")]
    consequent: String,
    degree: Degree,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    variable: String,
    label: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_model() -> OneVsRestModel {
        let x = Partition::with_default_labels("X", 0.0, 1.0, 3).unwrap();
        OneVsRestModel {
            config: ModelConfig {
                label_count: 3,
                ..Default::default()
            },
            class_column: "Y".into(),
            partitions: vec![x],
            output: Partition::unit_output(3).unwrap(),
            classes: vec![ClassRuleBase {
                name: "P".into(),
                rules: vec![Rule {
                    antecedent: Environment::new([Atom::new(0, 0)]).unwrap(),
                    consequent: 2,
                    degree: 1.0 / 3.0,
                }],
            }],
        }
    }

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
        assert_eq!(format_sig17(0.5), "0.50000000000000000");
        assert_eq!(format_sig17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_sig17(1e-9), "1.0000000000000001e-9");
        for x in [0.1, 0.2 + 0.1, 1.0 / 7.0, 0.0852, 1e-300] {
            assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn round_trips() {
        let m = toy_model();
        let text = m.to_json();
        assert!(text.contains("\"degree\": 0.33333333333333331"));
        assert_eq!(OneVsRestModel::from_json(&text).unwrap(), m);
    }

    #[test]
    fn corrupted_file_reports_offset() {
        let text = toy_model().to_json();
        let cut = &text[..text.len() / 2];
        match OneVsRestModel::from_json(cut) {
            Err(Error::ModelParse { offset, .. }) => assert!(offset > 0 && offset <= cut.len()),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad = text.replacen("\"label\": \"N\"", "\"label\": \"Q\"", 1);
        assert!(matches!(
            OneVsRestModel::from_json(&bad),
            Err(Error::ModelParse { .. })
        ));
    }
}
