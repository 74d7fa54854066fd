//! One-vs-rest classification with learned rule bases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fuzzy::{firing_strength, Environment, Partition};
use crate::model::OneVsRestModel;

/// A weighted rule `antecedent -> Y is consequent [degree]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Environment,
    pub consequent: usize,
    pub degree: f64,
}

/// The rules learned for one class against the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassRuleBase {
    pub name: String,
    pub rules: Vec<Rule>,
}

/// How a class's rules are folded into one score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoringPolicy {
    /// Strongest activation among rules concluding the top output label.
    #[default]
    Positive,
    /// That activation minus the strongest bottom-label activation, floored at 0.
    Difference,
}

impl ScoringPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoringPolicy::Positive => "positive",
            ScoringPolicy::Difference => "difference",
        }
    }
}

impl std::str::FromStr for ScoringPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "positive" => Ok(ScoringPolicy::Positive),
            "difference" => Ok(ScoringPolicy::Difference),
            other => Err(format!("unknown scoring policy {other:?}")),
        }
    }
}

/// `min(firing strength, rule degree)`.
pub fn rule_activation(rule: &Rule, x: &[f64], partitions: &[Partition]) -> Result<f64> {
    Ok(firing_strength(&rule.antecedent, x, partitions)?.min(rule.degree))
}

/// Score of one class at `x`. Under the one-vs-rest encoding the top
/// output label means "is the class" and the bottom one "is not".
pub fn class_score(
    base: &ClassRuleBase,
    x: &[f64],
    partitions: &[Partition],
    output: &Partition,
    policy: ScoringPolicy,
) -> Result<f64> {
    let positive = output.label_count() - 1;
    let mut pos = 0.0f64;
    let mut neg = 0.0f64;
    for rule in &base.rules {
        if rule.consequent == positive {
            pos = pos.max(rule_activation(rule, x, partitions)?);
        } else if rule.consequent == 0 && policy == ScoringPolicy::Difference {
            neg = neg.max(rule_activation(rule, x, partitions)?);
        }
    }
    Ok(match policy {
        ScoringPolicy::Positive => pos,
        ScoringPolicy::Difference => (pos - neg).max(0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Class(String),
    Undistinguished,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Class(c) => f.write_str(c),
            Verdict::Undistinguished => f.write_str("UNDISTINGUISHED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// One score per class, in model order.
    pub scores: Vec<(String, f64)>,
    pub verdict: Verdict,
}

/// The unique strict maximum if it is positive, otherwise undistinguished.
pub fn verdict_from_scores(scores: &[(String, f64)]) -> Verdict {
    let Some(best) = scores.iter().map(|(_, s)| *s).reduce(f64::max) else {
        return Verdict::Undistinguished;
    };
    let mut at_best = scores.iter().filter(|(_, s)| *s == best);
    match (at_best.next(), at_best.next()) {
        (Some((name, _)), None) if best > 0.0 => Verdict::Class(name.clone()),
        _ => Verdict::Undistinguished,
    }
}

pub fn classify(model: &OneVsRestModel, x: &[f64]) -> Result<Prediction> {
    if x.len() != model.partitions.len() {
        return Err(Error::ArityMismatch {
            expected: model.partitions.len(),
            found: x.len(),
        });
    }
    let scores = model
        .classes
        .iter()
        .map(|base| {
            class_score(
                base,
                x,
                &model.partitions,
                &model.output,
                model.config.scoring_policy,
            )
            .map(|s| (base.name.clone(), s))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = verdict_from_scores(&scores);
    Ok(Prediction { scores, verdict })
}

/// Counts of true class (rows) against verdict (columns, the model's
/// classes followed by `UNDISTINGUISHED`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub correct: usize,
    pub wrong: usize,
    pub undistinguished: usize,
    /// `correct / total`, or 0 for an empty test set.
    pub accuracy: f64,
    pub confusion: Confusion,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.correct + self.wrong + self.undistinguished
    }

    pub fn is_degenerate(&self) -> bool {
        self.total() == 0
    }
}

/// Classifies every row of `test` against its recorded class name.
pub fn evaluate(model: &OneVsRestModel, test: &Dataset) -> Result<EvalReport> {
    if test.n_vars() != model.partitions.len() {
        return Err(Error::SchemaMismatch(format!(
            "model has {} inputs, data has {}",
            model.partitions.len(),
            test.n_vars()
        )));
    }
    let names = test
        .class_names()
        .ok_or_else(|| Error::SchemaMismatch("test data has no class column".into()))?;
    let mut rows: Vec<String> = model.classes.iter().map(|c| c.name.clone()).collect();
    let mut columns = rows.clone();
    columns.push(Verdict::Undistinguished.to_string());
    let mut counts = vec![vec![0usize; columns.len()]; rows.len()];
    let (mut correct, mut wrong, mut undistinguished) = (0, 0, 0);

    for (e, &label) in test.examples().iter().zip(test.class_labels()) {
        let truth = &names[label];
        let prediction = classify(model, &e.inputs)?;
        let row = match rows.iter().position(|r| r == truth) {
            Some(r) => r,
            None => {
                rows.push(truth.clone());
                counts.push(vec![0; columns.len()]);
                rows.len() - 1
            }
        };
        let col = match &prediction.verdict {
            Verdict::Class(c) if c == truth => {
                correct += 1;
                columns.iter().position(|x| x == c)
            }
            Verdict::Class(c) => {
                wrong += 1;
                columns.iter().position(|x| x == c)
            }
            Verdict::Undistinguished => {
                undistinguished += 1;
                Some(columns.len() - 1)
            }
        };
        if let Some(col) = col {
            counts[row][col] += 1;
        }
    }
    let total = correct + wrong + undistinguished;
    Ok(EvalReport {
        correct,
        wrong,
        undistinguished,
        accuracy: if total == 0 {
            0.0
        } else {
            correct as f64 / total as f64
        },
        confusion: Confusion {
            rows,
            columns,
            counts,
        },
    })
}
