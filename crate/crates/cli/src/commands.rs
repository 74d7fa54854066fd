use std::fmt::Write as _;
use std::path::Path;

use rulelattice::lattice::check_minimal;
use rulelattice::{
    classify, evaluate as evaluate_model, learn_one_vs_rest, Dataset, Error, LoadOptions,
    ModelConfig, OneVsRestModel, ScoringPolicy, TiePolicy,
};

use crate::{EvaluateArgs, InspectArgs, OnOff, PredictArgs, ScoringArg, TieArg, TrainArgs};

pub enum CliError {
    Usage(String),
    Data(Error),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Data(e) => write!(f, "{e}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(m) => CliError::Invariant(m),
            e => CliError::Data(e),
        }
    }
}

type CliResult = Result<(), CliError>;

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush());
}

fn read_model(path: &Path) -> Result<OneVsRestModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(OneVsRestModel::from_json(&text)?)
}

/// `fraction == 1` trains on every row and leaves the test side empty.
fn split_rows(data: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset), CliError> {
    if fraction >= 1.0 {
        return Ok((data.clone(), data.subset(&[])));
    }
    Ok(data.split(fraction, seed)?)
}

pub fn train(a: &TrainArgs) -> CliResult {
    if a.labels < 2 {
        return Err(CliError::Usage("--labels must be at least 2".into()));
    }
    if !(a.split > 0.0 && a.split <= 1.0) {
        return Err(CliError::Usage("--split must lie in (0, 1]".into()));
    }
    if !(a.epsilon >= 0.0 && a.epsilon.is_finite()) {
        return Err(CliError::Usage(
            "--epsilon must be a non-negative number".into(),
        ));
    }
    let opts = LoadOptions {
        label_count: a.labels,
        ..Default::default()
    };
    let data = Dataset::load_csv(&a.data, &a.class_column, &opts)?;
    let (train, test) = split_rows(&data, a.split, a.seed)?;
    let config = ModelConfig {
        label_count: a.labels,
        tie_policy: match a.tie_policy {
            TieArg::Strict => TiePolicy::Strict,
            TieArg::DropTies => TiePolicy::DropTies,
        },
        epsilon: a.epsilon,
        scoring_policy: match a.scoring {
            ScoringArg::Positive => ScoringPolicy::Positive,
            ScoringArg::Difference => ScoringPolicy::Difference,
        },
        seed: a.seed,
        split_fraction: a.split,
        ..Default::default()
    };
    let (model, reports) = learn_one_vs_rest(&train, &config, a.prune == OnOff::On)?;

    let rule = config.subsumption();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "rows: {} (train {}, test {}), seed {}",
        data.len(),
        train.len(),
        test.len(),
        a.seed
    );
    for (base, report) in model.classes.iter().zip(&reports) {
        let _ = writeln!(out, "class {}: {} rules", base.name, base.rules.len());
        for (consequent, stats) in &report.learning.stats {
            let node = report
                .learning
                .nodes
                .iter()
                .find(|n| n.consequent == *consequent);
            if let Some(node) = node {
                check_minimal(&node.entries, &rule)?;
            }
            let _ = writeln!(
                out,
                "  {:>3}: {:>4} rules  enumerated {:>6}  pruned {:>6}  lattice {:>6}",
                model.output.label_names()[*consequent],
                node.map_or(0, |n| n.entries.len()),
                stats.environments_enumerated,
                stats.environments_pruned,
                stats.lattice_size
            );
        }
        let total = report.learning.total_stats();
        let _ = writeln!(
            out,
            "  all: enumerated {}, pruned {}, lattice {}",
            total.environments_enumerated, total.environments_pruned, total.lattice_size
        );
    }
    std::fs::write(&a.out, model.to_json()).map_err(|source| Error::Io {
        path: a.out.clone(),
        source,
    })?;
    let _ = writeln!(out, "model written to {}", a.out.display());
    emit(&out);
    Ok(())
}

pub fn evaluate(a: &EvaluateArgs) -> CliResult {
    let model = read_model(&a.model)?;
    let class_column = a.class_column.as_deref().unwrap_or(&model.class_column);
    let mut data = Dataset::load_csv_with_schema(&a.data, class_column, &model.partitions)?;
    if a.holdout {
        data = split_rows(&data, model.config.split_fraction, model.config.seed)?.1;
    }
    let report = evaluate_model(&model, &data)?;
    if report.is_degenerate() {
        eprintln!("warning: empty test set, report is degenerate");
    }
    let mut out = String::new();
    let _ = writeln!(out, "correct: {}", report.correct);
    let _ = writeln!(out, "wrong: {}", report.wrong);
    let _ = writeln!(out, "undistinguished: {}", report.undistinguished);
    let _ = writeln!(out, "total: {}", report.total());
    let _ = writeln!(out, "accuracy: {:.2}%", report.accuracy * 100.0);
    let c = &report.confusion;
    let width = c
        .rows
        .iter()
        .chain(&c.columns)
        .map(String::len)
        .max()
        .unwrap_or(0);
    let _ = writeln!(out, "confusion (rows: true class, columns: verdict)");
    let _ = write!(out, "{:width$}", "");
    for col in &c.columns {
        let _ = write!(out, "  {col:>width$}");
    }
    out.push('\n');
    for (row, counts) in c.rows.iter().zip(&c.counts) {
        let _ = write!(out, "{row:width$}");
        for n in counts {
            let _ = write!(out, "  {n:>width$}");
        }
        out.push('\n');
    }
    emit(&out);
    Ok(())
}

pub fn predict(a: &PredictArgs) -> CliResult {
    let model = read_model(&a.model)?;
    let x = a
        .input
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--input: not a number: {s:?}")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let p = classify(&model, &x)?;
    let mut out = String::new();
    for (class, score) in &p.scores {
        let _ = writeln!(out, "score {class}: {score:.4}");
    }
    let _ = writeln!(out, "verdict: {}", p.verdict);
    emit(&out);
    Ok(())
}

pub fn inspect(a: &InspectArgs) -> CliResult {
    let model = read_model(&a.model)?;
    emit(&render_rules(&model));
    Ok(())
}

/// One `IF ... THEN ... [degree]` line per rule, grouped by class in model
/// order, strongest rules first.
pub fn render_rules(model: &OneVsRestModel) -> String {
    let top = model.output.label_count() - 1;
    let mut out = String::new();
    for base in &model.classes {
        let _ = writeln!(out, "[{}]", base.name);
        if base.rules.is_empty() {
            out.push_str("(no rules)\n");
            continue;
        }
        let mut rules: Vec<_> = base.rules.iter().collect();
        rules.sort_by(|x, y| y.degree.total_cmp(&x.degree));
        for r in rules {
            let then = if r.consequent == top {
                format!("{} is {}", model.class_column, base.name)
            } else if r.consequent == 0 {
                format!("{} is not {}", model.class_column, base.name)
            } else {
                format!(
                    "{} is {}",
                    model.class_column,
                    model.output.label_names()[r.consequent]
                )
            };
            let _ = writeln!(
                out,
                "IF {} THEN {} [{:.2}]",
                r.antecedent.describe(&model.partitions),
                then,
                r.degree
            );
        }
    }
    out
}
