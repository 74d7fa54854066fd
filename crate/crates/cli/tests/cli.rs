use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rulelattice::{ClassRuleBase, ModelConfig, OneVsRestModel, Partition};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rulelattice"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn train_iris(dir: &Path) -> PathBuf {
    let model = dir.join("iris.json");
    let o = run(&[
        "train",
        "--data",
        p(&data("iris.csv")),
        "--class-column",
        "species",
        "--out",
        p(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    model
}

fn train_toy(dir: &Path) -> PathBuf {
    let model = dir.join("toy.json");
    let o = run(&[
        "train",
        "--data",
        p(&data("toy.csv")),
        "--class-column",
        "Y",
        "--labels",
        "3",
        "--split",
        "1",
        "--out",
        p(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    model
}

#[test]
fn train_iris_reports_three_classes() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let o = run(&[
        "train",
        "--data",
        p(&data("iris.csv")),
        "--class-column",
        "species",
        "--out",
        p(&model),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("rows: 150 (train 120, test 30), seed 42\n"));
    assert_eq!(text.matches("class Iris-").count(), 3);
    assert_eq!(text.matches("lattice   4096").count(), 21);
    assert!(model.exists());
}

#[test]
fn train_toy_with_split_one() {
    let dir = tempfile::tempdir().unwrap();
    train_toy(dir.path());
    // The default split leaves no test row on a two-row file.
    let o = run(&[
        "train",
        "--data",
        p(&data("toy.csv")),
        "--class-column",
        "Y",
        "--labels",
        "3",
        "--out",
        p(&dir.path().join("x.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_class_column_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "train",
        "--data",
        p(&data("iris.csv")),
        "--class-column",
        "label",
        "--out",
        p(&dir.path().join("m.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("label"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["train"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let o = run(&[
        "train",
        "--data",
        p(&data("iris.csv")),
        "--class-column",
        "species",
        "--out",
        "/dev/null",
        "--labels",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn evaluate_prints_accuracy_and_confusion() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_iris(dir.path());
    let o = run(&[
        "evaluate",
        "--model",
        p(&model),
        "--data",
        p(&data("iris.csv")),
        "--holdout",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("total: 30\n"));
    let line = text.lines().find(|l| l.starts_with("accuracy: ")).unwrap();
    let pct = line.trim_start_matches("accuracy: ");
    assert!(pct.ends_with('%'));
    let (int, frac) = pct.trim_end_matches('%').split_once('.').unwrap();
    assert!(int.parse::<u32>().is_ok() && frac.len() == 2);
    assert!(text.contains("confusion"));

    let all = run(&[
        "evaluate",
        "--model",
        p(&model),
        "--data",
        p(&data("iris.csv")),
    ]);
    assert!(stdout(&all).contains("total: 150\n"));
}

#[test]
fn evaluate_rejects_a_mismatched_schema() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_iris(dir.path());
    let csv = dir.path().join("three.csv");
    std::fs::write(&csv, "a,b,c,species\n1,2,3,Iris-setosa\n").unwrap();
    let o = run(&["evaluate", "--model", p(&model), "--data", p(&csv)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_on_an_empty_file_warns() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_iris(dir.path());
    let csv = dir.path().join("empty.csv");
    std::fs::write(
        &csv,
        "sepal_length,sepal_width,petal_length,petal_width,species\n",
    )
    .unwrap();
    let o = run(&["evaluate", "--model", p(&model), "--data", p(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    assert!(stdout(&o).contains("total: 0\n"));
}

#[test]
fn predict_prints_scores_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_iris(dir.path());
    let o = run(&[
        "predict",
        "--model",
        p(&model),
        "--input",
        "5.1,3.5,1.4,0.2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("score ").count(), 3);
    assert!(text.ends_with("verdict: Iris-setosa\n"), "{text}");

    let far = run(&["predict", "--model", p(&model), "--input", "-40,99,0,1e6"]);
    assert!(far.status.success());
    assert!(stdout(&far).contains("verdict: "));

    let short = run(&["predict", "--model", p(&model), "--input", "5.1,3.5"]);
    assert_eq!(short.status.code(), Some(2));
    let junk = run(&["predict", "--model", p(&model), "--input", "5.1,x,1,1"]);
    assert_eq!(junk.status.code(), Some(1));
}

#[test]
fn inspect_lists_toy_rules() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_toy(dir.path());
    let o = run(&["inspect", "--model", p(&model)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[P]\n"));
    assert!(text.contains("IF X is N THEN Y is P [1.00]\n"));
    assert!(text.contains("IF X is P THEN Y is N [1.00]\n"));
}

#[test]
fn inspect_marks_empty_bases() {
    let dir = tempfile::tempdir().unwrap();
    let model = OneVsRestModel {
        config: ModelConfig::default(),
        class_column: "c".into(),
        partitions: vec![Partition::with_default_labels("x", 0.0, 1.0, 7).unwrap()],
        output: Partition::unit_output(7).unwrap(),
        classes: vec![ClassRuleBase {
            name: "a".into(),
            rules: Vec::new(),
        }],
    };
    let path = dir.path().join("empty.json");
    std::fs::write(&path, model.to_json()).unwrap();
    let o = run(&["inspect", "--model", p(&path)]);
    assert_eq!(stdout(&o), "[a]\n(no rules)\n");
}

#[test]
fn corrupted_model_reports_an_offset() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_toy(dir.path());
    let mut text = std::fs::read_to_string(&model).unwrap();
    let cut = text.len() / 2;
    text.truncate(cut);
    std::fs::write(&model, text).unwrap();
    let o = run(&["inspect", "--model", p(&model)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at byte"), "{}", stderr(&o));

    let missing = run(&["inspect", "--model", p(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(2));
}
