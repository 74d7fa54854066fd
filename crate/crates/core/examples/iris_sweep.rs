//! Trains and evaluates the one-vs-rest Iris classifier over several seeds.
//!
//! `cargo run --release -p rulelattice --example iris_sweep [scoring]`

use rulelattice::dataset::{IRIS_CLASS_COLUMN, IRIS_CSV};
use rulelattice::{evaluate, learn_one_vs_rest, Dataset, LoadOptions, ModelConfig, ScoringPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scoring: ScoringPolicy = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or_default();
    let data = Dataset::from_reader(
        IRIS_CSV.as_bytes(),
        IRIS_CLASS_COLUMN,
        &LoadOptions::default(),
    )?;
    let mut accs = Vec::new();
    for seed in 0..10u64 {
        let (train, test) = data.split(0.8, seed)?;
        let config = ModelConfig {
            seed,
            scoring_policy: scoring,
            ..Default::default()
        };
        let (model, _) = learn_one_vs_rest(&train, &config, true)?;
        let r = evaluate(&model, &test)?;
        let rules: Vec<usize> = model.classes.iter().map(|c| c.rules.len()).collect();
        println!(
            "seed {seed}: {}/{} correct, {} wrong, {} undistinguished, rules {rules:?}",
            r.correct,
            r.total(),
            r.wrong,
            r.undistinguished
        );
        accs.push(r.accuracy);
    }
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    let best = accs.iter().cloned().fold(0.0, f64::max);
    println!("mean {:.4} best {:.4}", mean, best);
    Ok(())
}
