//! Shared fixtures for the learner benchmarks.

use rulelattice::dataset::{IRIS_CLASS_COLUMN, IRIS_CSV};
use rulelattice::{Dataset, LoadOptions, Partition};

/// The bundled Iris table with default 7-label partitions.
pub fn iris() -> Dataset {
    Dataset::from_reader(
        IRIS_CSV.as_bytes(),
        IRIS_CLASS_COLUMN,
        &LoadOptions::default(),
    )
    .expect("bundled iris loads")
}

/// Iris encoded as setosa-vs-rest over the unit 7-label output partition.
pub fn iris_setosa() -> Dataset {
    iris()
        .encode_one_vs_rest(
            "Iris-setosa",
            Partition::unit_output(7).expect("unit partition"),
        )
        .expect("setosa is a class")
}
