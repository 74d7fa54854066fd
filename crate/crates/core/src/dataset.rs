//! Tabular example sets: CSV ingestion, seeded splitting and one-vs-rest
//! output encoding.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fuzzy::{Example, Partition};

/// Name of the permutation used by [`Dataset::split`]; recorded in model
/// files so a split can be reproduced.
pub const SHUFFLE_ALGORITHM: &str = "chacha8-fisher-yates";

/// The canonical 150-row Iris table, bundled with the crate.
pub const IRIS_CSV: &str = include_str!("../data/iris.csv");

/// Class column of [`IRIS_CSV`].
pub const IRIS_CLASS_COLUMN: &str = "species";

/// Options for building partitions while loading a CSV.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub label_count: usize,
    /// Explicit `(min, max)` per column; other columns use observed bounds.
    pub bounds: BTreeMap<String, (f64, f64)>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            label_count: 7,
            bounds: BTreeMap::new(),
        }
    }
}

/// A set of examples over a fixed schema of input partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<Partition>,
    examples: Vec<Example>,
    output_partition: Option<Partition>,
    class_column: Option<String>,
    class_names: Option<Vec<String>>,
    /// Class index per example, parallel to `examples` (empty when unlabeled).
    class_labels: Vec<usize>,
    /// Position of each example in the originally loaded table.
    row_ids: Vec<usize>,
}

impl Dataset {
    /// A generic dataset with real-valued outputs.
    pub fn new(
        schema: Vec<Partition>,
        examples: Vec<Example>,
        output_partition: Option<Partition>,
    ) -> Result<Self> {
        for (i, e) in examples.iter().enumerate() {
            if e.inputs.len() != schema.len() {
                return Err(Error::ArityMismatch {
                    expected: schema.len(),
                    found: e.inputs.len(),
                });
            }
            if let Some(v) = e.inputs.iter().chain([&e.output]).find(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    row: i + 1,
                    column: "?".into(),
                    message: format!("non-finite value {v}"),
                });
            }
        }
        let row_ids = (0..examples.len()).collect();
        Ok(Self {
            schema,
            examples,
            output_partition,
            class_column: None,
            class_names: None,
            class_labels: Vec::new(),
            row_ids,
        })
    }

    pub fn schema(&self) -> &[Partition] {
        &self.schema
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn n_vars(&self) -> usize {
        self.schema.len()
    }

    pub fn output_partition(&self) -> Option<&Partition> {
        self.output_partition.as_ref()
    }

    pub fn with_output_partition(mut self, p: Partition) -> Self {
        self.output_partition = Some(p);
        self
    }

    pub fn class_column(&self) -> Option<&str> {
        self.class_column.as_deref()
    }

    pub fn class_names(&self) -> Option<&[String]> {
        self.class_names.as_deref()
    }

    pub fn class_labels(&self) -> &[usize] {
        &self.class_labels
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    /// Loads a CSV whose non-class columns are numeric, building one
    /// partition per column from its observed range over the whole file.
    pub fn load_csv(
        path: impl AsRef<Path>,
        class_column: &str,
        opts: &LoadOptions,
    ) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file, class_column, opts)
    }

    pub fn from_reader(reader: impl Read, class_column: &str, opts: &LoadOptions) -> Result<Self> {
        let table = RawTable::read(reader, class_column)?;
        if table.rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut schema = Vec::with_capacity(table.columns.len());
        for (j, name) in table.columns.iter().enumerate() {
            let (min, max) = match opts.bounds.get(name) {
                Some(&b) => b,
                None => table
                    .rows
                    .iter()
                    .map(|r| r.0[j])
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v), hi.max(v))
                    }),
            };
            schema.push(Partition::with_default_labels(
                name.clone(),
                min,
                max,
                opts.label_count,
            )?);
        }
        Ok(table.into_dataset(schema, class_column))
    }

    /// Loads a CSV against an existing schema (for evaluating a trained
    /// model). Column names must match the schema; zero rows is allowed.
    pub fn load_csv_with_schema(
        path: impl AsRef<Path>,
        class_column: &str,
        schema: &[Partition],
    ) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader_with_schema(file, class_column, schema)
    }

    pub fn from_reader_with_schema(
        reader: impl Read,
        class_column: &str,
        schema: &[Partition],
    ) -> Result<Self> {
        let table = RawTable::read(reader, class_column)?;
        let expected: Vec<&str> = schema.iter().map(Partition::variable_name).collect();
        let found: Vec<&str> = table.columns.iter().map(String::as_str).collect();
        if expected != found {
            return Err(Error::SchemaMismatch(format!(
                "model expects columns {expected:?}, data has {found:?}"
            )));
        }
        Ok(table.into_dataset(schema.to_vec(), class_column))
    }

    /// Seeded shuffle, then the first `round(k * train_fraction)` rows go
    /// to training and the rest to test. Each side keeps original row order.
    pub fn split(&self, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::DegenerateSplit { train: 0, test: 0 });
        }
        let k = self.len();
        let n_train = (k as f64 * train_fraction).round() as usize;
        let n_test = k - n_train.min(k);
        if n_train == 0 || n_test == 0 {
            return Err(Error::DegenerateSplit {
                train: n_train.min(k),
                test: n_test,
            });
        }
        let mut order: Vec<usize> = (0..k).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        let (train, test) = order.split_at(n_train);
        let mut train = train.to_vec();
        let mut test = test.to_vec();
        train.sort_unstable();
        test.sort_unstable();
        Ok((self.subset(&train), self.subset(&test)))
    }

    /// The rows at positions `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            examples: idx.iter().map(|&i| self.examples[i].clone()).collect(),
            output_partition: self.output_partition.clone(),
            class_column: self.class_column.clone(),
            class_names: self.class_names.clone(),
            class_labels: if self.class_labels.is_empty() {
                Vec::new()
            } else {
                idx.iter().map(|&i| self.class_labels[i]).collect()
            },
            row_ids: idx.iter().map(|&i| self.row_ids[i]).collect(),
        }
    }

    /// Crisp one-vs-rest outputs: 1.0 for rows of `positive_class`, 0.0
    /// for the rest, over `output_partition`.
    pub fn encode_one_vs_rest(
        &self,
        positive_class: &str,
        output_partition: Partition,
    ) -> Result<Dataset> {
        let names = self
            .class_names
            .as_ref()
            .ok_or_else(|| Error::UnknownClass(positive_class.to_string()))?;
        let positive = names
            .iter()
            .position(|n| n == positive_class)
            .ok_or_else(|| Error::UnknownClass(positive_class.to_string()))?;
        let mut out = self.clone();
        for (e, &c) in out.examples.iter_mut().zip(&self.class_labels) {
            e.output = if c == positive { 1.0 } else { 0.0 };
        }
        out.output_partition = Some(output_partition);
        Ok(out)
    }
}

struct RawTable {
    columns: Vec<String>,
    /// (inputs, class name)
    rows: Vec<(Vec<f64>, String)>,
}

impl RawTable {
    fn read(reader: impl Read, class_column: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| csv_error(e, class_column))?
            .clone();
        let class_idx = headers
            .iter()
            .position(|h| h == class_column)
            .ok_or_else(|| Error::Parse {
                row: 1,
                column: class_column.to_string(),
                message: "class column not found in header".into(),
            })?;
        let columns: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != class_idx)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| csv_error(e, class_column))?;
            let line = rec.position().map_or(rows.len() + 2, |p| p.line() as usize);
            let mut inputs = Vec::with_capacity(columns.len());
            let mut class = String::new();
            for (i, cell) in rec.iter().enumerate() {
                if i == class_idx {
                    class = cell.trim().to_string();
                    continue;
                }
                let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                    row: line,
                    column: headers[i].to_string(),
                    message: format!("not a number: {cell:?}"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row: line,
                        column: headers[i].to_string(),
                        message: format!("non-finite value {cell:?}"),
                    });
                }
                inputs.push(v);
            }
            rows.push((inputs, class));
        }
        Ok(Self { columns, rows })
    }

    fn into_dataset(self, schema: Vec<Partition>, class_column: &str) -> Dataset {
        let mut class_names: Vec<String> = Vec::new();
        let mut class_labels = Vec::with_capacity(self.rows.len());
        let mut examples = Vec::with_capacity(self.rows.len());
        for (inputs, class) in self.rows {
            let c = match class_names.iter().position(|n| *n == class) {
                Some(c) => c,
                None => {
                    class_names.push(class);
                    class_names.len() - 1
                }
            };
            class_labels.push(c);
            examples.push(Example::new(inputs, c as f64));
        }
        let row_ids = (0..examples.len()).collect();
        Dataset {
            schema,
            examples,
            output_partition: None,
            class_column: Some(class_column.to_string()),
            class_names: Some(class_names),
            class_labels,
            row_ids,
        }
    }
}

fn csv_error(e: csv::Error, class_column: &str) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: Default::default(),
            source,
        },
        kind => Error::Parse {
            row,
            column: class_column.to_string(),
            message: format!("{kind:?}"),
        },
    }
}
