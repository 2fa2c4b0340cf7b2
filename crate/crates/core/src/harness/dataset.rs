use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// Samples with class labels and an optional train/test assignment.
///
/// Labels are indices into `label_names`, which is sorted, so label order
/// does not depend on row order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub samples: Array2<f64>,
    pub labels: Vec<usize>,
    pub label_names: Vec<String>,
    split: Option<Vec<Split>>,
    split_origin: Option<SplitOrigin>,
}

/// Parameters that reproduce a stratified split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitOrigin {
    pub seed: u64,
    pub train_per_class: usize,
}

impl LabeledDataset {
    pub fn new<S: AsRef<str>>(samples: Array2<f64>, labels: &[S]) -> Result<Self> {
        if samples.nrows() != labels.len() {
            return Err(Error::LengthMismatch {
                left: samples.nrows(),
                right: labels.len(),
            });
        }
        let names: BTreeSet<&str> = labels.iter().map(AsRef::as_ref).collect();
        let label_names: Vec<String> = names.into_iter().map(str::to_owned).collect();
        let labels = labels
            .iter()
            .map(|l| {
                label_names
                    .binary_search_by(|n| n.as_str().cmp(l.as_ref()))
                    .expect("label present")
            })
            .collect();
        Ok(LabeledDataset {
            samples,
            labels,
            label_names,
            split: None,
            split_origin: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn split(&self) -> Option<&[Split]> {
        self.split.as_deref()
    }

    pub fn split_origin(&self) -> Option<SplitOrigin> {
        self.split_origin
    }

    /// Assigns an explicit split; any recorded split origin is cleared.
    pub fn with_split(mut self, split: Vec<Split>) -> Result<Self> {
        if split.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: split.len(),
                right: self.len(),
            });
        }
        self.split = Some(split);
        self.split_origin = None;
        Ok(self)
    }

    fn indices(&self, which: Split) -> Result<Vec<usize>> {
        let split = self.split.as_ref().ok_or(Error::MissingSplit)?;
        Ok((0..self.len()).filter(|&i| split[i] == which).collect())
    }

    pub fn train_indices(&self) -> Result<Vec<usize>> {
        self.indices(Split::Train)
    }

    pub fn test_indices(&self) -> Result<Vec<usize>> {
        self.indices(Split::Test)
    }
}

/// Row-major flattening of an image.
pub fn flatten_image(img: ArrayView2<'_, f64>) -> Array1<f64> {
    img.iter().copied().collect()
}

/// Reads a header-less CSV whose first field is the class label and whose
/// remaining fields are the sample's numeric features.
pub fn load_csv(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let file = std::fs::File::open(path)?;
    read_csv(file)
}

pub fn read_csv<R: Read>(reader: R) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut labels: Vec<String> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut width: Option<usize> = None;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::MalformedRow {
                line,
                reason: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut fields = record.iter();
        let label = fields.next().unwrap_or_default();
        if label.is_empty() {
            return Err(Error::MalformedRow {
                line,
                reason: "missing label".into(),
            });
        }
        let start = values.len();
        for (col, field) in fields.enumerate() {
            let x: f64 = field.parse().map_err(|_| Error::MalformedRow {
                line,
                reason: format!("field {} is not a number: {field:?}", col + 2),
            })?;
            if !x.is_finite() {
                return Err(Error::MalformedRow {
                    line,
                    reason: format!("field {} is not finite", col + 2),
                });
            }
            values.push(x);
        }
        let found = values.len() - start;
        if found == 0 {
            return Err(Error::MalformedRow {
                line,
                reason: "no numeric fields".into(),
            });
        }
        match width {
            None => width = Some(found),
            Some(expected) if expected != found => {
                return Err(Error::InconsistentWidth {
                    line,
                    expected,
                    found,
                })
            }
            Some(_) => {}
        }
        labels.push(label.to_owned());
    }
    let Some(width) = width else {
        return Err(Error::EmptyFile);
    };
    let samples =
        Array2::from_shape_vec((labels.len(), width), values).expect("row widths checked");
    LabeledDataset::new(samples, &labels)
}

/// Per class, marks `train_per_class` samples (chosen by a seeded shuffle)
/// as training data and the rest as test data. Classes are visited in label
/// order with one generator, so the split depends only on the seed, the
/// counts and the row order within each class.
pub fn stratified_split(
    ds: LabeledDataset,
    train_per_class: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); ds.n_classes()];
    for (i, &l) in ds.labels.iter().enumerate() {
        by_class[l].push(i);
    }
    for (label, members) in ds.label_names.iter().zip(&by_class) {
        if members.len() < train_per_class + 1 {
            return Err(Error::InsufficientClassSize {
                label: label.clone(),
                available: members.len(),
                required: train_per_class + 1,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = vec![Split::Test; ds.len()];
    for mut members in by_class {
        members.shuffle(&mut rng);
        for &i in &members[..train_per_class] {
            split[i] = Split::Train;
        }
    }
    let mut ds = ds.with_split(split)?;
    ds.split_origin = Some(SplitOrigin {
        seed,
        train_per_class,
    });
    Ok(ds)
}

/// Feature preprocessing applied before hypergraph construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalize {
    #[default]
    None,
    /// Each sample scaled to unit Euclidean norm.
    Unit,
    /// Each feature standardized to zero mean and unit variance.
    Zscore,
}

impl FromStr for Normalize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalize::None),
            "unit" => Ok(Normalize::Unit),
            "zscore" => Ok(Normalize::Zscore),
            other => Err(Error::InvalidParameter(format!(
                "unknown normalization {other:?} (expected none, unit or zscore)"
            ))),
        }
    }
}

impl fmt::Display for Normalize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalize::None => "none",
            Normalize::Unit => "unit",
            Normalize::Zscore => "zscore",
        })
    }
}

impl Normalize {
    pub fn apply(self, samples: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut out = samples.to_owned();
        match self {
            Normalize::None => {}
            Normalize::Unit => {
                for mut row in out.rows_mut() {
                    let norm = row.dot(&row).sqrt();
                    if norm > 0.0 {
                        row.mapv_inplace(|x| x / norm);
                    }
                }
            }
            Normalize::Zscore => {
                let n = out.nrows() as f64;
                for mut col in out.axis_iter_mut(Axis(1)) {
                    let mean = col.sum() / n;
                    let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
                    let sd = var.sqrt();
                    col.mapv_inplace(|x| if sd > 0.0 { (x - mean) / sd } else { 0.0 });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn flatten_row_major() {
        assert_eq!(
            flatten_image(array![[1.0, 2.0], [3.0, 4.0]].view()).to_vec(),
            vec![1.0, 2.0, 3.0, 4.0]
        );
        let row = array![[1.0, 2.0, 3.0, 4.0, 5.0]];
        assert_eq!(flatten_image(row.view()).to_vec(), row.row(0).to_vec());
        let face = Array2::from_shape_fn((32, 32), |(r, c)| (r * 1000 + c) as f64);
        let v = flatten_image(face.view());
        assert_eq!(v.len(), 1024);
        for r in 0..32 {
            for c in 0..32 {
                assert_eq!(v[32 * r + c], face[[r, c]]);
            }
        }
    }

    #[test]
    fn csv_basic() {
        let ds = read_csv("a,0,1\nb,2,3".as_bytes()).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.label_names, vec!["a", "b"]);
        assert_eq!(ds.labels, vec![0, 1]);
        assert_eq!(ds.samples, array![[0.0, 1.0], [2.0, 3.0]]);
    }

    #[test]
    fn csv_label_order_is_sorted() {
        let ds = read_csv("z, 1\na, 2\nz, 3\n".as_bytes()).unwrap();
        assert_eq!(ds.label_names, vec!["a", "z"]);
        assert_eq!(ds.labels, vec![1, 0, 1]);
    }

    #[test]
    fn csv_errors() {
        assert_eq!(
            read_csv("a,0,1\nb,2,3\nc,4,5,6\n".as_bytes()),
            Err(Error::InconsistentWidth {
                line: 3,
                expected: 2,
                found: 3
            })
        );
        assert!(matches!(
            read_csv("a,0,1\nb,2,x\n".as_bytes()),
            Err(Error::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            read_csv("a\n".as_bytes()),
            Err(Error::MalformedRow { line: 1, .. })
        ));
        assert!(matches!(
            read_csv(",1,2\n".as_bytes()),
            Err(Error::MalformedRow { line: 1, .. })
        ));
        assert!(matches!(
            read_csv("a,1,nan\n".as_bytes()),
            Err(Error::MalformedRow { line: 1, .. })
        ));
        assert_eq!(read_csv("".as_bytes()), Err(Error::EmptyFile));
        assert!(matches!(load_csv("/nonexistent/x.csv"), Err(Error::Io(_))));
    }

    fn balanced(classes: usize, per_class: usize) -> LabeledDataset {
        let n = classes * per_class;
        let labels: Vec<String> = (0..n).map(|i| format!("p{:02}", i % classes)).collect();
        let samples = Array2::from_shape_fn((n, 2), |(i, j)| (i * 2 + j) as f64);
        LabeledDataset::new(samples, &labels).unwrap()
    }

    #[test]
    fn split_sizes() {
        let ds = stratified_split(balanced(15, 11), 8, DEFAULT_SEED).unwrap();
        assert_eq!(ds.train_indices().unwrap().len(), 120);
        assert_eq!(ds.test_indices().unwrap().len(), 45);
        for c in 0..15 {
            let train = ds
                .train_indices()
                .unwrap()
                .into_iter()
                .filter(|&i| ds.labels[i] == c)
                .count();
            assert_eq!(train, 8);
        }
        let ds = stratified_split(balanced(2, 2), 1, 7).unwrap();
        assert_eq!(ds.train_indices().unwrap().len(), 2);
        assert_eq!(ds.test_indices().unwrap().len(), 2);
    }

    #[test]
    fn split_deterministic_and_seed_sensitive() {
        let a = stratified_split(balanced(15, 11), 8, 42).unwrap();
        let b = stratified_split(balanced(15, 11), 8, 42).unwrap();
        assert_eq!(a.split(), b.split());
        assert_eq!(
            a.split_origin(),
            Some(SplitOrigin {
                seed: 42,
                train_per_class: 8
            })
        );
        let c = stratified_split(balanced(15, 11), 8, 43).unwrap();
        assert_ne!(a.split(), c.split());
    }

    #[test]
    fn split_insufficient() {
        assert!(matches!(
            stratified_split(balanced(3, 4), 4, 1),
            Err(Error::InsufficientClassSize {
                available: 4,
                required: 5,
                ..
            })
        ));
        assert_eq!(balanced(2, 2).train_indices(), Err(Error::MissingSplit));
    }

    #[test]
    fn normalization() {
        let x = array![[3.0, 4.0], [0.0, 0.0], [1.0, 0.0]];
        assert_eq!(Normalize::None.apply(x.view()), x);
        let u = Normalize::Unit.apply(x.view());
        assert_eq!(u, array![[0.6, 0.8], [0.0, 0.0], [1.0, 0.0]]);
        let z = Normalize::Zscore.apply(array![[1.0, 5.0], [3.0, 5.0]].view());
        assert_eq!(z, array![[-1.0, 0.0], [1.0, 0.0]]);
        assert_eq!("zscore".parse::<Normalize>().unwrap(), Normalize::Zscore);
        assert!("l2".parse::<Normalize>().is_err());
    }
}
