//! Classifiers on embedded coordinates.
//!
//! Labels are class indices `0..n_classes`; the index order is the label
//! order used for every tie-break.

use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::construction::{euclidean, median, Bandwidth};
use crate::error::{Error, Result};

pub const DEFAULT_KNN_K: usize = 1;
pub const DEFAULT_RIDGE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoints {
    pub features: Array2<f64>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl LabeledPoints {
    pub fn new(features: Array2<f64>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        if features.nrows() == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        if features.nrows() != labels.len() {
            return Err(Error::LengthMismatch {
                left: features.nrows(),
                right: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(Error::InvalidParameter(format!(
                "label {bad} outside the {n_classes}-class label set"
            )));
        }
        Ok(LabeledPoints {
            features,
            labels,
            n_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    fn check_query(&self, query: ArrayView1<'_, f64>) -> Result<()> {
        if query.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: query.len(),
            });
        }
        Ok(())
    }
}

/// Majority vote among the `k` nearest training rows.
///
/// Neighbors are ranked by distance, then label, then row index, so the
/// prediction depends only on the multiset of (row, label) pairs and not on
/// row order. A tied vote goes to the label whose nearest representative is
/// closest, then to the lower label.
pub fn knn_predict(train: &LabeledPoints, query: ArrayView1<'_, f64>, k: usize) -> Result<usize> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(Error::KTooLarge {
            k,
            max: train.len(),
        });
    }
    train.check_query(query)?;
    let mut ranked: Vec<(f64, usize, usize)> = train
        .features
        .rows()
        .into_iter()
        .zip(&train.labels)
        .enumerate()
        .map(|(i, (row, &label))| (euclidean(row, query), label, i))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut votes = vec![0usize; train.n_classes];
    let mut nearest = vec![f64::INFINITY; train.n_classes];
    for &(d, label, _) in &ranked[..k] {
        votes[label] += 1;
        nearest[label] = nearest[label].min(d);
    }
    let top = *votes.iter().max().expect("at least one class");
    let winner = (0..train.n_classes)
        .filter(|&l| votes[l] == top)
        .min_by(|&a, &b| nearest[a].total_cmp(&nearest[b]).then(a.cmp(&b)))
        .expect("at least one voted label");
    Ok(winner)
}

/// Multiclass kernel ridge regression with a Gaussian kernel and one-hot
/// targets.
#[derive(Debug, Clone, PartialEq)]
pub struct KrrModel {
    pub train_features: Array2<f64>,
    /// `m × C`, solving `(K + ridge·I) α = Y`.
    pub dual_coefficients: Array2<f64>,
    pub bandwidth: f64,
    pub ridge: f64,
    pub n_classes: usize,
}

pub fn gaussian_kernel(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>, bandwidth: f64) -> f64 {
    let d = euclidean(a, b);
    (-(d * d) / (2.0 * bandwidth * bandwidth)).exp()
}

/// Median of the nonzero pairwise distances between rows; 1 if there are none.
pub fn median_heuristic(features: ArrayView2<'_, f64>) -> f64 {
    let m = features.nrows();
    let mut dists = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            let d = euclidean(features.row(i), features.row(j));
            if d > 0.0 {
                dists.push(d);
            }
        }
    }
    if dists.is_empty() {
        1.0
    } else {
        median(&mut dists)
    }
}

pub fn kernel_matrix(features: ArrayView2<'_, f64>, bandwidth: f64) -> Array2<f64> {
    let m = features.nrows();
    let mut k = Array2::zeros((m, m));
    for i in 0..m {
        k[[i, i]] = 1.0;
        for j in (i + 1)..m {
            let x = gaussian_kernel(features.row(i), features.row(j), bandwidth);
            k[[i, j]] = x;
            k[[j, i]] = x;
        }
    }
    k
}

pub fn one_hot(labels: &[usize], n_classes: usize) -> Array2<f64> {
    let mut y = Array2::zeros((labels.len(), n_classes));
    for (i, &l) in labels.iter().enumerate() {
        y[[i, l]] = 1.0;
    }
    y
}

pub fn krr_fit(train: &LabeledPoints, bandwidth: Bandwidth, ridge: f64) -> Result<KrrModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if !(ridge.is_finite() && ridge > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ridge must be positive, got {ridge}"
        )));
    }
    let sigma = match bandwidth {
        Bandwidth::Fixed(s) if s.is_finite() && s > 0.0 => s,
        Bandwidth::Fixed(s) => {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be positive, got {s}"
            )))
        }
        Bandwidth::Auto => median_heuristic(train.features.view()),
    };
    let mut system = kernel_matrix(train.features.view(), sigma);
    for i in 0..train.len() {
        system[[i, i]] += ridge;
    }
    let y = one_hot(&train.labels, train.n_classes);
    let dual_coefficients = cholesky_solve(system, y)?;
    Ok(KrrModel {
        train_features: train.features.clone(),
        dual_coefficients,
        bandwidth: sigma,
        ridge,
        n_classes: train.n_classes,
    })
}

impl KrrModel {
    /// Per-class scores `k_q^T α`.
    pub fn scores(&self, query: ArrayView1<'_, f64>) -> Result<Vec<f64>> {
        if query.len() != self.train_features.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.train_features.ncols(),
                found: query.len(),
            });
        }
        let kq: ndarray::Array1<f64> = self
            .train_features
            .rows()
            .into_iter()
            .map(|row| gaussian_kernel(row, query, self.bandwidth))
            .collect();
        Ok(self.dual_coefficients.t().dot(&kq).to_vec())
    }

    pub fn predict(&self, query: ArrayView1<'_, f64>) -> Result<usize> {
        let scores = self.scores(query)?;
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = c;
            }
        }
        Ok(best)
    }
}

pub fn krr_predict(model: &KrrModel, query: ArrayView1<'_, f64>) -> Result<usize> {
    model.predict(query)
}

/// Solves `A X = B` for symmetric positive definite `A`.
fn cholesky_solve(mut a: Array2<f64>, mut b: Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    // in-place lower factor
    for j in 0..n {
        let mut diag = a[[j, j]];
        for k in 0..j {
            diag -= a[[j, k]] * a[[j, k]];
        }
        if !(diag > 0.0 && diag.is_finite()) {
            return Err(Error::SingularSystem);
        }
        let ljj = diag.sqrt();
        a[[j, j]] = ljj;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= a[[i, k]] * a[[j, k]];
            }
            a[[i, j]] = s / ljj;
        }
    }
    for mut col in b.columns_mut() {
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= a[[i, k]] * col[k];
            }
            col[i] = s / a[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in (i + 1)..n {
                s -= a[[k, i]] * col[k];
            }
            col[i] = s / a[[i, i]];
        }
    }
    Ok(b)
}

/// Fraction of positions where the prediction equals the truth.
pub fn accuracy<T: PartialEq>(predictions: &[T], truth: &[T]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidParameter(
            "accuracy of an empty prediction set".into(),
        ));
    }
    let correct = predictions
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    Ok(correct as f64 / truth.len() as f64)
}
