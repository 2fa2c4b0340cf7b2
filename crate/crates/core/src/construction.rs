//! Hypergraphs from point clouds: one hyperedge per sample holding the
//! sample and its nearest neighbors.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_KNN_HYPEREDGE: usize = 5;

/// Rows are samples; distances are Euclidean.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Array2<f64>,
}

impl PointCloud {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        if points.nrows() < 3 {
            return Err(Error::InvalidPointCloud(format!(
                "need at least 3 points, got {}",
                points.nrows()
            )));
        }
        if points.ncols() == 0 {
            return Err(Error::InvalidPointCloud(
                "points have no coordinates".into(),
            ));
        }
        if let Some(((r, c), _)) = points.indexed_iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::InvalidPointCloud(format!(
                "non-finite value at row {r}, column {c}"
            )));
        }
        Ok(PointCloud { points })
    }

    pub fn points(&self) -> ArrayView2<'_, f64> {
        self.points.view()
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EdgeWeighting {
    #[default]
    Unit,
    /// `exp(-m²/σ²)` with `m` the mean pairwise distance inside the hyperedge.
    Gaussian,
}

impl FromStr for EdgeWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(EdgeWeighting::Unit),
            "gaussian" => Ok(EdgeWeighting::Gaussian),
            other => Err(Error::InvalidParameter(format!(
                "unknown edge weighting {other:?} (expected unit or gaussian)"
            ))),
        }
    }
}

impl fmt::Display for EdgeWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeWeighting::Unit => "unit",
            EdgeWeighting::Gaussian => "gaussian",
        })
    }
}

/// A positive bandwidth, or the median heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bandwidth {
    #[default]
    Auto,
    Fixed(f64),
}

impl FromStr for Bandwidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Bandwidth::Auto);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(Bandwidth::Fixed(x)),
            _ => Err(Error::InvalidParameter(format!(
                "bandwidth must be a positive number or \"auto\", got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bandwidth::Auto => f.write_str("auto"),
            Bandwidth::Fixed(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Bandwidth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bandwidth::Auto => s.serialize_str("auto"),
            Bandwidth::Fixed(x) => s.serialize_f64(*x),
        }
    }
}

pub fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Symmetric `n × n` Euclidean distance matrix with zero diagonal.
pub fn pairwise_distances(pc: &PointCloud) -> Array2<f64> {
    distance_matrix(pc.points())
}

pub(crate) fn distance_matrix(points: ArrayView2<'_, f64>) -> Array2<f64> {
    let n = points.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let x = euclidean(points.row(i), points.row(j));
            d[[i, j]] = x;
            d[[j, i]] = x;
        }
    }
    d
}

/// Median of a non-empty slice; even lengths average the middle pair.
pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Indices of the `k` nearest other points of `anchor`, nearest first, ties
/// going to the lower index.
fn nearest(distances: &Array2<f64>, anchor: usize, k: usize) -> Vec<usize> {
    let mut others: Vec<usize> = (0..distances.nrows()).filter(|&j| j != anchor).collect();
    others.sort_by(|&a, &b| {
        distances[[anchor, a]]
            .total_cmp(&distances[[anchor, b]])
            .then(a.cmp(&b))
    });
    others.truncate(k);
    others
}

/// One hyperedge `{v} ∪ kNN(v)` per vertex. Hyperedges with identical
/// member sets coming from different anchors are kept separately, so the
/// result always has `n` hyperedges.
pub fn knn_hyperedges(
    pc: &PointCloud,
    k_h: usize,
    weighting: EdgeWeighting,
    sigma: Bandwidth,
) -> Result<Hypergraph> {
    let n = pc.n();
    if k_h == 0 || k_h > n - 1 {
        return Err(Error::KTooLarge { k: k_h, max: n - 1 });
    }
    let distances = pairwise_distances(pc);
    let edges: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut e = vec![v];
            e.extend(nearest(&distances, v, k_h));
            e
        })
        .collect();

    let weights = match weighting {
        EdgeWeighting::Unit => vec![1.0; n],
        EdgeWeighting::Gaussian => {
            let spreads: Vec<f64> = edges.iter().map(|e| mean_pairwise(&distances, e)).collect();
            let sigma = match sigma {
                Bandwidth::Fixed(s) => s,
                Bandwidth::Auto => median(&mut spreads.clone()),
            };
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "hyperedge weight bandwidth must be positive, got {sigma}"
                )));
            }
            // far outlying hyperedges would underflow to a zero weight
            spreads
                .iter()
                .map(|m| (-(m * m) / (sigma * sigma)).exp().max(f64::MIN_POSITIVE))
                .collect()
        }
    };
    Hypergraph::new(n, edges, weights)
}

fn mean_pairwise(distances: &Array2<f64>, members: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut pairs = 0usize;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            total += distances[[a, b]];
            pairs += 1;
        }
    }
    total / pairs as f64
}
