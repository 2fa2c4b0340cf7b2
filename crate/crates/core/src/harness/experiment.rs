use std::collections::BTreeMap;
use std::fmt::Write as _;

use ndarray::{ArrayView2, Axis};
use serde::Serialize;

use crate::classify::{self, accuracy, knn_predict, krr_fit, LabeledPoints};
use crate::construction::{
    knn_hyperedges, Bandwidth, EdgeWeighting, PointCloud, DEFAULT_KNN_HYPEREDGE,
};
use crate::error::{Error, Result};
use crate::harness::dataset::{LabeledDataset, Normalize, SplitOrigin};
use crate::hypergraph::Hypergraph;
use crate::laplacian::Variant;
use crate::spectral::{DimensionRule, Embedding, LaplacianSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstructionParams {
    pub knn_hyperedge: usize,
    pub weighting: EdgeWeighting,
    pub sigma: Bandwidth,
    pub normalize: Normalize,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams {
            knn_hyperedge: DEFAULT_KNN_HYPEREDGE,
            weighting: EdgeWeighting::Unit,
            sigma: Bandwidth::Auto,
            normalize: Normalize::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    Knn { k: usize },
    Krr { ridge: f64, bandwidth: Bandwidth },
}

impl ClassifierSpec {
    pub fn knn_default() -> Self {
        ClassifierSpec::Knn {
            k: classify::DEFAULT_KNN_K,
        }
    }

    pub fn krr_default() -> Self {
        ClassifierSpec::Krr {
            ridge: classify::DEFAULT_RIDGE,
            bandwidth: Bandwidth::Auto,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::Krr { .. } => "krr",
        }
    }

    pub fn method_name(&self) -> &'static str {
        match self {
            ClassifierSpec::Knn { .. } => "k nearest neighbor method",
            ClassifierSpec::Krr { .. } => "kernel ridge regression method",
        }
    }
}

/// Configurations to evaluate. Cells are enumerated classifier-major, then
/// by variant, then by dimension, which groups each classifier's rows into
/// one table.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub variants: Vec<Variant>,
    pub dims: Vec<usize>,
    pub classifiers: Vec<ClassifierSpec>,
}

impl Grid {
    pub fn cells(&self) -> impl Iterator<Item = (ClassifierSpec, Variant, usize)> + '_ {
        self.classifiers.iter().flat_map(move |&c| {
            self.variants
                .iter()
                .flat_map(move |&v| self.dims.iter().map(move |&d| (c, v, d)))
        })
    }

    pub fn len(&self) -> usize {
        self.variants.len() * self.dims.len() * self.classifiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperparameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knn_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ridge: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<Bandwidth>,
    /// The bandwidth actually used after resolving `auto`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub method: String,
    pub laplacian: Variant,
    pub dim: usize,
    pub classifier: &'static str,
    pub hyperparameters: Hyperparameters,
    /// Fraction correct, rounded to 4 decimals.
    pub accuracy: Option<f64>,
    pub correct: Option<usize>,
    pub total: Option<usize>,
    pub error: Option<String>,
    /// Predicted labels for the test rows, in test-index order.
    #[serde(skip)]
    pub predictions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub n_samples: usize,
    pub n_features: usize,
    pub n_classes: usize,
    pub n_train: usize,
    pub n_test: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitOrigin>,
    pub construction: ConstructionParams,
    pub n_hyperedges: Option<usize>,
    /// Leading eigenvalues per Laplacian variant (random walk and symmetric
    /// share a spectrum).
    pub spectra: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

/// Builds the hypergraph over all samples. Only features are consulted.
pub fn build_hypergraph(
    samples: ArrayView2<'_, f64>,
    params: &ConstructionParams,
) -> Result<Hypergraph> {
    let points = params.normalize.apply(samples);
    let cloud = PointCloud::new(points)?;
    knn_hyperedges(&cloud, params.knn_hyperedge, params.weighting, params.sigma)
}

/// Embeds every sample, train and test alike, in one decomposition.
pub fn transductive_embedding(
    samples: ArrayView2<'_, f64>,
    params: &ConstructionParams,
    variant: Variant,
    rule: DimensionRule,
) -> Result<Embedding> {
    let g = build_hypergraph(samples, params)?;
    LaplacianSpectrum::compute(&g, variant)?.embed(rule)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn evaluate(
    embedding: &Embedding,
    ds: &LabeledDataset,
    train: &[usize],
    test: &[usize],
    spec: ClassifierSpec,
    hp: &mut Hyperparameters,
) -> Result<(Vec<usize>, usize)> {
    let train_points = LabeledPoints::new(
        embedding.coordinates.select(Axis(0), train),
        train.iter().map(|&i| ds.labels[i]).collect(),
        ds.n_classes(),
    )?;
    let test_features = embedding.coordinates.select(Axis(0), test);
    let predictions: Vec<usize> = match spec {
        ClassifierSpec::Knn { k } => test_features
            .rows()
            .into_iter()
            .map(|q| knn_predict(&train_points, q, k))
            .collect::<Result<_>>()?,
        ClassifierSpec::Krr { ridge, bandwidth } => {
            let model = krr_fit(&train_points, bandwidth, ridge)?;
            hp.bandwidth_value = Some(model.bandwidth);
            test_features
                .rows()
                .into_iter()
                .map(|q| model.predict(q))
                .collect::<Result<_>>()?
        }
    };
    // test labels are read only from here on
    let truth: Vec<usize> = test.iter().map(|&i| ds.labels[i]).collect();
    let correct = predictions
        .iter()
        .zip(&truth)
        .filter(|(p, t)| p == t)
        .count();
    accuracy(&predictions, &truth)?;
    Ok((predictions, correct))
}

/// Runs every grid cell: one hypergraph over all samples, an eigenmap per
/// variant and dimension, a classifier fitted on the embedded training rows
/// and scored on the embedded test rows. A failing cell yields a row with
/// `error` set; the grid always completes.
pub fn run_experiment(
    ds: &LabeledDataset,
    grid: &Grid,
    params: &ConstructionParams,
) -> Result<ExperimentReport> {
    let train = ds.train_indices()?;
    let test = ds.test_indices()?;
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidParameter(
            "split has an empty train or test side".into(),
        ));
    }

    let graph = build_hypergraph(ds.samples.view(), params);
    let mut spectra: BTreeMap<Variant, Result<LaplacianSpectrum>> = BTreeMap::new();
    for &v in &grid.variants {
        spectra.entry(v).or_insert_with(|| match &graph {
            Ok(g) => LaplacianSpectrum::compute(g, v),
            Err(e) => Err(e.clone()),
        });
    }

    let leading = grid.dims.iter().max().map_or(0, |d| d + 2);
    let spectra_meta = spectra
        .iter()
        .filter_map(|(v, s)| s.as_ref().ok().map(|s| (v, s)))
        .map(|(v, s)| {
            let ev = s.eigenvalues();
            (
                v.tag().to_owned(),
                ev.iter().take(leading).copied().collect(),
            )
        })
        .collect();

    let mut rows = Vec::with_capacity(grid.len());
    for (spec, variant, dim) in grid.cells() {
        let mut hp = match spec {
            ClassifierSpec::Knn { k } => Hyperparameters {
                knn_k: Some(k),
                ridge: None,
                bandwidth: None,
                bandwidth_value: None,
            },
            ClassifierSpec::Krr { ridge, bandwidth } => Hyperparameters {
                knn_k: None,
                ridge: Some(ridge),
                bandwidth: Some(bandwidth),
                bandwidth_value: None,
            },
        };
        let outcome = spectra[&variant]
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|s| s.embed(DimensionRule::Fixed(dim)))
            .and_then(|e| evaluate(&e, ds, &train, &test, spec, &mut hp));
        let method = format!(
            "{} (d={dim}) + {}",
            variant.display_name(),
            spec.method_name()
        );
        let row = match outcome {
            Ok((predictions, correct)) => ReportRow {
                method,
                laplacian: variant,
                dim,
                classifier: spec.tag(),
                hyperparameters: hp,
                accuracy: Some(round4(correct as f64 / test.len() as f64)),
                correct: Some(correct),
                total: Some(test.len()),
                error: None,
                predictions,
            },
            Err(e) => ReportRow {
                method,
                laplacian: variant,
                dim,
                classifier: spec.tag(),
                hyperparameters: hp,
                accuracy: None,
                correct: None,
                total: None,
                error: Some(e.to_string()),
                predictions: Vec::new(),
            },
        };
        rows.push(row);
    }

    Ok(ExperimentReport {
        metadata: ReportMetadata {
            n_samples: ds.len(),
            n_features: ds.dim(),
            n_classes: ds.n_classes(),
            n_train: train.len(),
            n_test: test.len(),
            split: ds.split_origin(),
            construction: *params,
            n_hyperedges: graph.as_ref().ok().map(Hypergraph::n_hyperedges),
            spectra: spectra_meta,
        },
        rows,
    })
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn error_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// One aligned Markdown table per classifier, in row order.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let mut groups: Vec<(&str, Vec<&ReportRow>)> = Vec::new();
        for row in &self.rows {
            match groups.iter_mut().find(|(c, _)| *c == row.classifier) {
                Some((_, rows)) => rows.push(row),
                None => groups.push((row.classifier, vec![row])),
            }
        }
        for (i, (_, rows)) in groups.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let cells: Vec<(String, String)> = rows
                .iter()
                .map(|r| {
                    let value = match (r.accuracy, &r.error) {
                        (Some(q), _) => format!("{q:.4}"),
                        (None, Some(e)) => format!("error: {e}"),
                        (None, None) => "n/a".into(),
                    };
                    (r.method.clone(), value)
                })
                .collect();
            let w0 = cells
                .iter()
                .map(|c| c.0.len())
                .max()
                .unwrap_or(0)
                .max("Method".len());
            let w1 = cells
                .iter()
                .map(|c| c.1.len())
                .max()
                .unwrap_or(0)
                .max("Accuracy".len());
            let _ = writeln!(out, "| {:<w0$} | {:<w1$} |", "Method", "Accuracy");
            let _ = writeln!(out, "| {} | {} |", "-".repeat(w0), "-".repeat(w1));
            for (m, v) in cells {
                let _ = writeln!(out, "| {m:<w0$} | {v:<w1$} |");
            }
        }
        out
    }
}
