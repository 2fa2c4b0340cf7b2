//! Dataset ingestion, stratified splitting and the transductive
//! embed-then-classify experiment with its reports.

mod dataset;
mod experiment;

pub use dataset::{
    flatten_image, load_csv, read_csv, stratified_split, LabeledDataset, Normalize, Split,
    SplitOrigin, DEFAULT_SEED,
};
pub use experiment::{
    build_hypergraph, run_experiment, transductive_embedding, ClassifierSpec, ConstructionParams,
    ExperimentReport, Grid, Hyperparameters, ReportMetadata, ReportRow,
};
