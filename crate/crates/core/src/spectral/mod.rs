//! Eigendecomposition, embedding-dimension selection and the Laplacian
//! eigenmap itself.
//!
//! For every variant the eigenvectors are sorted by ascending eigenvalue and
//! the embedding keeps columns `v_2 … v_{k+1}`, skipping the first one. The
//! random-walk Laplacian is not symmetric, so its eigenvectors are obtained
//! from `L_sym` as `D_v^{-1/2} u` and renormalized.

mod eigen;

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use ndarray::{s, Array1, Array2};

pub use eigen::{eig_symmetric, SpectralDecomposition, CONVERGENCE_TOL, MAX_SWEEPS};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::laplacian::{symmetric_laplacian, LaplacianMatrix, Variant};

/// Eigenvalues with magnitude below this count as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapCriterion {
    /// `λ_{k+2} - λ_{k+1}`
    Difference,
    /// `λ_{k+2} / λ_{k+1}`
    Ratio,
}

/// How the embedding dimension is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionRule {
    Fixed(usize),
    /// Number of (numerically) zero eigenvalues, i.e. connected components.
    /// Falls back to the difference eigengap when no eigenvalue is zero.
    Components,
    Eigengap(GapCriterion),
}

impl FromStr for DimensionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "components" => Ok(DimensionRule::Components),
            "gap-diff" => Ok(DimensionRule::Eigengap(GapCriterion::Difference)),
            "gap-ratio" => Ok(DimensionRule::Eigengap(GapCriterion::Ratio)),
            other => other.parse().map(DimensionRule::Fixed).map_err(|_| {
                Error::InvalidParameter(format!(
                    "unknown dimension rule {other:?} (expected components, gap-diff, gap-ratio or an integer)"
                ))
            }),
        }
    }
}

/// Count of eigenvalues with `|λ| < 1e-8`.
pub fn select_k_components(d: &SpectralDecomposition) -> usize {
    d.eigenvalues
        .iter()
        .filter(|l| l.abs() < ZERO_EIGENVALUE_TOL)
        .count()
}

/// The `k ∈ [1, n-2]` maximizing the chosen gap between `λ_{k+1}` and
/// `λ_{k+2}` (1-based). Ties go to the smallest `k`.
pub fn select_k_eigengap(d: &SpectralDecomposition, criterion: GapCriterion) -> Result<usize> {
    select_k_from_eigenvalues(d.eigenvalues.as_slice().expect("contiguous"), criterion)
}

pub fn select_k_from_eigenvalues(eigenvalues: &[f64], criterion: GapCriterion) -> Result<usize> {
    let n = eigenvalues.len();
    if n < 3 {
        return Err(Error::DegenerateSpectrum(format!(
            "eigengap selection needs at least 3 eigenvalues, got {n}"
        )));
    }
    let mut best: Option<(usize, f64)> = None;
    for k in 1..=n - 2 {
        // 1-based λ_{k+1}, λ_{k+2}
        let lo = eigenvalues[k];
        let hi = eigenvalues[k + 1];
        let gap = match criterion {
            GapCriterion::Difference => hi - lo,
            GapCriterion::Ratio => {
                if lo.abs() < ZERO_EIGENVALUE_TOL {
                    continue;
                }
                hi / lo
            }
        };
        if best.is_none_or(|(_, g)| gap > g) {
            best = Some((k, gap));
        }
    }
    best.map(|(k, _)| k).ok_or_else(|| {
        Error::DegenerateSpectrum("every candidate ratio has a zero denominator".into())
    })
}

/// Vertex coordinates produced by an eigenmap.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `n × k`, one row per vertex.
    pub coordinates: Array2<f64>,
    pub variant: Variant,
    pub k: usize,
    /// Eigenvalues paired with the columns.
    pub eigenvalues: Vec<f64>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.coordinates.nrows()
    }

    /// Writes one row per vertex, comma separated, no header, each value in
    /// its shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for row in self.coordinates.rows() {
            let line: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// A Laplacian together with the eigendecomposition that drives its eigenmap.
///
/// For the random walk the stored decomposition is that of `L_sym`; the
/// eigenvalues are shared and eigenvectors are lifted on demand.
#[derive(Debug, Clone)]
pub struct LaplacianSpectrum {
    pub laplacian: LaplacianMatrix,
    pub decomposition: SpectralDecomposition,
}

impl LaplacianSpectrum {
    pub fn compute(g: &Hypergraph, variant: Variant) -> Result<Self> {
        let laplacian = LaplacianMatrix::build(g, variant);
        let decomposition = match variant {
            Variant::RandomWalk => eig_symmetric(symmetric_laplacian(g).matrix.view())?,
            _ => eig_symmetric(laplacian.matrix.view())?,
        };
        Ok(LaplacianSpectrum {
            laplacian,
            decomposition,
        })
    }

    pub fn from_laplacian(laplacian: LaplacianMatrix) -> Result<Self> {
        let decomposition = eig_symmetric(laplacian.symmetric_form().view())?;
        Ok(LaplacianSpectrum {
            laplacian,
            decomposition,
        })
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.decomposition.eigenvalues
    }

    pub fn n(&self) -> usize {
        self.decomposition.n()
    }

    /// Resolves a rule to a concrete `k`.
    pub fn resolve_k(&self, rule: DimensionRule) -> Result<usize> {
        let max = self.n().saturating_sub(2);
        let k = match rule {
            DimensionRule::Fixed(k) => k,
            DimensionRule::Components => match select_k_components(&self.decomposition) {
                0 => select_k_eigengap(&self.decomposition, GapCriterion::Difference)?,
                c => c,
            },
            DimensionRule::Eigengap(c) => select_k_eigengap(&self.decomposition, c)?,
        };
        if k == 0 {
            return Err(Error::InvalidParameter(
                "embedding dimension must be at least 1".into(),
            ));
        }
        if k > max {
            return Err(Error::KTooLarge { k, max });
        }
        Ok(k)
    }

    /// Eigenvectors `v_2 … v_{k+1}` of the Laplacian as columns.
    pub fn embed(&self, rule: DimensionRule) -> Result<Embedding> {
        let k = self.resolve_k(rule)?;
        let n = self.n();
        let mut coordinates = self
            .decomposition
            .eigenvectors
            .slice(s![.., 1..=k])
            .to_owned();
        if self.laplacian.variant == Variant::RandomWalk {
            for mut col in coordinates.columns_mut() {
                let mut u = col.to_vec();
                self.laplacian.lift_eigenvector(&mut u);
                eigen::normalize(&mut u);
                eigen::fix_sign(&mut u);
                col.assign(&Array1::from(u));
            }
        }
        debug_assert_eq!(coordinates.dim(), (n, k));
        Ok(Embedding {
            coordinates,
            variant: self.laplacian.variant,
            k,
            eigenvalues: self.decomposition.eigenvalues.slice(s![1..=k]).to_vec(),
        })
    }
}

/// Laplacian eigenmap of `g` under `variant`.
pub fn eigenmap(g: &Hypergraph, variant: Variant, rule: DimensionRule) -> Result<Embedding> {
    LaplacianSpectrum::compute(g, variant)?.embed(rule)
}
