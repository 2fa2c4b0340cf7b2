//! The three hypergraph Laplacians.
//!
//! All variants share the vertex-vertex operator `A = H W D_e^{-1} H^T`, with
//! `A[u][v] = Σ_{e ∋ u,v} w(e) / |e|`. The degree scalings are applied
//! entrywise; no diagonal matrix is ever inverted explicitly.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `L = D_v - H W D_e^{-1} H^T`
    Combinatorial,
    /// `L_sym = I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}`
    Symmetric,
    /// `L_rw = I - D_v^{-1} H W D_e^{-1} H^T`
    RandomWalk,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::Combinatorial,
        Variant::RandomWalk,
        Variant::Symmetric,
    ];

    /// Short CLI tag.
    pub fn tag(self) -> &'static str {
        match self {
            Variant::Combinatorial => "comb",
            Variant::Symmetric => "sym",
            Variant::RandomWalk => "rw",
        }
    }

    /// Human-readable method name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Variant::Combinatorial => "Combinatorial Laplacian Eigenmaps",
            Variant::Symmetric => "Symmetric normalized Laplacian Eigenmaps",
            Variant::RandomWalk => "Random walk Laplacian Eigenmaps",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "comb" | "combinatorial" | "unnormalized" => Ok(Variant::Combinatorial),
            "sym" | "symmetric" => Ok(Variant::Symmetric),
            "rw" | "random_walk" | "random-walk" => Ok(Variant::RandomWalk),
            other => Err(Error::InvalidParameter(format!(
                "unknown Laplacian variant {other:?} (expected comb, rw or sym)"
            ))),
        }
    }
}

/// A dense Laplacian tagged with its variant. The vertex degrees are kept so
/// the random-walk variant can be mapped to and from the symmetric one.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub variant: Variant,
    pub matrix: Array2<f64>,
    pub vertex_degrees: Array1<f64>,
}

/// `H W D_e^{-1} H^T`, exactly symmetric.
pub fn hyperedge_operator(g: &Hypergraph) -> Array2<f64> {
    let n = g.n_vertices();
    let mut a = Array2::zeros((n, n));
    for (set, &w) in g.hyperedges().iter().zip(g.weights()) {
        let share = w / set.len() as f64;
        for &u in set {
            for &v in set {
                a[[u, v]] += share;
            }
        }
    }
    a
}

pub fn combinatorial_laplacian(g: &Hypergraph) -> LaplacianMatrix {
    let degrees = g.degrees().vertex_degrees;
    let mut m = hyperedge_operator(g);
    m.mapv_inplace(|x| -x);
    for v in 0..g.n_vertices() {
        m[[v, v]] += degrees[v];
    }
    LaplacianMatrix {
        variant: Variant::Combinatorial,
        matrix: m,
        vertex_degrees: degrees,
    }
}

pub fn symmetric_laplacian(g: &Hypergraph) -> LaplacianMatrix {
    let degrees = g.degrees().vertex_degrees;
    let inv_sqrt = degrees.mapv(|d| 1.0 / d.sqrt());
    let mut m = hyperedge_operator(g);
    for ((u, v), x) in m.indexed_iter_mut() {
        // the product of scalings is commutative, keeping m exactly symmetric
        *x = -*x * (inv_sqrt[u] * inv_sqrt[v]);
    }
    for v in 0..g.n_vertices() {
        m[[v, v]] += 1.0;
    }
    LaplacianMatrix {
        variant: Variant::Symmetric,
        matrix: m,
        vertex_degrees: degrees,
    }
}

pub fn random_walk_laplacian(g: &Hypergraph) -> LaplacianMatrix {
    let degrees = g.degrees().vertex_degrees;
    let mut m = hyperedge_operator(g);
    for ((u, _), x) in m.indexed_iter_mut() {
        *x = -*x / degrees[u];
    }
    for v in 0..g.n_vertices() {
        m[[v, v]] += 1.0;
    }
    LaplacianMatrix {
        variant: Variant::RandomWalk,
        matrix: m,
        vertex_degrees: degrees,
    }
}

/// The random-walk transition matrix `P = D_v^{-1} H W D_e^{-1} H^T`.
pub fn transition_matrix(g: &Hypergraph) -> Array2<f64> {
    let degrees = g.degrees().vertex_degrees;
    let mut p = hyperedge_operator(g);
    for ((u, _), x) in p.indexed_iter_mut() {
        *x /= degrees[u];
    }
    p
}

impl LaplacianMatrix {
    pub fn build(g: &Hypergraph, variant: Variant) -> LaplacianMatrix {
        match variant {
            Variant::Combinatorial => combinatorial_laplacian(g),
            Variant::Symmetric => symmetric_laplacian(g),
            Variant::RandomWalk => random_walk_laplacian(g),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest entrywise asymmetry `max |M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        max_asymmetry(&self.matrix)
    }

    /// The symmetric matrix whose eigendecomposition determines this
    /// Laplacian's spectrum: the matrix itself for the symmetric variants,
    /// and `L_sym = D_v^{1/2} L_rw D_v^{-1/2}` for the random walk.
    pub fn symmetric_form(&self) -> Array2<f64> {
        match self.variant {
            Variant::Combinatorial | Variant::Symmetric => self.matrix.clone(),
            Variant::RandomWalk => {
                let sqrt = self.vertex_degrees.mapv(f64::sqrt);
                let mut m = self.matrix.clone();
                for ((u, v), x) in m.indexed_iter_mut() {
                    *x *= sqrt[u] / sqrt[v];
                }
                // the similarity transform is exact in real arithmetic; average
                // away the rounding so the solver sees a symmetric input
                let t = m.t().to_owned();
                (&m + &t) * 0.5
            }
        }
    }

    /// Maps eigenvectors of [`Self::symmetric_form`] back to eigenvectors of
    /// this Laplacian. Identity except for the random walk, where
    /// `v = D_v^{-1/2} u`.
    pub fn lift_eigenvector(&self, u: &mut [f64]) {
        if self.variant == Variant::RandomWalk {
            for (x, d) in u.iter_mut().zip(self.vertex_degrees.iter()) {
                *x /= d.sqrt();
            }
        }
    }
}

pub(crate) fn max_asymmetry(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    worst
}
