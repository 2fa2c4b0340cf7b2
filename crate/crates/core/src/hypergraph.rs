//! Hypergraph data model: vertex sets per hyperedge, hyperedge weights and
//! the degree quantities derived from the incidence relation.
//!
//! Incidence is stored sparsely as one sorted vertex list per hyperedge and
//! densified on demand with [`Hypergraph::incidence_dense`].

use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated, immutable weighted hypergraph.
///
/// Every hyperedge holds at least two distinct vertices, every weight is
/// positive and finite, and every vertex lies in at least one hyperedge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphDoc", into = "HypergraphDoc")]
pub struct Hypergraph {
    n_vertices: usize,
    hyperedges: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

/// Vertex and hyperedge degrees.
///
/// `vertex_degrees[v] = Σ_e w(e)·h(v,e)` and `hyperedge_degrees[e] = |e|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVectors {
    pub vertex_degrees: Array1<f64>,
    pub hyperedge_degrees: Array1<f64>,
}

/// JSON wire form: `{"n_vertices": .., "hyperedges": [[..], ..], "weights": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct HypergraphDoc {
    n_vertices: usize,
    hyperedges: Vec<Vec<usize>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

impl TryFrom<HypergraphDoc> for Hypergraph {
    type Error = Error;

    fn try_from(doc: HypergraphDoc) -> Result<Self> {
        match doc.weights {
            Some(w) => Hypergraph::new(doc.n_vertices, doc.hyperedges, w),
            None => Hypergraph::with_unit_weights(doc.n_vertices, doc.hyperedges),
        }
    }
}

impl From<Hypergraph> for HypergraphDoc {
    fn from(g: Hypergraph) -> Self {
        HypergraphDoc {
            n_vertices: g.n_vertices,
            hyperedges: g.hyperedges,
            weights: Some(g.weights),
        }
    }
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Repeated vertices inside one
    /// hyperedge are collapsed; membership is binary.
    pub fn new<E, I>(n_vertices: usize, hyperedges: E, weights: Vec<f64>) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if n_vertices == 0 {
            return Err(Error::NoVertices);
        }
        let mut edges = Vec::new();
        for (e, members) in hyperedges.into_iter().enumerate() {
            let mut set: Vec<usize> = members.into_iter().collect();
            set.sort_unstable();
            set.dedup();
            if let Some(&vertex) = set.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::OutOfRangeVertex {
                    edge: e,
                    vertex,
                    n_vertices,
                });
            }
            if set.len() < 2 {
                return Err(Error::SingletonHyperedge {
                    edge: e,
                    size: set.len(),
                });
            }
            edges.push(set);
        }
        if edges.len() != weights.len() {
            return Err(Error::WeightCountMismatch {
                hyperedges: edges.len(),
                weights: weights.len(),
            });
        }
        if let Some((edge, &weight)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::NonPositiveWeight { edge, weight });
        }
        let mut covered = vec![false; n_vertices];
        for set in &edges {
            for &v in set {
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::IsolatedVertex(v));
        }
        Ok(Hypergraph {
            n_vertices,
            hyperedges: edges,
            weights,
        })
    }

    /// Same as [`Hypergraph::new`] with every weight set to 1.
    pub fn with_unit_weights<E, I>(n_vertices: usize, hyperedges: E) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let edges: Vec<Vec<usize>> = hyperedges
            .into_iter()
            .map(|e| e.into_iter().collect())
            .collect();
        let weights = vec![1.0; edges.len()];
        Hypergraph::new(n_vertices, edges, weights)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_hyperedges(&self) -> usize {
        self.hyperedges.len()
    }

    /// Sorted member list of each hyperedge.
    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The incidence relation `h(v, e)`: 1 if `v` belongs to hyperedge `e`, else 0.
    ///
    /// Panics if `e` is not a hyperedge index.
    pub fn incidence(&self, v: usize, e: usize) -> u8 {
        u8::from(self.hyperedges[e].binary_search(&v).is_ok())
    }

    pub fn degrees(&self) -> DegreeVectors {
        // summing each vertex's weights in sorted order makes d(v) independent
        // of hyperedge order down to the last bit
        let mut incident: Vec<Vec<f64>> = vec![Vec::new(); self.n_vertices];
        for (set, &w) in self.hyperedges.iter().zip(&self.weights) {
            for &v in set {
                incident[v].push(w);
            }
        }
        let vertex_degrees = incident
            .into_iter()
            .map(|mut ws| {
                ws.sort_by(f64::total_cmp);
                ws.into_iter().sum::<f64>()
            })
            .collect();
        let hyperedge_degrees = self.hyperedges.iter().map(|s| s.len() as f64).collect();
        DegreeVectors {
            vertex_degrees,
            hyperedge_degrees,
        }
    }

    /// Dense `n × |E|` 0/1 incidence matrix `H`.
    pub fn incidence_dense(&self) -> Array2<f64> {
        let mut h = Array2::zeros((self.n_vertices, self.hyperedges.len()));
        for (e, set) in self.hyperedges.iter().enumerate() {
            for &v in set {
                h[[v, e]] = 1.0;
            }
        }
        h
    }

    /// Component id per vertex, where two vertices are connected when they
    /// share a hyperedge. Ids are numbered by first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for set in &self.hyperedges {
            let root = find(&mut parent, set[0]);
            for &v in &set[1..] {
                let r = find(&mut parent, v);
                if r != root {
                    parent[r] = root;
                }
            }
        }
        let mut ids = vec![usize::MAX; self.n_vertices];
        let mut labels = Vec::with_capacity(self.n_vertices);
        let mut next = 0;
        for v in 0..self.n_vertices {
            let r = find(&mut parent, v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            labels.push(ids[r]);
        }
        labels
    }

    pub fn component_count(&self) -> usize {
        self.component_labels()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Hypergraph::from_json(&std::fs::read_to_string(path)?)
    }
}


#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_covering_edge() {
        let g = fixtures::triangle();
        assert_eq!(g.n_hyperedges(), 1);
        for v in 0..3 {
            assert_eq!(g.incidence(v, 0), 1);
        }
        let d = g.degrees();
        assert_eq!(d.vertex_degrees.to_vec(), vec![1.0, 1.0, 1.0]);
        assert_eq!(d.hyperedge_degrees.to_vec(), vec![3.0]);
        assert_eq!(g.incidence_dense(), ndarray::array![[1.0], [1.0], [1.0]]);
    }

    #[test]
    fn eight_vertices_three_edges() {
        let g = fixtures::eight_three();
        assert_eq!(g.n_vertices(), 8);
        assert_eq!(g.n_hyperedges(), 3);
        assert_eq!(g.component_count(), 1);
    }

    #[test]
    fn weighted_degrees() {
        let g = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]], vec![2.0, 3.0]).unwrap();
        let d = g.degrees();
        assert_eq!(d.vertex_degrees.to_vec(), vec![2.0, 5.0, 3.0]);
        assert_eq!(d.hyperedge_degrees.to_vec(), vec![2.0, 2.0]);
        assert_eq!(
            g.incidence_dense(),
            ndarray::array![[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        );
    }

    #[test]
    fn disjoint_pairs_degrees() {
        let g = fixtures::disjoint_pairs();
        let d = g.degrees();
        assert_eq!(d.vertex_degrees.to_vec(), vec![1.0; 4]);
        assert_eq!(d.hyperedge_degrees.to_vec(), vec![2.0, 2.0]);
        assert_eq!(g.component_count(), 2);
        assert_eq!(g.component_labels(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Hypergraph::with_unit_weights(3, vec![vec![0]]),
            Err(Error::SingletonHyperedge { edge: 0, size: 1 })
        );
        // duplicates collapse, leaving a singleton
        assert_eq!(
            Hypergraph::with_unit_weights(3, vec![vec![1, 1]]),
            Err(Error::SingletonHyperedge { edge: 0, size: 1 })
        );
        assert_eq!(
            Hypergraph::with_unit_weights(2, vec![vec![0, 2]]),
            Err(Error::OutOfRangeVertex {
                edge: 0,
                vertex: 2,
                n_vertices: 2
            })
        );
        assert!(matches!(
            Hypergraph::new(2, vec![vec![0, 1]], vec![0.0]),
            Err(Error::NonPositiveWeight { edge: 0, .. })
        ));
        assert!(matches!(
            Hypergraph::new(2, vec![vec![0, 1]], vec![f64::NAN]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Hypergraph::new(2, vec![vec![0, 1]], vec![f64::INFINITY]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert_eq!(
            Hypergraph::with_unit_weights(3, vec![vec![0, 1]]),
            Err(Error::IsolatedVertex(2))
        );
        assert_eq!(
            Hypergraph::new(2, vec![vec![0, 1]], vec![]),
            Err(Error::WeightCountMismatch {
                hyperedges: 1,
                weights: 0
            })
        );
        assert_eq!(
            Hypergraph::with_unit_weights(0, Vec::<Vec<usize>>::new()),
            Err(Error::NoVertices)
        );
    }

    #[test]
    fn duplicates_collapse() {
        let g = Hypergraph::with_unit_weights(3, vec![vec![2, 0, 2, 1, 0]]).unwrap();
        assert_eq!(g.hyperedges()[0], vec![0, 1, 2]);
        assert_eq!(g.degrees().hyperedge_degrees[0], 3.0);
    }

    #[test]
    fn json_round_trip_and_default_weights() {
        let g = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]], vec![2.0, 0.5]).unwrap();
        let s = g.to_json().unwrap();
        assert_eq!(
            s,
            r#"{"n_vertices":3,"hyperedges":[[0,1],[1,2]],"weights":[2.0,0.5]}"#
        );
        assert_eq!(Hypergraph::from_json(&s).unwrap(), g);

        let unit = Hypergraph::from_json(r#"{"n_vertices":2,"hyperedges":[[1,0]]}"#).unwrap();
        assert_eq!(unit.weights(), &[1.0]);
        assert!(Hypergraph::from_json(r#"{"n_vertices":2,"hyperedges":[[0]]}"#).is_err());
    }

    pub(crate) fn arb_hypergraph(max_n: usize, max_e: usize) -> impl Strategy<Value = Hypergraph> {
        (2..=max_n)
            .prop_flat_map(move |n| {
                let edge = proptest::collection::btree_set(0..n, 2..=n.min(6));
                (
                    Just(n),
                    proptest::collection::vec((edge, 0.01f64..10.0), 1..=max_e),
                )
            })
            .prop_map(|(n, mut edges)| {
                // cover any vertex left out with a pair edge
                let mut covered = vec![false; n];
                for (e, _) in &edges {
                    for &v in e {
                        covered[v] = true;
                    }
                }
                for (v, _) in covered.iter().enumerate().filter(|(_, c)| !**c) {
                    edges.push(([v, (v + 1) % n].into_iter().collect(), 1.0));
                }
                let (sets, weights): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
                Hypergraph::new(n, sets, weights).unwrap()
            })
    }

    proptest! {
        #[test]
        fn degree_double_counting(g in arb_hypergraph(30, 40)) {
            let d = g.degrees();
            let lhs: f64 = d.vertex_degrees.sum();
            let rhs: f64 = g.weights().iter().zip(g.hyperedges()).map(|(w, e)| w * e.len() as f64).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
            prop_assert!(d.vertex_degrees.iter().all(|&x| x > 0.0));
            prop_assert!(d.hyperedge_degrees.iter().all(|&x| x >= 2.0));
        }

        #[test]
        fn incidence_is_binary_and_sums_match(g in arb_hypergraph(30, 40)) {
            let h = g.incidence_dense();
            prop_assert!(h.iter().all(|&x| x == 0.0 || x == 1.0));
            let d = g.degrees();
            for e in 0..g.n_hyperedges() {
                // brute-force membership count
                let count = (0..g.n_vertices()).filter(|&v| g.hyperedges()[e].contains(&v)).count();
                prop_assert_eq!(h.column(e).sum(), count as f64);
                prop_assert_eq!(d.hyperedge_degrees[e], count as f64);
            }
            for v in 0..g.n_vertices() {
                let weighted: f64 = (0..g.n_hyperedges()).map(|e| g.weights()[e] * h[[v, e]]).sum();
                prop_assert!((weighted - d.vertex_degrees[v]).abs() <= 1e-12 * weighted);
            }
        }

        #[test]
        fn degrees_invariant_under_edge_reordering(g in arb_hypergraph(20, 30), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut order: Vec<usize> = (0..g.n_hyperedges()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let edges: Vec<Vec<usize>> = order.iter().map(|&i| g.hyperedges()[i].clone()).collect();
            let weights: Vec<f64> = order.iter().map(|&i| g.weights()[i]).collect();
            let shuffled = Hypergraph::new(g.n_vertices(), edges, weights).unwrap();
            let a = g.degrees().vertex_degrees;
            let b = shuffled.degrees().vertex_degrees;
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
            }
        }

        #[test]
        fn json_round_trip(g in arb_hypergraph(15, 10)) {
            prop_assert_eq!(Hypergraph::from_json(&g.to_json().unwrap()).unwrap(), g);
        }
    }
}
