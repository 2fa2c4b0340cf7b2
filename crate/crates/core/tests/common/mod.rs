#![allow(dead_code)]

use std::fmt::Write as _;

use hyperlap::harness::LabeledDataset;
use hyperlap::Hypergraph;
use ndarray::Array2;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight(rng: &mut impl Rng) -> f64 {
    // uniform on (0, 10]
    10.0 * (1.0 - rng.random::<f64>())
}

fn random_edge(rng: &mut impl Rng, pool: &[usize]) -> Vec<usize> {
    let size = rng.random_range(2..=pool.len().min(6));
    pool.choose_multiple(rng, size).copied().collect()
}

/// Random hypergraph with `3 <= n <= 50`, `|E| <= 100`, weights in (0, 10]
/// and no isolated vertex.
pub fn random_hypergraph(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.random_range(3..=50);
    let all: Vec<usize> = (0..n).collect();
    // cover every vertex first: consecutive pairs of a shuffled order
    let mut order = all.clone();
    order.shuffle(rng);
    let mut edges: Vec<Vec<usize>> = order.chunks(2).map(|c| c.to_vec()).collect();
    if let Some(last) = edges.pop() {
        if last.len() == 1 {
            edges.push(vec![last[0], order[0]]);
        } else {
            edges.push(last);
        }
    }
    let extra = rng.random_range(0..=100 - edges.len());
    edges.extend((0..extra).map(|_| random_edge(rng, &all)));
    edges.shuffle(rng);
    let weights = (0..edges.len()).map(|_| weight(rng)).collect();
    Hypergraph::new(n, edges, weights).expect("valid random hypergraph")
}

/// Random hypergraph built from disjoint vertex blocks, so it has several
/// components unless a bridging edge joins them.
pub fn random_blocky_hypergraph(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.random_range(4..=50);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let blocks = rng.random_range(1..=(n / 2).min(6));
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (i, &v) in perm.iter().enumerate() {
        members[i % blocks].push(v);
    }
    let mut edges = Vec::new();
    for block in &members {
        // a spanning path keeps each block connected
        for pair in block.windows(2) {
            edges.push(pair.to_vec());
        }
        for _ in 0..rng.random_range(0..4) {
            edges.push(random_edge(rng, block));
        }
    }
    if blocks > 1 && rng.random_bool(0.3) {
        let a = members[0][0];
        let b = members[1][0];
        edges.push(vec![a, b]);
    }
    edges.truncate(100);
    let weights = (0..edges.len()).map(|_| weight(rng)).collect();
    Hypergraph::new(n, edges, weights).expect("valid block hypergraph")
}

/// Components by breadth-first search over the vertex-hyperedge bipartite graph.
pub fn bfs_components(g: &Hypergraph) -> usize {
    let n = g.n_vertices();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for e in g.hyperedges().iter().filter(|e| e.contains(&v)) {
                for &u in e {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
    }
    count
}

/// Three isotropic Gaussian clusters in the plane, 20 points each.
pub fn three_clusters(seed: u64) -> LabeledDataset {
    let centers = [[0.0, 0.0], [5.0, 0.0], [2.5, 5.0]];
    let noise = Normal::new(0.0, 0.1).unwrap();
    let mut rng = rng(seed);
    let mut samples = Array2::zeros((60, 2));
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for i in 0..20 {
            let row = c * 20 + i;
            samples[[row, 0]] = center[0] + noise.sample(&mut rng);
            samples[[row, 1]] = center[1] + noise.sample(&mut rng);
            labels.push(format!("c{c}"));
        }
    }
    LabeledDataset::new(samples, &labels).unwrap()
}

/// 15 classes of 11 noisy 32x32 "images" around smooth class prototypes,
/// pixel values in [0, 1].
pub fn synthetic_faces(seed: u64) -> LabeledDataset {
    let (classes, per_class, side) = (15, 11, 32);
    let dim = side * side;
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, 0.12).unwrap();
    let mut samples = Array2::zeros((classes * per_class, dim));
    let mut labels = Vec::new();
    for c in 0..classes {
        let fx: f64 = rng.random_range(0.5..3.0);
        let fy: f64 = rng.random_range(0.5..3.0);
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let proto: Vec<f64> = (0..dim)
            .map(|p| {
                let (x, y) = (
                    (p % side) as f64 / side as f64,
                    (p / side) as f64 / side as f64,
                );
                0.5 + 0.35
                    * (fx * std::f64::consts::TAU * x + phase).sin()
                    * (fy * std::f64::consts::PI * y).cos()
            })
            .collect();
        for i in 0..per_class {
            let row = c * per_class + i;
            let shade = rng.random_range(-0.1..0.1);
            for p in 0..dim {
                samples[[row, p]] = (proto[p] + shade + noise.sample(&mut rng)).clamp(0.0, 1.0);
            }
            labels.push(format!("subject{:02}", c + 1));
        }
    }
    LabeledDataset::new(samples, &labels).unwrap()
}

/// Label-first CSV text for a dataset.
pub fn to_csv(ds: &LabeledDataset) -> String {
    let mut out = String::new();
    for (row, &label) in ds.samples.rows().into_iter().zip(&ds.labels) {
        out.push_str(&ds.label_names[label]);
        for x in row {
            write!(out, ",{x:?}").unwrap();
        }
        out.push('\n');
    }
    out
}
