//! k-nearest-neighbor graph construction and geodesic distances.
//!
//! The embedding does not use raw data-space distances directly: it builds a
//! k-NN graph over the datasets and measures shortest weighted path lengths
//! on that graph, so distances follow the data manifold.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::data::DataMatrix;
use crate::error::{PaletteError, Result};

/// Symmetric nonnegative `N x N` matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// All-zero `n x n` matrix.
    pub fn zeros(n: usize) -> Self {
        DistanceMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// Build from full rows, validating squareness, symmetry, nonnegativity,
    /// and a zero diagonal.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = DistanceMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(PaletteError::DimensionMismatch {
                    got: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(PaletteError::InvalidParams(format!(
                        "distance ({i},{j}) = {v} is not a nonnegative real"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(PaletteError::InvalidParams(format!(
                        "diagonal entry ({i},{i}) = {v} is nonzero"
                    )));
                }
                if rows[j][i] != v {
                    return Err(PaletteError::InvalidParams(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
                m.entries[i * n + j] = v;
            }
        }
        Ok(m)
    }

    /// Number of points `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Set both `(i, j)` and `(j, i)`.
    pub fn set_pair(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Undirected weighted edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Undirected weighted graph over the `N` datasets.
#[derive(Debug, Clone)]
pub struct NeighborGraph {
    n_nodes: usize,
    edges: Vec<Edge>,
    k: usize,
}

impl NeighborGraph {
    /// Build from an edge list; normalizes endpoint order, sorts, and
    /// rejects self-loops and duplicates.
    pub fn from_edges(n_nodes: usize, edges: Vec<(usize, usize, f64)>, k: usize) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b, weight) in edges {
            if a == b {
                return Err(PaletteError::InvalidParams(format!("self-loop at node {a}")));
            }
            if a >= n_nodes || b >= n_nodes {
                return Err(PaletteError::DimensionMismatch {
                    got: a.max(b),
                    expected: n_nodes,
                });
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(PaletteError::InvalidParams(format!(
                    "edge ({a},{b}) weight {weight} is not a nonnegative real"
                )));
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            normalized.push(Edge { a, b, weight });
        }
        normalized.sort_by(|x, y| (x.a, x.b).cmp(&(y.a, y.b)));
        if normalized.windows(2).any(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(PaletteError::InvalidParams("duplicate edge".into()));
        }
        Ok(NeighborGraph {
            n_nodes,
            edges: normalized,
            k,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbor count the graph was built with.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a == node || e.b == node)
            .count()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_nodes];
        for e in &self.edges {
            adj[e.a].push((e.b, e.weight));
            adj[e.b].push((e.a, e.weight));
        }
        adj
    }

    /// Connected-component label per node, labels numbered by first
    /// occurrence.
    pub fn component_labels(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut labels = vec![usize::MAX; self.n_nodes];
        let mut next = 0;
        for start in 0..self.n_nodes {
            if labels[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            labels[start] = next;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if labels[v] == usize::MAX {
                        labels[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        labels
    }

    pub fn n_components(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |m| m + 1)
    }
}

/// Euclidean distance between every pair of rows.
pub fn pairwise_distances(m: &DataMatrix) -> DistanceMatrix {
    let n = m.n_rows();
    let mut d = DistanceMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d.set_pair(i, j, dist);
        }
    }
    d
}

/// Connect each point to its `k` nearest neighbors (ties broken by lower
/// index) and symmetrize by union. Edge weights are the input distances.
pub fn build_knn_graph(d: &DistanceMatrix, k: usize) -> Result<NeighborGraph> {
    let n = d.len();
    if n < 2 || k == 0 || k > n - 1 {
        return Err(PaletteError::BadK {
            k,
            max: n.saturating_sub(1),
        });
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        candidates.clear();
        candidates.extend((0..n).filter(|&j| j != i).map(|j| (d.get(i, j), j)));
        candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(w, j) in candidates.iter().take(k) {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            edges.push((a, b, w));
        }
    }
    edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    edges.dedup_by_key(|e| (e.0, e.1));
    NeighborGraph::from_edges(n, edges.into_iter().collect(), k)
}

/// Repair a disconnected graph by repeatedly adding the globally
/// minimum-weight edge (per the data-space distances `d`) joining two
/// distinct components. Already-connected graphs pass through unchanged.
pub fn ensure_connected(g: &NeighborGraph, d: &DistanceMatrix) -> Result<NeighborGraph> {
    let n = g.n_nodes();
    if d.len() != n {
        return Err(PaletteError::DimensionMismatch {
            got: d.len(),
            expected: n,
        });
    }
    let mut graph = g.clone();
    loop {
        let labels = graph.component_labels();
        if labels.iter().max().map_or(0, |m| m + 1) <= 1 {
            return Ok(graph);
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if labels[i] == labels[j] {
                    continue;
                }
                let w = d.get(i, j);
                let better = match best {
                    None => true,
                    Some((bw, bi, bj)) => w < bw || (w == bw && (i, j) < (bi, bj)),
                };
                if better {
                    best = Some((w, i, j));
                }
            }
        }
        let (w, i, j) = best.expect("multiple components imply a bridging pair");
        let mut edges: Vec<(usize, usize, f64)> = graph
            .edges()
            .iter()
            .map(|e| (e.a, e.b, e.weight))
            .collect();
        edges.push((i, j, w));
        graph = NeighborGraph::from_edges(n, edges, graph.k())?;
    }
}

#[derive(Copy, Clone)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest weighted path length between every pair of nodes (Dijkstra from
/// each source). Upper-triangle results are mirrored so the output is
/// exactly symmetric.
pub fn all_pairs_geodesic(g: &NeighborGraph) -> Result<DistanceMatrix> {
    let n = g.n_nodes();
    let adj = g.adjacency();
    let mut result = DistanceMatrix::zeros(n);
    let mut dist = vec![f64::INFINITY; n];
    for source in 0..n {
        dist.fill(f64::INFINITY);
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let candidate = du + w;
                if candidate < dist[v] {
                    dist[v] = candidate;
                    heap.push(HeapEntry {
                        dist: candidate,
                        node: v,
                    });
                }
            }
        }
        for j in (source + 1)..n {
            if dist[j].is_infinite() {
                return Err(PaletteError::Disconnected {
                    from: source,
                    to: j,
                });
            }
            result.set_pair(source, j, dist[j]);
        }
    }
    Ok(result)
}

/// Uniformly scale all entries so the maximum equals `target_max`.
pub fn rescale_distances(d: &DistanceMatrix, target_max: f64) -> Result<DistanceMatrix> {
    if !target_max.is_finite() || target_max <= 0.0 {
        return Err(PaletteError::InvalidParams(format!(
            "rescale target {target_max} must be a positive real"
        )));
    }
    let max = d.max_entry();
    if max == 0.0 {
        return Err(PaletteError::DegenerateDistances);
    }
    let scale = target_max / max;
    let mut out = d.clone();
    for v in &mut out.entries {
        *v *= scale;
    }
    Ok(out)
}
