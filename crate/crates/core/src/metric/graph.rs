//! Shortest-path metric over a weighted undirected graph.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Weighted undirected graph whose vertices form the metric's sites.
///
/// Distances are computed by Dijkstra from the queried source and memoized
/// per source. Each memoized row stores path lengths summed starting from
/// the lower-indexed endpoint, so `dist(a, b)` and `dist(b, a)` agree bit for
/// bit whenever both runs settle on the same shortest path.
#[derive(Debug)]
pub struct GraphMetric<T> {
    adjacency: Vec<Vec<(usize, T)>>,
    edge_count: usize,
    rows: Vec<OnceLock<Vec<T>>>,
}

impl<T: Scalar> Clone for GraphMetric<T> {
    fn clone(&self) -> Self {
        Self::from_adjacency(self.adjacency.clone(), self.edge_count)
    }
}

#[derive(Clone, Copy)]
struct Frontier<T> {
    dist: T,
    vertex: usize,
}

impl<T: Scalar> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Frontier<T> {}

impl<T: Scalar> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Frontier<T> {
    // min-heap on (dist, vertex)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl<T: Scalar> GraphMetric<T> {
    /// Builds the graph on vertices `0..vertex_count`. Parallel edges keep the
    /// lighter weight; self-loops are ignored.
    pub fn new(vertex_count: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Input("graph has no vertices".into()));
        }
        let mut adjacency: Vec<Vec<(usize, T)>> = vec![Vec::new(); vertex_count];
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Input(format!(
                    "edge {line} references vertex outside 0..{vertex_count}"
                )));
            }
            if !(w > T::zero()) || !w.is_finite() {
                return Err(Error::Input(format!("edge {line} has non-positive weight {w}")));
            }
            if u == v {
                continue;
            }
            for (a, b) in [(u, v), (v, u)] {
                match adjacency[a].iter_mut().find(|(x, _)| *x == b) {
                    Some(slot) => slot.1 = slot.1.min(w),
                    None => adjacency[a].push((b, w)),
                }
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(x, _)| x);
        }
        Ok(Self::from_adjacency(adjacency, edges.len()))
    }

    fn from_adjacency(adjacency: Vec<Vec<(usize, T)>>, edge_count: usize) -> Self {
        let rows = (0..adjacency.len()).map(|_| OnceLock::new()).collect();
        Self { adjacency, edge_count, rows }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, T)] {
        &self.adjacency[v]
    }

    /// Shortest-path distances from `source` to every vertex (`inf` when unreachable).
    pub fn row(&self, source: usize) -> Result<&[T]> {
        if source >= self.vertex_count() {
            return Err(Error::UnknownPoint(source));
        }
        Ok(self.rows[source].get_or_init(|| self.dijkstra(source)))
    }

    pub fn dist(&self, a: usize, b: usize) -> Result<T> {
        if b >= self.vertex_count() {
            return Err(Error::UnknownPoint(b));
        }
        let d = self.row(a)?[b];
        if d.is_infinite() {
            return Err(Error::Disconnected(a, b));
        }
        Ok(d)
    }

    /// Whether every vertex in `vertices` is reachable from the first one.
    pub fn connects(&self, vertices: &[usize]) -> Result<bool> {
        let Some(&first) = vertices.first() else {
            return Ok(true);
        };
        let row = self.row(first)?;
        for &v in vertices {
            if v >= row.len() {
                return Err(Error::UnknownPoint(v));
            }
            if row[v].is_infinite() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dijkstra(&self, source: usize) -> Vec<T> {
        let n = self.vertex_count();
        let inf = T::infinity();
        let mut dist = vec![inf; n];
        let mut parent: Vec<Option<(usize, T)>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = T::zero();
        heap.push(Frontier { dist: T::zero(), vertex: source });
        let mut order = Vec::with_capacity(n);
        while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
            if settled[u] {
                continue;
            }
            settled[u] = true;
            order.push(u);
            for &(v, w) in &self.adjacency[u] {
                let cand = d + w;
                // strict improvement, or equal length through a lower-indexed parent
                let better = cand < dist[v]
                    || (cand == dist[v] && parent[v].is_some_and(|(p, _)| u < p));
                if !settled[v] && better {
                    dist[v] = cand;
                    parent[v] = Some((u, w));
                    heap.push(Frontier { dist: cand, vertex: v });
                }
            }
        }

        // Re-sum each tree path from its lower-indexed endpoint.
        let mut canonical = vec![inf; n];
        let mut path: Vec<T> = Vec::new();
        for &v in &order {
            if v == source {
                canonical[v] = T::zero();
                continue;
            }
            if v > source {
                canonical[v] = dist[v];
                continue;
            }
            path.clear();
            let mut cur = v;
            while let Some((p, w)) = parent[cur] {
                path.push(w);
                cur = p;
            }
            // `path` runs from v toward the source
            canonical[v] = path.iter().fold(T::zero(), |acc, &w| acc + w);
        }
        canonical
    }
}
