//! Spanner quality metrics: degrees, edge lengths, angular resolution and
//! spanning ratio between original vertices.
//!
//! Metrics are computed in `f64` from the exact vertex positions. Degree
//! figures cover every vertex, Steiner and boundary vertices included.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, VertexKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub point_count: usize,
    pub steiner_points: usize,
    pub max_degree: f64,
    pub avg_degree: f64,
    pub edge_count: usize,
    pub max_edge_len: f64,
    pub avg_edge_len: f64,
    pub total_edge_len: f64,
    pub min_angle_deg: f64,
    pub spanning_ratio: f64,
    /// Original vertex ids realising the spanning ratio.
    pub witness_pair: Option<(u32, u32)>,
}

#[derive(Copy, Clone, PartialEq)]
struct Entry {
    dist: f64,
    vertex: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed so that the max-heap pops the nearest vertex first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn edge_length(pos: &[(f64, f64)], u: u32, v: u32) -> f64 {
    let (a, b) = (pos[u as usize], pos[v as usize]);
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Weighted adjacency with Euclidean edge lengths.
fn weighted_adjacency(graph: &PlaneGraph) -> Vec<Vec<(u32, f64)>> {
    let pos = graph.positions_f64();
    let mut adj = vec![Vec::new(); graph.vertex_count()];
    for &(u, v) in &graph.edges {
        let w = edge_length(&pos, u, v);
        adj[u as usize].push((v, w));
        adj[v as usize].push((u, w));
    }
    adj
}

fn dijkstra(adj: &[Vec<(u32, f64)>], source: u32) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0.0;
    heap.push(Entry { dist: 0.0, vertex: source });
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for &(v, w) in &adj[u as usize] {
            let nd = d + w;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(Entry { dist: nd, vertex: v });
            }
        }
    }
    dist
}

/// Graph distances from `source` to every vertex (`f64::INFINITY` when
/// unreachable), indexed by vertex id.
pub fn shortest_paths_from(graph: &PlaneGraph, source: u32) -> Vec<f64> {
    assert!((source as usize) < graph.vertex_count(), "vertex {source} is not in the graph");
    dijkstra(&weighted_adjacency(graph), source)
}

/// Maximum of graph distance over Euclidean distance across all pairs of
/// original vertices, with the pair attaining it. Disconnected originals
/// give `f64::INFINITY`; fewer than two originals give `1.0` and no pair.
pub fn spanning_ratio(graph: &PlaneGraph) -> (f64, Option<(u32, u32)>) {
    let originals: Vec<u32> = graph
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Original)
        .map(|v| v.id)
        .collect();
    if originals.len() < 2 {
        return (1.0, None);
    }
    let adj = weighted_adjacency(graph);
    let pos = graph.positions_f64();
    let best = originals
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let dist = dijkstra(&adj, s);
            let mut best: Option<(f64, (u32, u32))> = None;
            for &t in &originals[i + 1..] {
                let ratio = dist[t as usize] / edge_length(&pos, s, t);
                if best.is_none_or(|(r, _)| ratio > r) {
                    best = Some((ratio, (s, t)));
                }
            }
            best
        })
        .flatten()
        .reduce_with(|a, b| {
            // largest ratio, then the smallest pair, independent of scheduling
            match a.0.total_cmp(&b.0) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => {
                    if a.1 <= b.1 {
                        a
                    } else {
                        b
                    }
                }
            }
        });
    match best {
        Some((r, pair)) => (r.max(1.0), Some(pair)),
        None => (1.0, None),
    }
}

/// Smallest angle, in degrees, between consecutive edges around any vertex.
/// A vertex with a single edge contributes 360.
pub fn min_angle(graph: &PlaneGraph) -> Result<f64> {
    if graph.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let pos = graph.positions_f64();
    let mut best = f64::INFINITY;
    for (u, nbrs) in graph.adjacency().iter().enumerate() {
        if nbrs.is_empty() {
            continue;
        }
        let (ux, uy) = pos[u];
        let mut angles: Vec<f64> = nbrs
            .iter()
            .map(|&v| {
                let (vx, vy) = pos[v as usize];
                (vy - uy).atan2(vx - ux).to_degrees()
            })
            .collect();
        angles.sort_by(f64::total_cmp);
        let wrap = angles[0] + 360.0 - angles[angles.len() - 1];
        let gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min);
        best = best.min(gap);
    }
    Ok(best)
}

/// Every metric for one graph.
pub fn metrics_report(graph: &PlaneGraph) -> Result<MetricsReport> {
    let min_angle_deg = min_angle(graph)?;
    let pos = graph.positions_f64();
    let lengths: Vec<f64> = graph.edges.iter().map(|&(u, v)| edge_length(&pos, u, v)).collect();
    let total: f64 = lengths.iter().sum();
    let degrees = graph.degrees();
    let (spanning_ratio, witness_pair) = spanning_ratio(graph);
    Ok(MetricsReport {
        point_count: graph.count_kind(VertexKind::Original),
        steiner_points: graph.count_kind(VertexKind::Steiner),
        max_degree: degrees.iter().copied().max().unwrap_or(0) as f64,
        avg_degree: 2.0 * graph.edge_count() as f64 / graph.vertex_count() as f64,
        edge_count: graph.edge_count(),
        max_edge_len: lengths.iter().copied().fold(0.0, f64::max),
        avg_edge_len: total / lengths.len() as f64,
        total_edge_len: total,
        min_angle_deg,
        spanning_ratio,
        witness_pair,
    })
}
