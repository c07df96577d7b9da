use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::Pos;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Original,
    Steiner,
    Boundary,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexKind::Original => "original",
            VertexKind::Steiner => "steiner",
            VertexKind::Boundary => "boundary",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: u32,
    #[serde(flatten)]
    pub pos: Pos,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_policy: Option<String>,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

/// A straight-line plane graph. Vertex `i` has id `i`; edges are stored as
/// `(u, v)` with `u < v`, sorted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlaneGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(u32, u32)>,
    pub meta: GraphMeta,
}

impl PlaneGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(u32, u32)>, meta: GraphMeta) -> Self {
        let mut edges: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        PlaneGraph {
            vertices,
            edges,
            meta,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_kind(&self, kind: VertexKind) -> usize {
        self.vertices.iter().filter(|v| v.kind == kind).count()
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn positions_f64(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(|v| v.pos.to_f64()).collect()
    }

    pub fn add_diagnostic(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.meta.diagnostics.insert(key.to_string(), value.into());
    }

    /// Structural problems other than crossings: bad ids, dangling or
    /// repeated edges, zero-length edges, isolated Steiner/boundary vertices.
    /// See [`crate::planarity`] for the geometric checks.
    pub fn structural_problems(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id as usize != i {
                problems.push(format!("vertex at index {i} has id {}", v.id));
            }
        }
        let n = self.vertices.len() as u32;
        let mut seen = HashSet::new();
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                problems.push(format!("edge ({u}, {v}) references a missing vertex"));
                continue;
            }
            if !seen.insert((u.min(v), u.max(v))) {
                problems.push(format!("duplicate edge ({u}, {v})"));
            }
            if self.vertices[u as usize].pos == self.vertices[v as usize].pos {
                problems.push(format!("zero-length edge ({u}, {v})"));
            }
        }
        let deg = self.degrees();
        for v in &self.vertices {
            if v.kind != VertexKind::Original && deg[v.id as usize] == 0 {
                problems.push(format!("{} vertex {} is isolated", v.kind, v.id));
            }
        }
        problems
    }

    /// Whether all original vertices lie in one connected component.
    pub fn originals_connected(&self) -> bool {
        let adj = self.adjacency();
        let start = match self.vertices.iter().find(|v| v.kind == VertexKind::Original) {
            Some(v) => v.id as usize,
            None => return true,
        };
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
        self.vertices
            .iter()
            .all(|v| v.kind != VertexKind::Original || seen[v.id as usize])
    }
}
