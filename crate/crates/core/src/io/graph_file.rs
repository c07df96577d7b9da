//! Graph files: JSON `{"vertices": [{"id", "x", "y", "kind"}], "edges":
//! [[u, v]], "meta": {..}}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphMeta, PlaneGraph, Vertex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default)]
    pub meta: GraphMeta,
}

impl From<&PlaneGraph> for GraphFile {
    fn from(g: &PlaneGraph) -> Self {
        GraphFile {
            vertices: g.vertices.clone(),
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            meta: g.meta.clone(),
        }
    }
}

impl GraphFile {
    /// Checks ids and edge endpoints and builds the graph.
    pub fn into_graph(self) -> Result<PlaneGraph> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id as usize != i {
                return Err(Error::Config(format!("vertex at position {i} has id {}", v.id)));
            }
        }
        let n = self.vertices.len() as u32;
        for &[u, v] in &self.edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Config(format!("edge [{u}, {v}] is invalid for {n} vertices")));
            }
        }
        Ok(PlaneGraph::new(
            self.vertices,
            self.edges.into_iter().map(|[u, v]| (u, v)).collect(),
            self.meta,
        ))
    }
}

pub fn graph_to_json(graph: &PlaneGraph) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&GraphFile::from(graph))?;
    text.push('\n');
    Ok(text)
}

pub fn graph_from_json(text: &str) -> Result<PlaneGraph> {
    serde_json::from_str::<GraphFile>(text)?.into_graph()
}
