//! Reader for Triangle's `.node` and `.ele` files.
//!
//! `#` starts a comment anywhere on a line. Node numbering may start at 0 or
//! 1; the first node record decides, and element records use the same base.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord, Point, Pos};
use crate::graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleMeshFiles {
    pub node_text: String,
    pub ele_text: String,
}

/// Non-empty data lines as `(line number, fields)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let data = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = data.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn int(file: &str, line: usize, field: &str) -> Result<i64> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("{file}: expected an integer, found {field:?}")))
}

fn header<'a>(
    file: &str,
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    min_fields: usize,
) -> Result<(usize, Vec<i64>)> {
    let (line, fields) = lines
        .next()
        .ok_or_else(|| Error::parse(1, format!("{file}: missing header")))?;
    if fields.len() < min_fields {
        return Err(Error::parse(line, format!("{file}: header needs {min_fields} fields")));
    }
    let values = fields.iter().map(|f| int(file, line, f)).collect::<Result<Vec<_>>>()?;
    if values.iter().any(|&v| v < 0) {
        return Err(Error::parse(line, format!("{file}: negative count in header")));
    }
    Ok((line, values))
}

/// Reads a Triangle mesh. Nodes whose exact location is absent from
/// `originals` become Steiner vertices; with `None` every node is original.
pub fn import_triangle(files: &TriangleMeshFiles, originals: Option<&[Point]>) -> Result<PlaneGraph> {
    let mut nodes = records(&files.node_text);
    let (hline, h) = header("node", &mut nodes, 2)?;
    if h[1] != 2 {
        return Err(Error::parse(hline, format!("node: dimension must be 2, found {}", h[1])));
    }
    let count = h[0] as usize;
    let attrs = h.get(2).copied().unwrap_or(0) as usize;
    let markers = h.get(3).copied().unwrap_or(0) as usize;
    let known: Option<HashSet<&Pos>> = originals.map(|o| o.iter().map(|p| &p.pos).collect());

    let mut base = None;
    let mut vertices = Vec::with_capacity(count);
    for (line, fields) in nodes.by_ref() {
        if vertices.len() == count {
            return Err(Error::parse(line, format!("node: more than the {count} records announced")));
        }
        if fields.len() != 3 + attrs + markers {
            return Err(Error::parse(
                line,
                format!("node: expected {} fields, found {}", 3 + attrs + markers, fields.len()),
            ));
        }
        let index = int("node", line, fields[0])?;
        let first = *base.get_or_insert(index);
        if first != 0 && first != 1 {
            return Err(Error::parse(line, "node: numbering must start at 0 or 1"));
        }
        if index != first + vertices.len() as i64 {
            return Err(Error::parse(line, format!("node: expected index {}", first + vertices.len() as i64)));
        }
        let coord = |f: &str| f.parse::<Coord>().map_err(|e| Error::parse(line, format!("node: {e}")));
        let pos = Pos::new(coord(fields[1])?, coord(fields[2])?);
        let kind = match &known {
            Some(set) if !set.contains(&pos) => VertexKind::Steiner,
            _ => VertexKind::Original,
        };
        vertices.push(Vertex {
            id: vertices.len() as u32,
            pos,
            kind,
        });
    }
    if vertices.len() != count {
        return Err(Error::parse(
            files.node_text.lines().count().max(1),
            format!("node: {count} records announced, {} found", vertices.len()),
        ));
    }
    let base = base.unwrap_or(0);

    let mut eles = records(&files.ele_text);
    let (hline, h) = header("ele", &mut eles, 2)?;
    let tri_count = h[0] as usize;
    let corners = h[1] as usize;
    if corners != 3 && corners != 6 {
        return Err(Error::parse(hline, format!("ele: {corners} nodes per triangle is not supported")));
    }
    let tri_attrs = h.get(2).copied().unwrap_or(0) as usize;
    let mut edges = Vec::with_capacity(3 * tri_count);
    let mut seen = 0usize;
    for (line, fields) in eles {
        if seen == tri_count {
            return Err(Error::parse(line, format!("ele: more than the {tri_count} records announced")));
        }
        if fields.len() != 1 + corners + tri_attrs {
            return Err(Error::parse(
                line,
                format!("ele: expected {} fields, found {}", 1 + corners + tri_attrs, fields.len()),
            ));
        }
        let mut v = [0u32; 3];
        for k in 0..3 {
            let raw = int("ele", line, fields[1 + k])? - base;
            if raw < 0 || raw as usize >= count {
                return Err(Error::parse(line, format!("ele: node {} does not exist", fields[1 + k])));
            }
            v[k] = raw as u32;
        }
        if v[0] == v[1] || v[1] == v[2] || v[0] == v[2] {
            return Err(Error::parse(line, "ele: repeated node in triangle"));
        }
        edges.extend([(v[0], v[1]), (v[1], v[2]), (v[2], v[0])]);
        seen += 1;
    }
    if seen != tri_count {
        return Err(Error::parse(
            files.ele_text.lines().count().max(1),
            format!("ele: {tri_count} records announced, {seen} found"),
        ));
    }
    let mut g = PlaneGraph::new(
        vertices,
        edges,
        GraphMeta {
            algorithm: "triangle-import".into(),
            ..GraphMeta::default()
        },
    );
    g.add_diagnostic("triangles", tri_count);
    Ok(g)
}
