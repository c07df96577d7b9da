//! Deterministic SVG drawings of plane graphs.
//!
//! One element per edge (`line`) and per vertex: originals are circles,
//! Steiner vertices squares, boundary vertices cross-shaped ticks (`path`).
//! Edges come first, then vertices, both in id order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, VertexKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvgStyle {
    /// Width in pixels of the longer side of the view box.
    pub size: f64,
    /// Radius of original vertices, in pixels.
    pub point_radius: f64,
    /// Side of Steiner squares, in pixels.
    pub steiner_side: f64,
    /// Half-length of boundary ticks, in pixels.
    pub tick: f64,
    pub stroke_width: f64,
    pub edge_color: String,
    pub point_color: String,
    pub steiner_color: String,
    pub boundary_color: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            size: 800.0,
            point_radius: 3.0,
            steiner_side: 3.0,
            tick: 3.0,
            stroke_width: 1.0,
            edge_color: "#3a6ea5".into(),
            point_color: "#111111".into(),
            steiner_color: "#c0392b".into(),
            boundary_color: "#7f8c8d".into(),
        }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn render_svg(graph: &PlaneGraph, style: &SvgStyle) -> Result<String> {
    if graph.vertices.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let pos = graph.positions_f64();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pos {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let extent = (xmax - xmin).max(ymax - ymin);
    let extent = if extent > 0.0 { extent } else { 1.0 };
    let margin = 0.05 * extent;
    let scale = style.size / (extent + 2.0 * margin);
    let width = (xmax - xmin + 2.0 * margin) * scale;
    let height = (ymax - ymin + 2.0 * margin) * scale;
    // y grows downwards in SVG
    let at = |(x, y): (f64, f64)| ((x - xmin + margin) * scale, (ymax - y + margin) * scale);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(width),
        num(height),
        num(width),
        num(height)
    );
    for &(u, v) in &graph.edges {
        let (a, b) = (at(pos[u as usize]), at(pos[v as usize]));
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1),
            style.edge_color,
            num(style.stroke_width)
        );
    }
    for v in &graph.vertices {
        let (x, y) = at(pos[v.id as usize]);
        let _ = match v.kind {
            VertexKind::Original => writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
                num(x),
                num(y),
                num(style.point_radius),
                style.point_color
            ),
            VertexKind::Steiner => {
                let h = style.steiner_side / 2.0;
                writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                    num(x - h),
                    num(y - h),
                    num(style.steiner_side),
                    num(style.steiner_side),
                    style.steiner_color
                )
            }
            VertexKind::Boundary => {
                let t = style.tick;
                writeln!(
                    out,
                    "<path d=\"M{} {}L{} {}M{} {}L{} {}\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    num(x - t),
                    num(y),
                    num(x + t),
                    num(y),
                    num(x),
                    num(y - t),
                    num(x),
                    num(y + t),
                    style.boundary_color,
                    num(style.stroke_width)
                )
            }
        };
    }
    out.push_str("</svg>\n");
    Ok(out)
}
