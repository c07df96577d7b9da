//! Exact planarity check for straight-line graphs with rational vertices.
//!
//! Edges are swept by their left endpoint in floating point only to prune
//! pairs; every reported defect is confirmed with exact orientation tests.

use std::cmp::Ordering;

use crate::geom::{orientation, Orientation, Pos};
use crate::graph::PlaneGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// Two edges cross at a point interior to both.
    ProperCrossing(usize, usize),
    /// A vertex lies in the relative interior of an edge it is not part of.
    VertexOnEdge { vertex: u32, edge: usize },
    /// Two collinear edges share more than a point.
    Overlap(usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanarityReport {
    pub defects: Vec<Defect>,
}

impl PlanarityReport {
    pub fn is_plane(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn proper_crossings(&self) -> usize {
        self.defects
            .iter()
            .filter(|d| matches!(d, Defect::ProperCrossing(..)))
            .count()
    }
}

struct Item {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    /// edge index, or `None` for an isolated vertex
    edge: Option<usize>,
    vertex: u32,
}

fn orient(a: &Pos, b: &Pos, c: &Pos) -> Ordering {
    match orientation(a, b, c) {
        Orientation::Ccw => Ordering::Greater,
        Orientation::Cw => Ordering::Less,
        Orientation::Collinear => Ordering::Equal,
    }
}

/// Whether `p`, known to be collinear with `a`-`b`, lies strictly between them.
fn strictly_inside(a: &Pos, b: &Pos, p: &Pos) -> bool {
    let between = |lo: &crate::geom::Coord, hi: &crate::geom::Coord, v: &crate::geom::Coord| {
        (lo < v && v < hi) || (hi < v && v < lo)
    };
    if a.x != b.x {
        between(&a.x, &b.x, &p.x)
    } else {
        between(&a.y, &b.y, &p.y)
    }
}

pub fn check_planarity(graph: &PlaneGraph) -> PlanarityReport {
    let pos: Vec<&Pos> = graph.vertices.iter().map(|v| &v.pos).collect();
    let fpos: Vec<(f64, f64)> = graph.positions_f64();
    let scale = fpos
        .iter()
        .fold(1.0f64, |m, &(x, y)| m.max(x.abs()).max(y.abs()));
    let slack = 1e-9 * scale;
    let degrees = graph.degrees();

    let mut items: Vec<Item> = graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let (a, b) = (fpos[u as usize], fpos[v as usize]);
            Item {
                xmin: a.0.min(b.0),
                xmax: a.0.max(b.0),
                ymin: a.1.min(b.1),
                ymax: a.1.max(b.1),
                edge: Some(i),
                vertex: u,
            }
        })
        .collect();
    for (i, &d) in degrees.iter().enumerate() {
        if d == 0 {
            let (x, y) = fpos[i];
            items.push(Item {
                xmin: x,
                xmax: x,
                ymin: y,
                ymax: y,
                edge: None,
                vertex: i as u32,
            });
        }
    }
    items.sort_by(|a, b| a.xmin.total_cmp(&b.xmin));

    let mut defects = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for i in 0..items.len() {
        let it = &items[i];
        active.retain(|&j| items[j].xmax >= it.xmin - slack);
        for &j in &active {
            let jt = &items[j];
            if jt.ymax < it.ymin - slack || it.ymax < jt.ymin - slack {
                continue;
            }
            match (it.edge, jt.edge) {
                (Some(e), Some(f)) => classify(graph, &pos, e, f, &mut defects),
                (Some(e), None) => vertex_on_edge(graph, &pos, jt.vertex, e, &mut defects),
                (None, Some(f)) => vertex_on_edge(graph, &pos, it.vertex, f, &mut defects),
                (None, None) => {}
            }
        }
        active.push(i);
    }
    defects.sort_by_key(|d| match *d {
        Defect::ProperCrossing(a, b) | Defect::Overlap(a, b) => (a.min(b), a.max(b), 0),
        Defect::VertexOnEdge { vertex, edge } => (edge, vertex as usize, 1),
    });
    defects.dedup();
    PlanarityReport { defects }
}

fn vertex_on_edge(graph: &PlaneGraph, pos: &[&Pos], v: u32, e: usize, out: &mut Vec<Defect>) {
    let (a, b) = graph.edges[e];
    let (pa, pb, pv) = (pos[a as usize], pos[b as usize], pos[v as usize]);
    if orient(pa, pb, pv) == Ordering::Equal && strictly_inside(pa, pb, pv) {
        out.push(Defect::VertexOnEdge { vertex: v, edge: e });
    }
}

fn classify(graph: &PlaneGraph, pos: &[&Pos], e: usize, f: usize, out: &mut Vec<Defect>) {
    let (a, b) = graph.edges[e];
    let (c, d) = graph.edges[f];
    let shared = [a, b].iter().filter(|v| **v == c || **v == d).count();
    if shared == 2 {
        out.push(Defect::Overlap(e.min(f), e.max(f)));
        return;
    }
    let (pa, pb, pc, pd) = (pos[a as usize], pos[b as usize], pos[c as usize], pos[d as usize]);
    if shared == 1 {
        // edges v-x and v-y overlap iff x and y leave v in the same direction
        let (v, x, y) = if a == c {
            (pa, pb, pd)
        } else if a == d {
            (pa, pb, pc)
        } else if b == c {
            (pb, pa, pd)
        } else {
            (pb, pa, pc)
        };
        if orient(v, x, y) == Ordering::Equal {
            let dot = (&x.x - &v.x) * (&y.x - &v.x) + (&x.y - &v.y) * (&y.y - &v.y);
            if dot.is_positive() {
                out.push(Defect::Overlap(e.min(f), e.max(f)));
            }
        }
        return;
    }
    let o1 = orient(pa, pb, pc);
    let o2 = orient(pa, pb, pd);
    let o3 = orient(pc, pd, pa);
    let o4 = orient(pc, pd, pb);
    use Ordering::Equal;
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        if o1 != o2 && o3 != o4 {
            out.push(Defect::ProperCrossing(e.min(f), e.max(f)));
        }
        return;
    }
    if o1 == Equal && o2 == Equal {
        let inside = strictly_inside(pa, pb, pc)
            || strictly_inside(pa, pb, pd)
            || strictly_inside(pc, pd, pa)
            || strictly_inside(pc, pd, pb);
        if inside {
            out.push(Defect::Overlap(e.min(f), e.max(f)));
        }
        return;
    }
    for (v, p, s, t, edge) in [(c, pc, pa, pb, e), (d, pd, pa, pb, e), (a, pa, pc, pd, f), (b, pb, pc, pd, f)] {
        if orient(s, t, p) == Equal && strictly_inside(s, t, p) {
            out.push(Defect::VertexOnEdge { vertex: v, edge });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphMeta, Vertex, VertexKind};

    fn graph(points: &[(i64, i64)], edges: &[(u32, u32)]) -> PlaneGraph {
        let vertices = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Vertex {
                id: i as u32,
                pos: Pos::from_ints(x, y),
                kind: VertexKind::Original,
            })
            .collect();
        PlaneGraph::new(vertices, edges.to_vec(), GraphMeta::default())
    }

    #[test]
    fn square_with_one_diagonal_is_plane() {
        let g = graph(&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]);
        assert!(check_planarity(&g).is_plane());
    }

    #[test]
    fn both_diagonals_cross() {
        let g = graph(&[(0, 0), (1, 0), (1, 1), (0, 1)], &[(0, 2), (1, 3)]);
        assert_eq!(check_planarity(&g).proper_crossings(), 1);
    }

    #[test]
    fn t_junction_and_overlap() {
        let g = graph(&[(0, 0), (4, 0), (2, 0), (2, 3)], &[(0, 1), (2, 3)]);
        assert_eq!(
            check_planarity(&g).defects,
            vec![Defect::VertexOnEdge { vertex: 2, edge: 0 }]
        );
        let g = graph(&[(0, 0), (4, 0), (2, 0), (6, 0)], &[(0, 1), (2, 3)]);
        assert_eq!(check_planarity(&g).defects, vec![Defect::Overlap(0, 1)]);
        let g = graph(&[(0, 0), (4, 0), (2, 0)], &[(0, 1), (0, 2)]);
        assert_eq!(check_planarity(&g).defects, vec![Defect::Overlap(0, 1)]);
    }

    #[test]
    fn isolated_vertex_on_edge() {
        let g = graph(&[(0, 0), (2, 2), (1, 1)], &[(0, 1)]);
        assert!(!check_planarity(&g).is_plane());
    }

    #[test]
    fn sweep_matches_all_pairs_on_random_segments() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let pts: Vec<(i64, i64)> = (0..40)
                .map(|_| (rng.random_range(0..50), rng.random_range(0..50)))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let n = pts.len() as u32;
            let edges: Vec<(u32, u32)> = (0..25)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
                .filter(|(a, b)| a != b)
                .collect();
            let g = graph(&pts, &edges);
            let mut brute = 0;
            for i in 0..g.edges.len() {
                for j in i + 1..g.edges.len() {
                    let (a, b) = g.edges[i];
                    let (c, d) = g.edges[j];
                    if [a, b].iter().any(|v| *v == c || *v == d) {
                        continue;
                    }
                    let p = |k: u32| &g.vertices[k as usize].pos;
                    let o = [
                        orient(p(a), p(b), p(c)),
                        orient(p(a), p(b), p(d)),
                        orient(p(c), p(d), p(a)),
                        orient(p(c), p(d), p(b)),
                    ];
                    if o.iter().all(|s| *s != Ordering::Equal) && o[0] != o[1] && o[2] != o[3] {
                        brute += 1;
                    }
                }
            }
            assert_eq!(check_planarity(&g).proper_crossings(), brute);
        }
    }
}
