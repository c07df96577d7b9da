//! Delaunay triangulation baseline and import of meshes produced by
//! Shewchuk's Triangle.
//!
//! The triangulation is built by Bowyer–Watson insertion with a symbolic
//! vertex at infinity, so hull edges need no bounding super-triangle. All
//! predicates are exact on the construction lattice. When four or more
//! points are co-circular the lexicographically smallest diagonal is kept.

mod triangle;

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};
use crate::kernel::{orient, LPos};
use crate::pointset::PointSet;

pub use triangle::{import_triangle, TriangleMeshFiles};

const INF: u32 = u32::MAX;

/// Triangles as counter-clockwise vertex triples; a triple ending in `INF`
/// stands for the outside region beyond the hull edge formed by the first two.
type Tri = [u32; 3];

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Sign of the in-circle determinant: positive when `d` lies strictly inside
/// the circle through the counter-clockwise triangle `a, b, c`.
pub(crate) fn in_circle(a: LPos, b: LPos, c: LPos, d: LPos) -> std::cmp::Ordering {
    let rows = [a, b, c].map(|p| (p.x - d.x, p.y - d.y));
    let small = rows.iter().all(|&(x, y)| x.abs() < 1 << 30 && y.abs() < 1 << 30);
    if small {
        let m = rows.map(|(x, y)| (x as i128, y as i128, x as i128 * x as i128 + y as i128 * y as i128));
        let det = m[0].0 * (m[1].1 * m[2].2 - m[2].1 * m[1].2) - m[0].1 * (m[1].0 * m[2].2 - m[2].0 * m[1].2)
            + m[0].2 * (m[1].0 * m[2].1 - m[2].0 * m[1].1);
        det.cmp(&0)
    } else {
        let m = rows.map(|(x, y)| (big(x), big(y), big(x) * big(x) + big(y) * big(y)));
        let det = &m[0].0 * (&m[1].1 * &m[2].2 - &m[2].1 * &m[1].2) - &m[0].1 * (&m[1].0 * &m[2].2 - &m[2].0 * &m[1].2)
            + &m[0].2 * (&m[1].0 * &m[2].1 - &m[2].0 * &m[1].1);
        if det.is_positive() {
            std::cmp::Ordering::Greater
        } else if det.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Equal
        }
    }
}

/// Whether `p` lies strictly between `a` and `b` on their common line.
fn strictly_between(a: LPos, b: LPos, p: LPos) -> bool {
    let inside = |lo: i64, hi: i64, v: i64| (lo < v && v < hi) || (hi < v && v < lo);
    if a.x != b.x {
        inside(a.x, b.x, p.x)
    } else {
        inside(a.y, b.y, p.y)
    }
}

struct Triangulation<'a> {
    pos: &'a [LPos],
    tris: Vec<Tri>,
}

impl Triangulation<'_> {
    fn conflicts(&self, t: &Tri, p: LPos) -> bool {
        let [a, b, c] = *t;
        let (pa, pb) = (self.pos[a as usize], self.pos[b as usize]);
        if c == INF {
            match orient(pa, pb, p) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => strictly_between(pa, pb, p),
            }
        } else {
            in_circle(pa, pb, self.pos[c as usize], p) == std::cmp::Ordering::Greater
        }
    }

    fn insert(&mut self, v: u32) {
        let p = self.pos[v as usize];
        let (dead, alive): (Vec<Tri>, Vec<Tri>) = self.tris.iter().partition(|t| self.conflicts(t, p));
        let dead_edges: HashSet<(u32, u32)> = dead
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .collect();
        self.tris = alive;
        for &(a, b) in &dead_edges {
            if dead_edges.contains(&(b, a)) {
                continue;
            }
            self.tris.push(match (a, b) {
                (INF, _) => [b, v, INF],
                (_, INF) => [v, a, INF],
                _ => [a, b, v],
            });
        }
    }

    fn finite(&self) -> impl Iterator<Item = &Tri> {
        self.tris.iter().filter(|t| !t.contains(&INF))
    }
}

fn lex_key(pos: &[LPos], a: u32, b: u32) -> ((i64, i64), (i64, i64)) {
    let (p, q) = (pos[a as usize], pos[b as usize]);
    let (p, q) = ((p.x, p.y), (q.x, q.y));
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// Flips co-circular diagonals to the lexicographically smallest choice;
/// returns the number of flips.
fn normalize_cocircular(pos: &[LPos], tris: &mut Vec<Tri>) -> usize {
    let mut flips = 0;
    loop {
        let mut owner: HashMap<(u32, u32), usize> = HashMap::new();
        for (i, t) in tris.iter().enumerate() {
            for k in 0..3 {
                owner.insert((t[k], t[(k + 1) % 3]), i);
            }
        }
        let mut flip = None;
        'search: for (i, t) in tris.iter().enumerate() {
            for k in 0..3 {
                let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                let Some(&j) = owner.get(&(b, a)) else {
                    continue;
                };
                let u = tris[j];
                let d = u[(u.iter().position(|&x| x == a).unwrap() + 1) % 3];
                let (pa, pb, pc, pd) = (pos[a as usize], pos[b as usize], pos[c as usize], pos[d as usize]);
                if in_circle(pa, pb, pc, pd) == std::cmp::Ordering::Equal
                    && lex_key(pos, c, d) < lex_key(pos, a, b)
                {
                    flip = Some((i, j, [a, d, c], [d, b, c]));
                    break 'search;
                }
            }
        }
        match flip {
            Some((i, j, t1, t2)) => {
                tris[i] = t1;
                tris[j] = t2;
                flips += 1;
            }
            None => return flips,
        }
    }
}

fn original_vertices(set: &PointSet) -> Vec<Vertex> {
    set.points()
        .iter()
        .enumerate()
        .map(|(i, p)| Vertex {
            id: i as u32,
            pos: p.pos.clone(),
            kind: VertexKind::Original,
        })
        .collect()
}

/// Delaunay triangulation of `points`; vertex `i` is input point `i`.
/// Fewer than three points or a collinear set yield the path through the
/// points in line order, flagged with a `warning` diagnostic.
pub fn delaunay(points: &[Point]) -> Result<PlaneGraph> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let set = PointSet::new(points.to_vec())?;
    let pos = set.lattice_positions();
    let n = pos.len() as u32;
    let meta = GraphMeta {
        algorithm: "delaunay".into(),
        ..GraphMeta::default()
    };
    let apex = (2..n).find(|&c| orient(pos[0], pos[1], pos[c as usize]) != std::cmp::Ordering::Equal);
    let Some(c) = apex else {
        let mut order: Vec<u32> = (0..n).collect();
        order.sort_by_key(|&i| (pos[i as usize].x, pos[i as usize].y));
        let edges = order.windows(2).map(|w| (w[0], w[1])).collect();
        let mut g = PlaneGraph::new(original_vertices(&set), edges, meta);
        g.add_diagnostic(
            "warning",
            Error::DegenerateInput(format!("{n} points, all collinear")).to_string(),
        );
        return Ok(g);
    };
    let first = if orient(pos[0], pos[1], pos[c as usize]) == std::cmp::Ordering::Greater {
        [0, 1, c]
    } else {
        [1, 0, c]
    };
    let mut tri = Triangulation {
        pos,
        tris: vec![
            first,
            [first[1], first[0], INF],
            [first[2], first[1], INF],
            [first[0], first[2], INF],
        ],
    };
    for v in (2..n).filter(|&v| v != c) {
        tri.insert(v);
    }
    let mut tris: Vec<Tri> = tri.finite().copied().collect();
    tris.sort_unstable();
    let flips = normalize_cocircular(pos, &mut tris);
    let edges = tris
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
        .collect();
    let mut g = PlaneGraph::new(original_vertices(&set), edges, meta);
    g.add_diagnostic("triangles", tris.len());
    g.add_diagnostic("cocircular_rule", "lexicographically smallest diagonal");
    g.add_diagnostic("cocircular_flips", flips);
    Ok(g)
}
