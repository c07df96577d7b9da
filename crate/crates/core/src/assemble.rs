//! Turns a bag of lattice segments into a plane graph.
//!
//! All segments run along one of the four grade-2 line families, so
//! overlapping segments always share a supporting line. Segments are grouped
//! by line, every vertex lying on a line splits it, and the covered pieces
//! between consecutive vertices become edges. Remaining proper crossings
//! between different lines are found with a uniform grid and can optionally
//! be repaired by inserting a vertex at the crossing point.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::VertexKind;
use crate::kernel::{cross, orient, LPos};

#[derive(Debug)]
pub(crate) struct Assembled {
    pub vertices: Vec<(LPos, VertexKind)>,
    pub edges: Vec<(u32, u32)>,
    /// Vertices inserted at proper crossings.
    pub repairs: usize,
    /// Proper crossings left in the output (only nonzero without repair).
    pub crossings: usize,
}

#[derive(Clone)]
pub(crate) struct Assembler {
    originals: Vec<LPos>,
    kinds: HashMap<LPos, VertexKind>,
    segments: Vec<(LPos, LPos)>,
}

type LineKey = (u8, i64);

fn family_of(a: LPos, b: LPos) -> Option<u8> {
    let (dx, dy) = b.sub(a);
    match (dx, dy) {
        (0, 0) => None,
        (_, 0) => Some(0),
        (0, _) => Some(1),
        _ if dx == dy => Some(2),
        _ if dx == -dy => Some(3),
        _ => None,
    }
}

fn line_key(family: u8, p: LPos) -> LineKey {
    let c = match family {
        0 => p.y,
        1 => p.x,
        2 => p.y - p.x,
        _ => p.x + p.y,
    };
    (family, c)
}

fn param(family: u8, p: LPos) -> i64 {
    if family == 1 {
        p.y
    } else {
        p.x
    }
}

fn point_on(key: LineKey, t: i64) -> LPos {
    let (family, c) = key;
    match family {
        0 => LPos::new(t, c),
        1 => LPos::new(c, t),
        2 => LPos::new(t, t + c),
        _ => LPos::new(t, c - t),
    }
}

impl Assembler {
    /// `originals` become vertices `0..originals.len()` in this order.
    pub fn new(originals: &[LPos]) -> Self {
        let kinds = originals
            .iter()
            .map(|&p| (p, VertexKind::Original))
            .collect();
        Assembler {
            originals: originals.to_vec(),
            kinds,
            segments: Vec::new(),
        }
    }

    /// Registers a vertex; when several kinds land on one point the
    /// smallest (original, then steiner, then boundary) wins.
    pub fn add_vertex(&mut self, p: LPos, kind: VertexKind) {
        self.kinds
            .entry(p)
            .and_modify(|k| *k = (*k).min(kind))
            .or_insert(kind);
    }

    /// Adds a segment along one of the eight grade-2 directions. Endpoints
    /// that are not yet vertices become Steiner vertices.
    pub fn add_segment(&mut self, a: LPos, b: LPos) -> Result<()> {
        if a == b {
            return Ok(());
        }
        if family_of(a, b).is_none() {
            return Err(Error::InternalInvariantViolation(format!(
                "segment {a:?}-{b:?} is not axis-parallel or diagonal"
            )));
        }
        self.segments.push((a, b));
        Ok(())
    }

    pub fn finish(mut self, repair: bool) -> Result<Assembled> {
        for &(a, b) in &self.segments {
            self.kinds.entry(a).or_insert(VertexKind::Steiner);
            self.kinds.entry(b).or_insert(VertexKind::Steiner);
        }
        let mut repairs = 0;
        let (edges, crossings) = loop {
            let edges = self.split();
            let crossings = proper_crossings(&edges);
            if crossings.is_empty() || !repair {
                break (edges, crossings.len());
            }
            for (i, j) in crossings {
                let p = crossing_point(edges[i], edges[j])?;
                if !self.kinds.contains_key(&p) {
                    self.kinds.insert(p, VertexKind::Steiner);
                    repairs += 1;
                }
            }
        };

        let n_orig = self.originals.len();
        let original_set: HashSet<LPos> = self.originals.iter().copied().collect();
        let mut others: Vec<(LPos, VertexKind)> = self
            .kinds
            .iter()
            .filter(|(p, _)| !original_set.contains(p))
            .map(|(&p, &k)| (p, k))
            .collect();
        others.sort_unstable();
        let mut vertices: Vec<(LPos, VertexKind)> = self
            .originals
            .iter()
            .map(|&p| (p, VertexKind::Original))
            .collect();
        vertices.extend(others);
        let index: HashMap<LPos, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, &(p, _))| (p, i as u32))
            .collect();
        debug_assert_eq!(index.len(), vertices.len());
        debug_assert!(vertices[..n_orig].iter().all(|v| v.1 == VertexKind::Original));

        let mut out: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (index[&a], index[&b]);
                (u.min(v), u.max(v))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(Assembled {
            vertices,
            edges: out,
            repairs,
            crossings,
        })
    }

    /// Splits every covered line interval at the vertices lying on it.
    fn split(&self) -> Vec<(LPos, LPos)> {
        let mut intervals: HashMap<LineKey, Vec<(i64, i64)>> = HashMap::new();
        for &(a, b) in &self.segments {
            let family = family_of(a, b).expect("checked when added");
            let (ta, tb) = (param(family, a), param(family, b));
            intervals
                .entry(line_key(family, a))
                .or_default()
                .push((ta.min(tb), ta.max(tb)));
        }
        let mut stops: HashMap<LineKey, Vec<i64>> = HashMap::new();
        for &p in self.kinds.keys() {
            for family in 0..4 {
                let key = line_key(family, p);
                if intervals.contains_key(&key) {
                    stops.entry(key).or_default().push(param(family, p));
                }
            }
        }
        let mut keys: Vec<LineKey> = intervals.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::new();
        for key in keys {
            let mut ts = stops.remove(&key).unwrap_or_default();
            ts.sort_unstable();
            ts.dedup();
            let mut cover = vec![0i32; ts.len() + 1];
            for &(lo, hi) in &intervals[&key] {
                let i = ts.binary_search(&lo).expect("segment endpoints are vertices");
                let j = ts.binary_search(&hi).expect("segment endpoints are vertices");
                cover[i] += 1;
                cover[j] -= 1;
            }
            let mut running = 0;
            for k in 0..ts.len().saturating_sub(1) {
                running += cover[k];
                if running > 0 {
                    edges.push((point_on(key, ts[k]), point_on(key, ts[k + 1])));
                }
            }
        }
        edges
    }
}

fn cell_range(a: LPos, b: LPos, cell: i64) -> (i64, i64, i64, i64) {
    (
        a.x.min(b.x).div_euclid(cell),
        a.x.max(b.x).div_euclid(cell),
        a.y.min(b.y).div_euclid(cell),
        a.y.max(b.y).div_euclid(cell),
    )
}

fn properly_cross(a: LPos, b: LPos, c: LPos, d: LPos) -> bool {
    use std::cmp::Ordering::Equal;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal && o1 != o2 && o3 != o4
}

/// Index pairs of edges that cross at a point interior to both.
pub(crate) fn proper_crossings(edges: &[(LPos, LPos)]) -> Vec<(usize, usize)> {
    if edges.len() < 2 {
        return Vec::new();
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    let mut total_len: i128 = 0;
    for &(a, b) in edges {
        xmin = xmin.min(a.x.min(b.x));
        xmax = xmax.max(a.x.max(b.x));
        ymin = ymin.min(a.y.min(b.y));
        ymax = ymax.max(a.y.max(b.y));
        let (dx, dy) = b.sub(a);
        total_len += dx.abs().max(dy.abs()) as i128;
    }
    let extent = (xmax - xmin).max(ymax - ymin).max(1);
    let mean = (total_len / edges.len() as i128) as i64;
    let cell = mean.max(extent / 2048).max(1);

    let mut grid: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (cx0, cx1, cy0, cy1) = cell_range(a, b, cell);
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                grid.entry((cx, cy)).or_default().push(i as u32);
            }
        }
    }
    let mut found = Vec::new();
    for (&(cx, cy), members) in &grid {
        for (k, &i) in members.iter().enumerate() {
            let (a, b) = edges[i as usize];
            let ri = cell_range(a, b, cell);
            for &j in &members[k + 1..] {
                let (c, d) = edges[j as usize];
                let rj = cell_range(c, d, cell);
                // report each pair only in the first cell both occupy
                if (ri.0.max(rj.0), ri.2.max(rj.2)) != (cx, cy) {
                    continue;
                }
                if properly_cross(a, b, c, d) {
                    found.push((i.min(j) as usize, i.max(j) as usize));
                }
            }
        }
    }
    found.sort_unstable();
    found
}

fn crossing_point((a, b): (LPos, LPos), (c, d): (LPos, LPos)) -> Result<LPos> {
    let r = b.sub(a);
    let s = d.sub(c);
    let num = cross(c.sub(a), s);
    let den = cross(r, s);
    let x = r.0 as i128 * num;
    let y = r.1 as i128 * num;
    if den == 0 || x % den != 0 || y % den != 0 {
        return Err(Error::InternalInvariantViolation(format!(
            "crossing of {a:?}-{b:?} and {c:?}-{d:?} is not a lattice point"
        )));
    }
    Ok(LPos::new(a.x + (x / den) as i64, a.y + (y / den) as i64))
}
