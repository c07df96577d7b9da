//! Simplified emanation graph (SEG) of grade 2.
//!
//! The graph is built directly from the points. For each of the eight
//! frames, every point `p` looks for its top neighbor `p_s`: the first point
//! met by two sweep lines moving up `p`'s cones `C_a1r3` and `C_r3a2` along
//! their bisectors. The first points of the four flanking cones are
//! candidates whose rays might cut the connection off; if none of them does,
//! `p` is joined to `p_s` by an elbow made of `p`'s vertical ray and one of
//! `p_s`'s downward diagonal rays.

pub(crate) mod cones;
mod race;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assemble::Assembler;
use crate::emanation::TiePolicy;
use crate::error::{Error, Result};
use crate::geom::{ConeId, Frame, Point, Pos, RayTime};
use crate::graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};
use crate::kernel::{cross, dot_half, sign_sqrt2, LPos, LTime};
use crate::pointset::PointSet;
use crate::rangetree::{build_index, query_first_in_cone, ConeIndex};

use cones::{is_top, precedes, slot, SEARCHED};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopNeighbor {
    pub p: u32,
    pub p_s: u32,
    /// `C_a1r3` or `C_r3a2`.
    pub cone: ConeId,
    /// Projection of `p_s − p` onto the cone's bisector guideline. The
    /// guidelines of both top cones have the same length, so keys of the
    /// two cones are directly comparable.
    pub sweep_key: RayTime,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub p_c: u32,
    pub cone: ConeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elbow {
    pub p: u32,
    pub p_s: u32,
    pub frame: Frame,
    /// `None` when `p_s` lies on `p`'s vertical ray.
    pub bend: Option<Pos>,
}

/// How cone queries are answered while building.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeighborQueries {
    /// Linear scan per point.
    Naive,
    /// Range trees per frame and cone.
    RangeTree,
    /// Naive below 2048 points, range trees above.
    #[default]
    Auto,
}

/// How a candidate is tested against a connection while building.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockingRule {
    /// Race every ray of the candidate against both legs of the elbow.
    #[default]
    RayRace,
    /// The closed-form cone-pair conditions of [`is_blocked`].
    ConditionTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegConfig {
    /// Resolves simultaneous arrivals in the ray race.
    pub tie: TiePolicy,
    pub planarity_repair: bool,
    pub record_diagnostics: bool,
    pub queries: NeighborQueries,
    pub blocking: BlockingRule,
}

impl Default for SegConfig {
    fn default() -> Self {
        SegConfig {
            tie: TiePolicy::DeterministicLex,
            planarity_repair: true,
            record_diagnostics: false,
            queries: NeighborQueries::Auto,
            blocking: BlockingRule::RayRace,
        }
    }
}

/// Answers "first point of `p`'s cone" for the sweeps of a frame.
pub trait NeighborSource {
    fn points(&self) -> &PointSet;

    /// Index of the first point of `cone` seen from point index `p`.
    fn first_in_cone(&self, p: usize, frame: Frame, cone: ConeId) -> Option<usize>;
}

/// Exact linear scan.
pub struct NaiveScan<'a>(pub &'a PointSet);

impl NeighborSource for NaiveScan<'_> {
    fn points(&self) -> &PointSet {
        self.0
    }

    fn first_in_cone(&self, p: usize, frame: Frame, cone: ConeId) -> Option<usize> {
        let set = self.0;
        let origin = set.lpos(p);
        (0..set.len())
            .filter(|&q| cones::in_cone(set.lpos(q).sub(origin), frame, cone))
            .reduce(|b, q| if precedes(set, frame, p, (q, cone), (b, cone)) { q } else { b })
    }
}

/// Range trees for every frame and searched cone.
pub struct RangeTreeSource<'a> {
    set: &'a PointSet,
    indexes: Vec<ConeIndex>,
}

impl<'a> RangeTreeSource<'a> {
    pub fn new(set: &'a PointSet) -> Self {
        let indexes = Frame::ALL
            .iter()
            .flat_map(|&f| SEARCHED.map(|c| build_index(set, f, c)))
            .collect();
        RangeTreeSource { set, indexes }
    }
}

impl NeighborSource for RangeTreeSource<'_> {
    fn points(&self) -> &PointSet {
        self.set
    }

    fn first_in_cone(&self, p: usize, frame: Frame, cone: ConeId) -> Option<usize> {
        let index = &self.indexes[frame.step() as usize * 6 + slot(cone)];
        query_first_in_cone(index, self.set, p)
    }
}

fn top_from(
    set: &PointSet,
    frame: Frame,
    p: usize,
    a1: Option<usize>,
    a2: Option<usize>,
) -> Option<(usize, ConeId)> {
    match (a1, a2) {
        (None, None) => None,
        (Some(q), None) => Some((q, ConeId::A1R3)),
        (None, Some(q)) => Some((q, ConeId::R3A2)),
        (Some(q1), Some(q2)) => {
            if precedes(set, frame, p, (q2, ConeId::R3A2), (q1, ConeId::A1R3)) {
                Some((q2, ConeId::R3A2))
            } else {
                Some((q1, ConeId::A1R3))
            }
        }
    }
}

fn index_of(set: &PointSet, id: u32) -> Result<usize> {
    set.index_of(id)
        .ok_or_else(|| Error::InternalInvariantViolation(format!("unknown point id {id}")))
}

/// The top neighbor of point index `p` in `frame`.
pub fn select_top_neighbor(src: &dyn NeighborSource, p: usize, frame: Frame) -> Option<TopNeighbor> {
    let set = src.points();
    let a1 = src.first_in_cone(p, frame, ConeId::A1R3);
    let a2 = src.first_in_cone(p, frame, ConeId::R3A2);
    let (q, cone) = top_from(set, frame, p, a1, a2)?;
    let (a, b) = dot_half(frame.half(cones::key_half(cone)), set.lpos(q).sub(set.lpos(p)));
    Some(TopNeighbor {
        p: set.point(p).id,
        p_s: set.point(q).id,
        cone,
        sweep_key: set.lattice().time(LTime {
            a: a as i64,
            b: b as i64,
        }),
    })
}

/// First points of the four flanking cones of point index `p`, in cone order.
pub fn select_candidates(src: &dyn NeighborSource, p: usize, frame: Frame) -> Vec<Candidate> {
    let set = src.points();
    SEARCHED
        .into_iter()
        .filter(|c| !is_top(*c))
        .filter_map(|cone| {
            src.first_in_cone(p, frame, cone).map(|q| Candidate {
                p_c: set.point(q).id,
                cone,
            })
        })
        .collect()
}

/// Whether candidate `pc` cuts off the connection from `p` to `ps`. Cones
/// left of the vertical axis use the mirror image of the right-side rules.
fn blocked(set: &PointSet, frame: Frame, p: usize, ps: (usize, ConeId), pc: (usize, ConeId)) -> Result<bool> {
    if !is_top(ps.1) || is_top(pc.1) || !cones::searched(pc.1) {
        return Err(Error::InternalInvariantViolation(format!(
            "cannot test {} as top neighbor against candidate in {}",
            ps.1, pc.1
        )));
    }
    let left = matches!(pc.1, ConeId::A2R4 | ConeId::R4B2);
    let (top, cand) = if left {
        (ps.1.mirrored(), pc.1.mirrored())
    } else {
        (ps.1, pc.1)
    };
    let half = |logical: u8| frame.half(if left { (24 - logical) % 16 } else { logical });
    let (s, c, o) = (set.lpos(ps.0), set.lpos(pc.0), set.lpos(p));
    let below = |h: u8, d: (i64, i64)| {
        let (a, b) = dot_half(half(h), d);
        sign_sqrt2(a, b).is_lt()
    };
    let sc = s.sub(c);
    let allowed = match (top, cand) {
        // p_s left of p_c and below the 135° line through p_c
        (ConeId::A1R3, ConeId::B1R2) => below(0, sc) && below(2, sc),
        // p_s swept before p_c by the sweep orthogonal to b1
        (ConeId::A1R3, ConeId::R2A1) => below(1, sc),
        // p_s swept before p_c by the sweep orthogonal to r2
        (ConeId::R3A2, ConeId::B1R2) => below(2, sc),
        // horizontal offset of p_s smaller than its height above p_c
        (ConeId::R3A2, ConeId::R2A1) => {
            let (dx, zx) = dot_half(half(0), s.sub(o));
            let (dy, zy) = dot_half(half(4), sc);
            debug_assert!(zx == 0 && zy == 0, "axis guidelines are integral");
            dx.abs() < dy.abs()
        }
        _ => unreachable!("cone tags checked above"),
    };
    Ok(!allowed)
}

/// Whether candidate `cand` blocks the connection of `top`.
pub fn is_blocked(points: &PointSet, top: &TopNeighbor, cand: &Candidate, frame: Frame) -> Result<bool> {
    let p = index_of(points, top.p)?;
    let ps = index_of(points, top.p_s)?;
    let pc = index_of(points, cand.p_c)?;
    blocked(points, frame, p, (ps, top.cone), (pc, cand.cone))
}

/// Bend of the elbow from `p` up its vertical ray and down `p_s`'s diagonal.
fn bend_point(frame: Frame, p: LPos, ps: LPos, cone: ConeId) -> Option<LPos> {
    let up = frame.dir(2).vector();
    let down = if cone == ConeId::A1R3 {
        frame.dir(5).vector()
    } else {
        frame.dir(7).vector()
    };
    // the two directions are 135° apart, so |cross| = 1
    let t = cross(ps.sub(p), down) / cross(up, down);
    let bend = p.step(up, t as i64);
    (bend != ps).then_some(bend)
}

pub fn connect(points: &PointSet, top: &TopNeighbor, frame: Frame) -> Result<Elbow> {
    let p = index_of(points, top.p)?;
    let ps = index_of(points, top.p_s)?;
    let bend = bend_point(frame, points.lpos(p), points.lpos(ps), top.cone);
    Ok(Elbow {
        p: top.p,
        p_s: top.p_s,
        frame,
        bend: bend.map(|b| points.lattice().to_exact(b)),
    })
}

type FrameHits = Vec<[Option<u32>; 6]>;

fn use_trees(queries: NeighborQueries, n: usize) -> bool {
    match queries {
        NeighborQueries::Naive => false,
        NeighborQueries::RangeTree => true,
        NeighborQueries::Auto => n > 2048,
    }
}

fn tree_hits(set: &PointSet, frame: Frame) -> FrameHits {
    let mut hits: FrameHits = vec![[None; 6]; set.len()];
    // one index at a time keeps the working set small
    for (k, &cone) in SEARCHED.iter().enumerate() {
        let index = build_index(set, frame, cone);
        let found: Vec<Option<u32>> = (0..set.len())
            .into_par_iter()
            .map(|p| query_first_in_cone(&index, set, p).map(|q| q as u32))
            .collect();
        for (h, q) in hits.iter_mut().zip(found) {
            h[k] = q;
        }
    }
    hits
}

/// Input indices sorted along a Z-order curve over the lattice positions.
fn morton_order(pos: &[LPos]) -> Vec<usize> {
    let (xmin, ymin) = pos.iter().fold((i64::MAX, i64::MAX), |(x, y), p| (x.min(p.x), y.min(p.y)));
    let span = pos.iter().map(|p| (p.x - xmin).max(p.y - ymin)).max().unwrap_or(0) as u64;
    let shift = (64 - span.leading_zeros()).saturating_sub(32);
    let spread = |v: i64| {
        let mut v = ((v as u64) >> shift) & 0xffff_ffff;
        v = (v | v << 16) & 0x0000_ffff_0000_ffff;
        v = (v | v << 8) & 0x00ff_00ff_00ff_00ff;
        v = (v | v << 4) & 0x0f0f_0f0f_0f0f_0f0f;
        v = (v | v << 2) & 0x3333_3333_3333_3333;
        (v | v << 1) & 0x5555_5555_5555_5555
    };
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by_key(|&i| (spread(pos[i].x - xmin) | spread(pos[i].y - ymin) << 1, i));
    order
}

fn add_elbow(asm: &mut Assembler, a: LPos, b: LPos, bend: Option<LPos>) -> Result<()> {
    match bend {
        Some(m) => {
            asm.add_vertex(m, VertexKind::Steiner);
            asm.add_segment(a, m)?;
            asm.add_segment(m, b)
        }
        None => asm.add_segment(a, b),
    }
}

/// Union-find over vertex indices.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already one set.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Builds the SEG of `points`.
pub fn build_seg(points: &[Point], config: &SegConfig) -> Result<PlaneGraph> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let input = PointSet::new(points.to_vec())?;
    let n = input.len();
    // Queries run over a spatially sorted copy; `orig` maps back to input
    // indices, which are the output vertex ids.
    let orig = morton_order(input.lattice_positions());
    let set = PointSet::new(orig.iter().map(|&i| points[i].clone()).collect())?;
    let trees = use_trees(config.queries, n);
    let all_hits: Vec<FrameHits> = if trees {
        Frame::ALL.iter().map(|&f| tree_hits(&set, f)).collect()
    } else {
        let naive: Vec<cones::Hits> = (0..n).into_par_iter().map(|p| cones::scan_all_frames(&set, p)).collect();
        Frame::ALL
            .iter()
            .map(|f| naive.iter().map(|h| h[f.step() as usize]).collect())
            .collect()
    };

    // every point any cone search found from p, in any frame
    let near: Vec<Vec<u32>> = (0..n)
        .map(|p| {
            let mut v: Vec<u32> = all_hits.iter().flat_map(|fh| fh[p].iter().flatten().copied()).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();

    let mut asm = Assembler::new(input.lattice_positions());
    let mut connected: HashSet<(u32, u32)> = HashSet::new();
    let mut connections = 0usize;
    let mut refused: Vec<(usize, usize, Option<LPos>)> = Vec::new();
    let mut racers: Vec<usize> = Vec::with_capacity(96);
    for frame in Frame::ALL {
        let frame_hits = &all_hits[frame.step() as usize];
        for (p, hits) in frame_hits.iter().enumerate() {
            let hit = |c: ConeId| hits[slot(c)].map(|q| q as usize);
            let Some((ps, cone)) = top_from(&set, frame, p, hit(ConeId::A1R3), hit(ConeId::R3A2)) else {
                continue;
            };
            let pair = ((p as u32).min(ps as u32), (p as u32).max(ps as u32));
            if connected.contains(&pair) {
                continue;
            }
            let (a, b) = (set.lpos(p), set.lpos(ps));
            let bend = bend_point(frame, a, b, cone);
            let legs = race::elbow_legs(&set, frame, p, ps, cone, bend);
            let is_blocked = match config.blocking {
                BlockingRule::RayRace => {
                    let (lo, hi) = race::reach_box(&legs);
                    racers.clear();
                    racers.extend(near[p].iter().chain(&near[ps]).map(|&q| q as usize).filter(|&pc| {
                        let q = set.lpos(pc);
                        pc != p && pc != ps && lo.x <= q.x && q.x <= hi.x && lo.y <= q.y && q.y <= hi.y
                    }));
                    racers.sort_unstable();
                    racers.dedup();
                    racers.iter().any(|&pc| race::cuts(&set, config.tie, &legs, pc))
                }
                BlockingRule::ConditionTable => {
                    let mut any = false;
                    for c in [ConeId::B1R2, ConeId::R2A1, ConeId::A2R4, ConeId::R4B2] {
                        if let Some(pc) = hit(c) {
                            if blocked(&set, frame, p, (ps, cone), (pc, c))? {
                                any = true;
                                break;
                            }
                        }
                    }
                    any
                }
            };
            if is_blocked {
                refused.push((p, ps, bend));
                continue;
            }
            add_elbow(&mut asm, a, b, bend)?;
            connected.insert(pair);
            connections += 1;
        }
    }

    let mut out = asm.clone().finish(config.planarity_repair)?;
    // Blocked attempts that would join two components are emitted anyway, in
    // attempt order, so the output stays connected.
    let mut components = Components::new(out.vertices.len());
    for &(u, v) in &out.edges {
        components.union(u as usize, v as usize);
    }
    let mut fallbacks = 0usize;
    for &(p, ps, bend) in &refused {
        if components.union(orig[p], orig[ps]) {
            add_elbow(&mut asm, set.lpos(p), set.lpos(ps), bend)?;
            fallbacks += 1;
        }
    }
    if fallbacks > 0 {
        out = asm.finish(config.planarity_repair)?;
    }
    let lattice = set.lattice();
    let vertices = out
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &(p, kind))| Vertex {
            id: i as u32,
            pos: lattice.to_exact(p),
            kind,
        })
        .collect();
    let mut graph = PlaneGraph::new(
        vertices,
        out.edges,
        GraphMeta {
            algorithm: "seg".into(),
            grade: Some(2),
            tie_policy: Some(config.tie.to_string()),
            ..GraphMeta::default()
        },
    );
    graph.add_diagnostic("planarity_repairs", out.repairs);
    graph.add_diagnostic("connectivity_fallbacks", fallbacks);
    if !config.planarity_repair {
        graph.add_diagnostic("proper_crossings", out.crossings);
    }
    if config.record_diagnostics {
        graph.add_diagnostic("connections", connections);
        graph.add_diagnostic("blocked_connections", refused.len());
        graph.add_diagnostic("neighbor_queries", if trees { "range-tree" } else { "naive" });
    }
    Ok(graph)
}

#[cfg(test)]
mod tests;
