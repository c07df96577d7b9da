//! Approximate mode for any grade.
//!
//! Ray directions `j·π/2^k` have irrational slopes for `k ≥ 3`, so this
//! kernel works in `f64`. Times and points are snapped to a grid of pitch
//! `1e-9` times the input extent before they are compared, which makes the
//! event order deterministic and merges crossings that agree up to rounding.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use super::sim::{self, Meeting, RayKernel, Reason};
use super::{BBox, RayId, RaySegment, StopCause, TiePolicy};
use crate::error::{Error, Result};
use crate::geom::{Coord, Point, Pos, RayTime};
use crate::graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};
use crate::pointset::PointSet;

const REL_TOL: f64 = 1e-9;

struct FloatRays {
    origins: Vec<(f64, f64)>,
    units: Vec<(f64, f64)>,
    /// xmin, xmax, ymin, ymax
    bounds: [f64; 4],
    tol: f64,
}

type QPt = (i64, i64);

impl FloatRays {
    fn ray(&self, r: usize) -> ((f64, f64), (f64, f64), usize) {
        let per = self.units.len();
        (self.origins[r / per], self.units[r % per], r % per)
    }

    fn q(&self, v: f64) -> i64 {
        (v / self.tol).round() as i64
    }

    fn qpt(&self, p: (f64, f64)) -> QPt {
        (self.q(p.0), self.q(p.1))
    }

    fn unq(&self, v: i64) -> f64 {
        v as f64 * self.tol
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

impl RayKernel for FloatRays {
    type Time = i64;
    type Pt = QPt;

    fn ray_count(&self) -> usize {
        self.origins.len() * self.units.len()
    }

    fn owner(&self, ray: usize) -> usize {
        ray / self.units.len()
    }

    fn exit(&self, ray: usize) -> (QPt, i64) {
        let (o, u, _) = self.ray(ray);
        let [xmin, xmax, ymin, ymax] = self.bounds;
        let mut t = f64::INFINITY;
        if u.0 > self.tol {
            t = t.min((xmax - o.0) / u.0);
        } else if u.0 < -self.tol {
            t = t.min((xmin - o.0) / u.0);
        }
        if u.1 > self.tol {
            t = t.min((ymax - o.1) / u.1);
        } else if u.1 < -self.tol {
            t = t.min((ymin - o.1) / u.1);
        }
        let t = t.max(0.0);
        let mut at = (o.0 + t * u.0, o.1 + t * u.1);
        at.0 = at.0.clamp(xmin, xmax);
        at.1 = at.1.clamp(ymin, ymax);
        (self.qpt(at), self.q(t))
    }

    fn meet(&self, r1: usize, r2: usize) -> Option<Meeting<QPt, i64>> {
        let (o1, u1, j1) = self.ray(r1);
        let (o2, u2, j2) = self.ray(r2);
        let w = (o2.0 - o1.0, o2.1 - o1.1);
        let den = cross(u1, u2);
        if den.abs() < 1e-12 {
            let half = self.units.len() / 2;
            if (j1 + half) % self.units.len() != j2 || cross(w, u1).abs() > self.tol {
                return None;
            }
            let along = dot(w, u1);
            if along <= self.tol {
                return None;
            }
            let t = self.q(along / 2.0);
            let at = (o1.0 + along / 2.0 * u1.0, o1.1 + along / 2.0 * u1.1);
            return Some(Meeting {
                at: self.qpt(at),
                t1: t,
                t2: t,
                head_on: true,
            });
        }
        let s1 = cross(w, u2) / den;
        let s2 = cross(w, u1) / den;
        let (q1, q2) = (self.q(s1), self.q(s2));
        if q1 < 0 || q2 < 0 {
            return None;
        }
        // crossings at an origin are snapped to the origin itself so that
        // all rays through an input point agree on its location
        let at = if q1 == 0 {
            o1
        } else if q2 == 0 {
            o2
        } else {
            (o1.0 + s1 * u1.0, o1.1 + s1 * u1.1)
        };
        Some(Meeting {
            at: self.qpt(at),
            t1: q1,
            t2: q2,
            head_on: false,
        })
    }
}

struct FloatRun {
    kernel: FloatRays,
    stops: Vec<sim::Stop<QPt, i64>>,
    multi_ties: usize,
}

fn run_float(points: &[Point], grade: u32, bbox: &BBox, tie: TiePolicy) -> Result<FloatRun> {
    if grade == 0 {
        return Err(Error::Config("grade must be at least 1".into()));
    }
    if grade > 12 {
        return Err(Error::Config(format!("grade {grade} is too large")));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    // validates ids and duplicate locations
    PointSet::with_extra(points.to_vec(), &[])?;
    let origins: Vec<(f64, f64)> = points.iter().map(|p| p.pos.to_f64()).collect();
    let bounds = [
        bbox.xmin.to_f64(),
        bbox.xmax.to_f64(),
        bbox.ymin.to_f64(),
        bbox.ymax.to_f64(),
    ];
    let extent = bounds.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let per = 1usize << (grade + 1);
    let units = (0..per)
        .map(|j| {
            let angle = j as f64 * PI / (1u64 << grade) as f64;
            let (s, c) = angle.sin_cos();
            // exact zeros on the axes keep axis rays from drifting
            let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
            (snap(c), snap(s))
        })
        .collect();
    let kernel = FloatRays {
        origins,
        units,
        bounds,
        tol: REL_TOL * extent,
    };
    let tie_keys: Vec<(u32, u16)> = (0..kernel.ray_count())
        .map(|r| (points[r / per].id, (r % per) as u16))
        .collect();
    let outcome = sim::run(&kernel, &tie_keys, tie);
    Ok(FloatRun {
        kernel,
        stops: outcome.stops,
        multi_ties: outcome.multi_ties,
    })
}

fn float_pos(v: (f64, f64)) -> Pos {
    let c = |x: f64| Coord::from_f64(x).unwrap_or_else(Coord::zero);
    Pos::new(c(v.0), c(v.1))
}

/// Simulates the ray competition in floating point for any grade.
pub fn simulate_rays_approx(
    points: &[Point],
    grade: u32,
    bbox: &BBox,
    tie: TiePolicy,
) -> Result<Vec<RaySegment>> {
    let run = run_float(points, grade, bbox, tie)?;
    let k = &run.kernel;
    let per = k.units.len();
    let ray_id = |r: usize| RayId {
        owner: points[r / per].id,
        dir: (r % per) as u16,
    };
    Ok(run
        .stops
        .iter()
        .enumerate()
        .map(|(r, stop)| RaySegment {
            owner: points[r / per].id,
            dir: (r % per) as u16,
            stop_point: float_pos((k.unq(stop.at.0), k.unq(stop.at.1))),
            stop_time: RayTime::axis(Coord::from_f64(k.unq(stop.time)).unwrap_or_else(Coord::zero)),
            stop_cause: match stop.reason {
                Reason::Boundary => StopCause::BBox,
                Reason::Collision(o) => StopCause::Collision(ray_id(o)),
                Reason::HeadOn(o) => StopCause::Parallel(ray_id(o)),
            },
        })
        .collect())
}

/// Builds `M_k` for any grade in approximate mode. Vertex coordinates are
/// the binary values of the snapped floating-point positions; the graph is
/// tagged `approximate` in its metadata.
pub fn build_emanation_approx(
    points: &[Point],
    grade: u32,
    margin: &Coord,
    tie: TiePolicy,
) -> Result<PlaneGraph> {
    let bbox = BBox::around(points, margin)?;
    let run = run_float(points, grade, &bbox, tie)?;
    let k = &run.kernel;

    let mut kinds: BTreeMap<QPt, VertexKind> = BTreeMap::new();
    for stop in &run.stops {
        let kind = match stop.reason {
            Reason::Boundary => VertexKind::Boundary,
            _ => VertexKind::Steiner,
        };
        kinds
            .entry(stop.at)
            .and_modify(|v| *v = (*v).min(kind))
            .or_insert(kind);
    }
    let originals: Vec<QPt> = k.origins.iter().map(|&o| k.qpt(o)).collect();
    for &o in &originals {
        kinds.remove(&o);
    }
    let mut vertices: Vec<(QPt, VertexKind)> =
        originals.iter().map(|&o| (o, VertexKind::Original)).collect();
    vertices.extend(kinds);
    let index: HashMap<QPt, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, &(p, _))| (p, i as u32))
        .collect();
    let coords: Vec<(f64, f64)> = vertices
        .iter()
        .map(|&(p, _)| (k.unq(p.0), k.unq(p.1)))
        .collect();

    // every vertex on a ray's trace splits it
    let mut edges = Vec::new();
    for (r, stop) in run.stops.iter().enumerate() {
        let (o, u, _) = k.ray(r);
        let length = k.unq(stop.time);
        if stop.time == 0 {
            continue;
        }
        let mut on_ray: Vec<(f64, u32)> = coords
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| {
                let d = (c.0 - o.0, c.1 - o.1);
                let t = dot(d, u);
                let off = cross(u, d).abs();
                (off <= 4.0 * k.tol && t >= -k.tol && t <= length + k.tol).then_some((t, i as u32))
            })
            .collect();
        on_ray.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        on_ray.dedup_by_key(|v| v.1);
        for pair in on_ray.windows(2) {
            if pair[0].1 != pair[1].1 {
                edges.push((pair[0].1, pair[1].1));
            }
        }
        debug_assert!(index.contains_key(&stop.at));
    }
    let vertices = vertices
        .iter()
        .enumerate()
        .map(|(i, &(_, kind))| Vertex {
            id: i as u32,
            pos: if i < points.len() {
                points[i].pos.clone()
            } else {
                float_pos(coords[i])
            },
            kind,
        })
        .collect();
    let mut graph = PlaneGraph::new(
        vertices,
        edges,
        GraphMeta {
            algorithm: format!("emanation{grade}"),
            grade: Some(grade),
            tie_policy: Some(tie.to_string()),
            ..GraphMeta::default()
        },
    );
    graph.add_diagnostic("approximate", true);
    graph.add_diagnostic("multi_ray_ties", run.multi_ties);
    Ok(graph)
}
