//! Slow reference implementations the acceptance suite checks against.

use std::collections::BTreeMap;

use emanet::emanation::{RaySegment, StopCause};
use emanet::{ray_intersection, BBox, Coord, Dir, PlaneGraph, Point, Pos, RayTime};

/// (stop point, stop time, cause: 0 box / 1 collision / 2 head-on, other ray)
pub type Stop = (Pos, RayTime, u8, Option<(u32, u16)>);

pub fn as_stop(r: &RaySegment) -> Stop {
    let (kind, other) = match r.stop_cause {
        StopCause::BBox => (0, None),
        StopCause::Collision(o) => (1, Some((o.owner, o.dir))),
        StopCause::Parallel(o) => (2, Some((o.owner, o.dir))),
    };
    (r.stop_point.clone(), r.stop_time.clone(), kind, other)
}

/// Stop of every ray as the fixed point of "a ray stops at the first
/// crossing reached by another live ray strictly earlier, or at the same
/// time by a head-on ray or by a smaller `(owner, dir)` ray", iterated from
/// "every ray reaches the box". Rays are ordered by owner index, then
/// direction index.
pub fn fixed_point_stops(points: &[Point], grade: u32, bbox: &BBox) -> Vec<Stop> {
    let per = 1usize << (grade + 1);
    let step = 8 / per;
    let rays: Vec<(usize, Dir)> = (0..points.len())
        .flat_map(|i| (0..per).map(move |j| (i, Dir::new((j * step) as u8).unwrap())))
        .collect();
    let key = |r: usize| (points[rays[r].0].id, (r % per) as u16);

    let exits: Vec<(Pos, RayTime)> = rays
        .iter()
        .map(|&(i, d)| {
            let o = &points[i].pos;
            let (vx, vy) = d.vector();
            let mut limits = Vec::new();
            if vx > 0 {
                limits.push(&bbox.xmax - &o.x);
            }
            if vx < 0 {
                limits.push(&o.x - &bbox.xmin);
            }
            if vy > 0 {
                limits.push(&bbox.ymax - &o.y);
            }
            if vy < 0 {
                limits.push(&o.y - &bbox.ymin);
            }
            let s = limits.into_iter().min().unwrap();
            let at = Pos::new(
                &o.x + &(&s * &Coord::from_int(vx)),
                &o.y + &(&s * &Coord::from_int(vy)),
            );
            (at, d.time_for_steps(s))
        })
        .collect();

    // crossings[r]: (point, my time, other ray, other time, head-on)
    let mut crossings: Vec<Vec<(Pos, RayTime, usize, RayTime, bool)>> = vec![Vec::new(); rays.len()];
    for r1 in 0..rays.len() {
        for r2 in 0..rays.len() {
            if rays[r1].0 == rays[r2].0 {
                continue;
            }
            let (o1, d1) = (&points[rays[r1].0].pos, rays[r1].1);
            let (o2, d2) = (&points[rays[r2].0].pos, rays[r2].1);
            if let Some((at, t1, t2)) = ray_intersection(o1, d1, o2, d2) {
                if t1 <= exits[r1].1 && t2 <= exits[r2].1 {
                    crossings[r1].push((at, t1, r2, t2, d2 == d1.opposite()));
                }
            }
        }
    }

    let mut stop: Vec<RayTime> = exits.iter().map(|e| e.1.clone()).collect();
    let mut cause: Vec<Option<(usize, u8, usize)>> = vec![None; rays.len()];
    for _ in 0..10 * rays.len() + 10 {
        let mut next: Vec<RayTime> = exits.iter().map(|e| e.1.clone()).collect();
        let mut next_cause: Vec<Option<(usize, u8, usize)>> = vec![None; rays.len()];
        for r in 0..rays.len() {
            let mut by_point: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
            for (k, c) in crossings[r].iter().enumerate() {
                by_point.entry(vec![c.0.x.to_string(), c.0.y.to_string()]).or_default().push(k);
            }
            for group in by_point.values() {
                let t = &crossings[r][group[0]].1;
                if *t > next[r] {
                    continue;
                }
                let alive_at = |k: usize, when: &RayTime| stop[crossings[r][k].2] >= *when;
                let earlier = group
                    .iter()
                    .copied()
                    .filter(|&k| crossings[r][k].3 < *t && alive_at(k, &crossings[r][k].3))
                    .min_by_key(|&k| key(crossings[r][k].2));
                let found = if let Some(k) = earlier {
                    Some((k, 1u8))
                } else {
                    let same: Vec<usize> = group
                        .iter()
                        .copied()
                        .filter(|&k| crossings[r][k].3 == *t && alive_at(k, t))
                        .collect();
                    if let Some(&k) = same.iter().find(|&&k| crossings[r][k].4) {
                        Some((k, 2u8))
                    } else {
                        // head-on pairs among the others stop each other first
                        let paired = |k: usize| {
                            same.iter()
                                .any(|&q| rays[crossings[r][q].2].1 == rays[crossings[r][k].2].1.opposite())
                        };
                        same.iter()
                            .copied()
                            .filter(|&k| !paired(k))
                            .min_by_key(|&k| key(crossings[r][k].2))
                            .filter(|&k| key(crossings[r][k].2) < key(r))
                            .map(|k| (k, 1u8))
                    }
                };
                if let Some((k, kind)) = found {
                    if *t < next[r] || (*t == next[r] && next_cause[r].is_none()) {
                        next[r] = t.clone();
                        next_cause[r] = Some((k, kind, crossings[r][k].2));
                    }
                }
            }
        }
        if next == stop && next_cause == cause {
            return (0..rays.len())
                .map(|r| match cause[r] {
                    Some((k, kind, o)) => {
                        let c = &crossings[r][k];
                        (c.0.clone(), c.1.clone(), kind, Some(key(o)))
                    }
                    None => (exits[r].0.clone(), exits[r].1.clone(), 0, None),
                })
                .collect();
        }
        stop = next;
        cause = next_cause;
    }
    panic!("fixed-point iteration did not settle");
}

/// Single-source distances by Bellman–Ford relaxation over both edge
/// directions.
pub fn bellman_ford(graph: &PlaneGraph, source: u32) -> Vec<f64> {
    let pos = graph.positions_f64();
    let len = |u: u32, v: u32| {
        let (a, b) = (pos[u as usize], pos[v as usize]);
        (a.0 - b.0).hypot(a.1 - b.1)
    };
    let mut dist = vec![f64::INFINITY; graph.vertex_count()];
    dist[source as usize] = 0.0;
    for _ in 0..graph.vertex_count() {
        let mut changed = false;
        for &(u, v) in &graph.edges {
            let w = len(u, v);
            for (a, b) in [(u, v), (v, u)] {
                if dist[a as usize] + w < dist[b as usize] {
                    dist[b as usize] = dist[a as usize] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}
