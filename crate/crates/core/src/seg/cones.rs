//! Cone membership and sweep orders shared by the naive scan and the range
//! trees.

use std::cmp::Ordering;

use crate::geom::{ConeId, Frame};
use crate::kernel::{cmp_dot_half, cross_half_sign, dot, dot_half, half_dir_f64, sign_sqrt2};
use crate::pointset::PointSet;

/// Cones with a sweep order, in slot order.
pub(crate) const SEARCHED: [ConeId; 6] = [
    ConeId::B1R2,
    ConeId::R2A1,
    ConeId::A1R3,
    ConeId::R3A2,
    ConeId::A2R4,
    ConeId::R4B2,
];

pub(crate) fn searched(cone: ConeId) -> bool {
    !matches!(cone, ConeId::R1B1 | ConeId::B2R5)
}

pub(crate) fn slot(cone: ConeId) -> usize {
    debug_assert!(searched(cone));
    cone as usize - 1
}

pub(crate) fn is_top(cone: ConeId) -> bool {
    matches!(cone, ConeId::A1R3 | ConeId::R3A2)
}

/// Logical half-direction whose projection orders the cone's sweep: the
/// bisectors a1 and a2 for the top cones, r1 or r5 for the candidate cones.
pub(crate) fn key_half(cone: ConeId) -> u8 {
    match cone {
        ConeId::A1R3 => 3,
        ConeId::R3A2 => 5,
        ConeId::B1R2 | ConeId::R2A1 => 0,
        ConeId::A2R4 | ConeId::R4B2 => 8,
        ConeId::R1B1 | ConeId::B2R5 => unreachable!("{cone} has no sweep order"),
    }
}

/// Whether the lattice direction `d` lies in `cone` of `frame`.
pub(crate) fn in_cone(d: (i64, i64), frame: Frame, cone: ConeId) -> bool {
    debug_assert!(searched(cone));
    let lo = cone.lower_half();
    cross_half_sign(frame.half(lo), d) != Ordering::Less
        && cross_half_sign(frame.half(lo + 1), d) == Ordering::Less
}

/// The 22.5° sector `[s·22.5°, (s+1)·22.5°)` containing `d ≠ 0`.
pub(crate) fn sector(d: (i64, i64)) -> usize {
    let (x, y) = d;
    let octant = if y >= 0 && x > 0 {
        if y < x { 0 } else { 1 }
    } else if x <= 0 && y > 0 {
        if -x < y { 2 } else { 3 }
    } else if y <= 0 && x < 0 {
        if -y < -x { 4 } else { 5 }
    } else if x < -y {
        6
    } else {
        7
    };
    2 * octant + usize::from(cross_half_sign(2 * octant + 1, d) != Ordering::Less)
}

/// Whether `a` comes before `b` in `p`'s sweep. Both are `(point index,
/// cone)`; top-cone keys of the two top cones are compared directly. Equal
/// keys fall back to squared distance (top cones) or the vertical offset
/// (candidate cones), then to the point id.
pub(crate) fn precedes(
    set: &PointSet,
    frame: Frame,
    p: usize,
    a: (usize, ConeId),
    b: (usize, ConeId),
) -> bool {
    let origin = set.lpos(p);
    let (da, db) = (set.lpos(a.0).sub(origin), set.lpos(b.0).sub(origin));
    let ka = dot_half(frame.half(key_half(a.1)), da);
    let kb = dot_half(frame.half(key_half(b.1)), db);
    let order = sign_sqrt2(ka.0 - kb.0, ka.1 - kb.1)
        .then_with(|| {
            if is_top(a.1) {
                dot(da, da).cmp(&dot(db, db))
            } else {
                cmp_dot_half(frame.half(4), da, db)
            }
        })
        .then_with(|| set.point(a.0).id.cmp(&set.point(b.0).id));
    order == Ordering::Less
}

/// First point of each searched cone, per frame, for one apex.
pub(crate) type Hits = [[Option<u32>; 6]; 8];

/// Exact linear scan filling all 48 `(frame, cone)` slots of apex `p` in
/// one pass: a direction's sector fixes its cone in every frame.
pub(crate) fn scan_all_frames(set: &PointSet, p: usize) -> Hits {
    let mut hits: Hits = [[None; 6]; 8];
    let mut best_key = [[f64::INFINITY; 6]; 8];
    let slack = 1e-10 * (set.magnitude() + 1.0);
    let origin = set.lpos(p);
    for q in 0..set.len() {
        if q == p {
            continue;
        }
        let d = set.lpos(q).sub(origin);
        let sec = sector(d);
        let df = (d.0 as f64, d.1 as f64);
        // cones with an odd lower half start in odd sectors
        let first = if sec % 2 == 1 { 1 } else { 2 };
        for c in (first..=6).step_by(2) {
            let s = ((sec + 16 - c) % 16) / 2;
            let frame = Frame::ALL[s];
            let cone = ConeId::ALL[c];
            let k = slot(cone);
            let h = half_dir_f64(frame.half(key_half(cone)));
            let key = h.0 * df.0 + h.1 * df.1;
            let take = match hits[s][k] {
                None => true,
                Some(_) if key < best_key[s][k] - slack => true,
                Some(_) if key > best_key[s][k] + slack => false,
                Some(b) => precedes(set, frame, p, (q, cone), (b as usize, cone)),
            };
            if take {
                hits[s][k] = Some(q as u32);
                best_key[s][k] = key;
            }
        }
    }
    hits
}
