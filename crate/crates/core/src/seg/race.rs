//! Exact ray race between a candidate and an elbow.
//!
//! An elbow is the meeting of two rays: `p`'s vertical ray and `p_s`'s
//! downward diagonal, or `p`'s and `p_s`'s facing vertical rays when `p_s`
//! is straight above. A candidate blocks the elbow when one of its eight
//! rays, not stopped earlier by a ray of `p` or `p_s`, reaches a leg at or
//! before the meeting point and no later than the leg's own ray
//! (simultaneous arrivals go to the tie policy).

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::emanation::TiePolicy;
use crate::geom::{ConeId, Dir, Frame};
use crate::kernel::{ray_meet, LPos, LTime};
use crate::pointset::PointSet;

#[derive(Copy, Clone, Debug)]
pub(crate) struct Leg {
    pub origin: LPos,
    pub owner: usize,
    pub dir: Dir,
    /// Steps of `dir` from `origin` to the meeting point.
    pub steps: i64,
}

fn steps_to(origin: LPos, dir: Dir, target: LPos) -> i64 {
    let v = dir.vector();
    if v.0 != 0 {
        (target.x - origin.x) / v.0
    } else {
        (target.y - origin.y) / v.1
    }
}

/// The two legs of the connection from `p` to `ps`; `bend` as returned by
/// the elbow construction.
pub(crate) fn elbow_legs(set: &PointSet, frame: Frame, p: usize, ps: usize, cone: ConeId, bend: Option<LPos>) -> [Leg; 2] {
    let (a, b) = (set.lpos(p), set.lpos(ps));
    let up = frame.dir(2);
    match bend {
        Some(m) => {
            let down = if cone == ConeId::A1R3 {
                frame.dir(5)
            } else {
                frame.dir(7)
            };
            [
                Leg { origin: a, owner: p, dir: up, steps: steps_to(a, up, m) },
                Leg { origin: b, owner: ps, dir: down, steps: steps_to(b, down, m) },
            ]
        }
        None => {
            // both origins are on the even lattice, so the midpoint is a lattice point
            let half = steps_to(a, up, b) / 2;
            [
                Leg { origin: a, owner: p, dir: up, steps: half },
                Leg { origin: b, owner: ps, dir: up.opposite(), steps: half },
            ]
        }
    }
}

/// Whether the leg's ray survives a simultaneous arrival with a candidate ray.
fn leg_wins_tie(tie: TiePolicy, leg: (u32, u8), cand: (u32, u8)) -> bool {
    match tie {
        TiePolicy::DeterministicLex => leg < cand,
        TiePolicy::Seeded(seed) => {
            let mix = (u64::from(leg.0) << 40) ^ (u64::from(leg.1) << 32) ^ (u64::from(cand.0) << 8) ^ u64::from(cand.1);
            ChaCha8Rng::seed_from_u64(seed ^ mix.rotate_left(17)).random()
        }
    }
}

/// Whether a ray of `owners` stops the candidate ray `(origin, dir)` before
/// it has travelled for `until`.
fn stopped_before(set: &PointSet, tie: TiePolicy, origin: LPos, dir: Dir, cand_id: u32, owners: [usize; 2], until: LTime) -> bool {
    owners.iter().any(|&o| {
        let other = set.lpos(o);
        let other_id = set.point(o).id;
        Dir::ALL.iter().any(|&d2| {
            let Some(m) = ray_meet(origin, dir, other, d2) else {
                return false;
            };
            if m.s1 == 0 || m.s2 == 0 {
                return false;
            }
            let tc = LTime::steps(dir.is_diagonal(), m.s1);
            if tc >= until {
                return false;
            }
            if m.head_on {
                return true;
            }
            match tc.cmp(&LTime::steps(d2.is_diagonal(), m.s2)) {
                Ordering::Less => false,
                Ordering::Greater => true,
                Ordering::Equal => leg_wins_tie(tie, (other_id, d2.index()), (cand_id, dir.index())),
            }
        })
    })
}

/// Box around both legs, widened by the longest time a leg's ray needs to
/// reach the meeting point. A ray covers at most one unit of Chebyshev
/// distance per unit of time, so a candidate outside this box cannot arrive
/// at a leg in time.
pub(crate) fn reach_box(legs: &[Leg; 2]) -> (LPos, LPos) {
    let mut lo = LPos::new(i64::MAX, i64::MAX);
    let mut hi = LPos::new(i64::MIN, i64::MIN);
    let mut reach = 0;
    for leg in legs {
        for p in [leg.origin, leg.origin.step(leg.dir.vector(), leg.steps)] {
            lo = LPos::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = LPos::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        // 2·steps bounds both `steps` and `steps·√2`
        reach = reach.max(2 * leg.steps);
    }
    (
        LPos::new(lo.x - reach, lo.y - reach),
        LPos::new(hi.x + reach, hi.y + reach),
    )
}

/// Whether candidate `pc` cuts one of the legs.
pub(crate) fn cuts(set: &PointSet, tie: TiePolicy, legs: &[Leg; 2], pc: usize) -> bool {
    let origin = set.lpos(pc);
    let cand_id = set.point(pc).id;
    let owners = [legs[0].owner, legs[1].owner];
    for dir in Dir::ALL {
        for leg in legs {
            let Some(m) = ray_meet(origin, dir, leg.origin, leg.dir) else {
                continue;
            };
            if m.s1 == 0 || m.s2 == 0 || m.s2 > leg.steps {
                continue;
            }
            let tc = LTime::steps(dir.is_diagonal(), m.s1);
            if stopped_before(set, tie, origin, dir, cand_id, owners, tc) {
                continue;
            }
            if m.head_on {
                return true;
            }
            let tl = LTime::steps(leg.dir.is_diagonal(), m.s2);
            let lost = match tc.cmp(&tl) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !leg_wins_tie(
                    tie,
                    (set.point(leg.owner).id, leg.dir.index()),
                    (cand_id, dir.index()),
                ),
            };
            if lost {
                return true;
            }
        }
    }
    false
}
