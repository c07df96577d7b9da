//! Ray competition shared by the exact and approximate kernels.
//!
//! Every forward crossing of two rays with different owners is a candidate
//! event at time `max(t1, t2)`. Events are processed in time order, grouped
//! by (time, point). A ray arriving at the group time stops if a ray crossing
//! it there arrived earlier and was still alive on arrival. Among the
//! arrivals left over, head-on pairs stop each other at their midpoint and
//! the rest keep one survivor chosen by the tie policy.

use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TiePolicy;

pub(crate) struct Meeting<P, T> {
    pub at: P,
    pub t1: T,
    pub t2: T,
    pub head_on: bool,
}

pub(crate) trait RayKernel {
    type Time: Copy + Ord + Debug;
    type Pt: Copy + Ord + Debug;

    fn ray_count(&self) -> usize;
    fn owner(&self, ray: usize) -> usize;
    /// Point and time at which `ray` leaves the bounding box.
    fn exit(&self, ray: usize) -> (Self::Pt, Self::Time);
    fn meet(&self, r1: usize, r2: usize) -> Option<Meeting<Self::Pt, Self::Time>>;
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Reason {
    Boundary,
    Collision(usize),
    HeadOn(usize),
}

#[derive(Copy, Clone, Debug)]
pub(crate) struct Stop<P, T> {
    pub at: P,
    pub time: T,
    pub reason: Reason,
}

struct Event<P, T> {
    time: T,
    at: P,
    r1: u32,
    r2: u32,
}

pub(crate) struct Outcome<P, T> {
    pub stops: Vec<Stop<P, T>>,
    /// Number of points where three or more rays arrived at once.
    pub multi_ties: usize,
}

/// Runs the competition. `tie_keys[r]` orders rays for tie breaking; the
/// smallest key survives under the lexicographic policy.
pub(crate) fn run<K: RayKernel>(
    kernel: &K,
    tie_keys: &[(u32, u16)],
    tie: TiePolicy,
) -> Outcome<K::Pt, K::Time> {
    let n = kernel.ray_count();
    let mut stops: Vec<Stop<K::Pt, K::Time>> = (0..n)
        .map(|r| {
            let (at, time) = kernel.exit(r);
            Stop {
                at,
                time,
                reason: Reason::Boundary,
            }
        })
        .collect();

    let mut events = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            if kernel.owner(r1) == kernel.owner(r2) {
                continue;
            }
            if let Some(m) = kernel.meet(r1, r2) {
                if m.t1 <= stops[r1].time && m.t2 <= stops[r2].time {
                    events.push(Event {
                        time: m.t1.max(m.t2),
                        at: m.at,
                        r1: r1 as u32,
                        r2: r2 as u32,
                    });
                }
            }
        }
    }
    events.sort_unstable_by(|a, b| {
        a.time
            .cmp(&b.time)
            .then(a.at.cmp(&b.at))
            .then(a.r1.cmp(&b.r1))
            .then(a.r2.cmp(&b.r2))
    });

    let mut rng = match tie {
        TiePolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TiePolicy::DeterministicLex => None,
    };
    let mut arrivals: Vec<(usize, K::Time)> = Vec::new();
    let mut pairs: Vec<(usize, K::Time, usize, K::Time)> = Vec::new();
    let mut head_on: Vec<(usize, usize)> = Vec::new();
    let mut multi_ties = 0;
    let mut i = 0;
    while i < events.len() {
        let (time, at) = (events[i].time, events[i].at);
        let mut j = i;
        arrivals.clear();
        pairs.clear();
        head_on.clear();
        while j < events.len() && events[j].time == time && events[j].at == at {
            let (r1, r2) = (events[j].r1 as usize, events[j].r2 as usize);
            let m = kernel
                .meet(r1, r2)
                .expect("event pairs were produced by meet");
            arrivals.push((r1, m.t1));
            arrivals.push((r2, m.t2));
            pairs.push((r1, m.t1, r2, m.t2));
            if m.head_on {
                head_on.push((r1, r2));
            }
            j += 1;
        }
        i = j;
        arrivals.sort_unstable();
        arrivals.dedup_by_key(|a| a.0);

        let at_time: Vec<usize> = arrivals
            .iter()
            .filter(|&&(r, t)| t == time && stops[r].time >= t)
            .map(|&(r, _)| r)
            .collect();
        if at_time.is_empty() {
            continue;
        }
        // a ray is stopped by the smallest ray crossing it here that
        // arrived earlier and was still alive on arrival
        let blockers: Vec<Option<usize>> = at_time
            .iter()
            .map(|&r| {
                pairs
                    .iter()
                    .filter_map(|&(a, ta, b, tb)| match (a == r, b == r) {
                        (true, _) => Some((b, tb)),
                        (_, true) => Some((a, ta)),
                        _ => None,
                    })
                    .filter(|&(o, t)| t < time && stops[o].time >= t)
                    .map(|(o, _)| o)
                    .min_by_key(|&o| tie_keys[o])
            })
            .collect();
        let mut rest = Vec::new();
        for (&r, blocker) in at_time.iter().zip(&blockers) {
            match *blocker {
                Some(first) => {
                    stops[r] = Stop {
                        at,
                        time,
                        reason: Reason::Collision(first),
                    }
                }
                None => rest.push(r),
            }
        }
        let mut paired = Vec::new();
        for &(r1, r2) in &head_on {
            if rest.contains(&r1) && rest.contains(&r2) {
                paired.extend([r1, r2]);
                stops[r1] = Stop {
                    at,
                    time,
                    reason: Reason::HeadOn(r2),
                };
                stops[r2] = Stop {
                    at,
                    time,
                    reason: Reason::HeadOn(r1),
                };
            }
        }
        rest.retain(|r| !paired.contains(r));
        if rest.len() < 2 {
            continue;
        }
        if rest.len() > 2 {
            multi_ties += 1;
        }
        rest.sort_unstable_by_key(|&r| tie_keys[r]);
        let survivor = match rng.as_mut() {
            Some(rng) => rest[rng.random_range(0..rest.len())],
            None => rest[0],
        };
        for r in rest {
            if r != survivor {
                stops[r] = Stop {
                    at,
                    time,
                    reason: Reason::Collision(survivor),
                };
            }
        }
    }
    Outcome { stops, multi_ties }
}
