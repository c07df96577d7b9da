//! Integer construction kernel.
//!
//! Every coordinate produced while building grade-2 graphs is an integer
//! combination of input coordinates divided by at most 2. Scaling all input
//! coordinates by twice the least common multiple of their denominators
//! therefore puts every construction point on the integer lattice, and the
//! builders work on `i64` lattice points with `i128` intermediates. Values
//! are converted back to [`Coord`] only when a graph is emitted.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::geom::{Coord, Dir, Pos, HALF_DIRS};
#[cfg(test)]
use crate::geom::{ConeId, Frame};

/// Bound on scaled coordinates. Sums of a few of them stay exact in `f64`
/// and squared differences fit comfortably in `i128`.
pub(crate) const LATTICE_LIMIT: i64 = 1 << 50;

#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    scale: BigInt,
}

impl Lattice {
    pub fn new<'a>(coords: impl IntoIterator<Item = &'a Coord>) -> Lattice {
        let mut lcm = BigInt::one();
        for c in coords {
            if !c.denom().is_one() {
                lcm = lcm.lcm(c.denom());
            }
        }
        Lattice { scale: lcm * 2 }
    }

    pub fn to_int(&self, c: &Coord) -> Result<i64> {
        let scaled = c.numer() * (&self.scale / c.denom());
        scaled
            .to_i64()
            .filter(|v| v.abs() <= LATTICE_LIMIT)
            .ok_or_else(|| Error::CoordinateRange(c.to_string()))
    }

    pub fn to_pos(&self, p: &Pos) -> Result<LPos> {
        Ok(LPos {
            x: self.to_int(&p.x)?,
            y: self.to_int(&p.y)?,
        })
    }

    pub fn to_coord(&self, v: i64) -> Coord {
        Coord::from_rational(BigRational::new(BigInt::from(v), self.scale.clone()))
    }

    pub fn to_exact(&self, p: LPos) -> Pos {
        Pos::new(self.to_coord(p.x), self.to_coord(p.y))
    }

    pub fn time(&self, t: LTime) -> crate::geom::RayTime {
        crate::geom::RayTime::new(self.to_coord(t.a), self.to_coord(t.b))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct LPos {
    pub x: i64,
    pub y: i64,
}

impl LPos {
    pub fn new(x: i64, y: i64) -> Self {
        LPos { x, y }
    }

    pub fn sub(self, o: LPos) -> (i64, i64) {
        (self.x - o.x, self.y - o.y)
    }

    pub fn step(self, v: (i64, i64), s: i64) -> LPos {
        LPos::new(self.x + v.0 * s, self.y + v.1 * s)
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x as f64, self.y as f64)
    }
}

/// Lattice travel time `a + b·√2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct LTime {
    pub a: i64,
    pub b: i64,
}

impl LTime {
    pub fn steps(diagonal: bool, s: i64) -> LTime {
        if diagonal {
            LTime { a: 0, b: s }
        } else {
            LTime { a: s, b: 0 }
        }
    }
}

impl Ord for LTime {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_sqrt2(
            self.a as i128 - other.a as i128,
            self.b as i128 - other.b as i128,
        )
    }
}

impl PartialOrd for LTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Where two lattice rays meet, in steps of their direction vectors.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) struct RayMeet {
    pub at: LPos,
    pub s1: i64,
    pub s2: i64,
    /// The rays run toward each other on one line and meet halfway.
    pub head_on: bool,
}

/// First common point of the rays `o1 + s·d1` and `o2 + s·d2` with `s ≥ 0`.
/// Both origins must lie on the even lattice. Rays that run in the same
/// direction along one line never meet.
pub(crate) fn ray_meet(o1: LPos, d1: Dir, o2: LPos, d2: Dir) -> Option<RayMeet> {
    let (v1, v2) = (d1.vector(), d2.vector());
    let w = o2.sub(o1);
    let den = cross(v1, v2);
    if den == 0 {
        if d2 != d1.opposite() || cross(w, v1) != 0 {
            return None;
        }
        let along = dot(w, v1);
        if along <= 0 {
            return None;
        }
        let norm = dot(v1, v1);
        debug_assert_eq!(along % (2 * norm), 0, "origins lie on the even lattice");
        let steps = (along / (2 * norm)) as i64;
        return Some(RayMeet {
            at: o1.step(v1, steps),
            s1: steps,
            s2: steps,
            head_on: true,
        });
    }
    let n1 = cross(w, v2);
    let n2 = cross(w, v1);
    debug_assert!(n1 % den == 0 && n2 % den == 0);
    let (s1, s2) = ((n1 / den) as i64, (n2 / den) as i64);
    if s1 < 0 || s2 < 0 {
        return None;
    }
    Some(RayMeet {
        at: o1.step(v1, s1),
        s1,
        s2,
        head_on: false,
    })
}

/// Sign of `p + q·√2`.
pub(crate) fn sign_sqrt2(p: i128, q: i128) -> Ordering {
    let sp = p.cmp(&0);
    let sq = q.cmp(&0);
    match (sp, sq) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (s1, s2) if s1 == s2 => s1,
        _ => {
            debug_assert!(p.unsigned_abs() < (1u128 << 62) && q.unsigned_abs() < (1u128 << 62));
            let by_magnitude = (p * p).cmp(&(2 * q * q));
            if p > 0 {
                by_magnitude
            } else {
                by_magnitude.reverse()
            }
        }
    }
}

#[inline]
pub(crate) fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

#[inline]
pub(crate) fn dot(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.0 as i128 + a.1 as i128 * b.1 as i128
}

#[inline]
pub(crate) fn orient(a: LPos, b: LPos, c: LPos) -> Ordering {
    cross(b.sub(a), c.sub(a)).cmp(&0)
}

/// `cross(B_h, d)` as `(p, q)` meaning `p + q·√2`.
#[inline]
pub(crate) fn cross_half(h: usize, d: (i64, i64)) -> (i128, i128) {
    let [(bx0, bx1), (by0, by1)] = HALF_DIRS[h];
    let (dx, dy) = (d.0 as i128, d.1 as i128);
    (
        bx0 as i128 * dy - by0 as i128 * dx,
        bx1 as i128 * dy - by1 as i128 * dx,
    )
}

/// `⟨B_h, d⟩` as `(p, q)` meaning `p + q·√2`.
#[inline]
pub(crate) fn dot_half(h: usize, d: (i64, i64)) -> (i128, i128) {
    let [(bx0, bx1), (by0, by1)] = HALF_DIRS[h];
    let (dx, dy) = (d.0 as i128, d.1 as i128);
    (
        bx0 as i128 * dx + by0 as i128 * dy,
        bx1 as i128 * dx + by1 as i128 * dy,
    )
}

#[inline]
pub(crate) fn cross_half_sign(h: usize, d: (i64, i64)) -> Ordering {
    let (p, q) = cross_half(h, d);
    sign_sqrt2(p, q)
}

/// Compare `⟨B_h, d1⟩` with `⟨B_h, d2⟩`.
#[inline]
pub(crate) fn cmp_dot_half(h: usize, d1: (i64, i64), d2: (i64, i64)) -> Ordering {
    let (p1, q1) = dot_half(h, d1);
    let (p2, q2) = dot_half(h, d2);
    sign_sqrt2(p1 - p2, q1 - q2)
}

/// Floating-point copies of [`HALF_DIRS`].
pub(crate) fn half_dir_f64(h: usize) -> (f64, f64) {
    let [(x0, x1), (y0, y1)] = HALF_DIRS[h];
    let s = std::f64::consts::SQRT_2;
    (x0 as f64 + x1 as f64 * s, y0 as f64 + y1 as f64 * s)
}

/// Exact cone classification of a lattice direction.
#[cfg(test)]
pub(crate) fn cone_in_frame(d: (i64, i64), frame: Frame) -> Option<ConeId> {
    if cross_half_sign(frame.half(0), d) != Ordering::Greater {
        return None;
    }
    let passed = (1..8u8)
        .filter(|&l| cross_half_sign(frame.half(l), d) != Ordering::Less)
        .count();
    ConeId::from_lower_half(passed as u8)
}
