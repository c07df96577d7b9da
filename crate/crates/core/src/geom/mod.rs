//! Exact planar primitives.
//!
//! Everything here works on [`Coord`] values and never rounds. Directions of
//! grade 2 are multiples of 45°; the cone boundaries between them are odd
//! multiples of 22.5° and have irrational slopes, so tests against them are
//! carried out in `Z[√2]`.

mod coord;
mod time;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use coord::Coord;
pub(crate) use time::sign_sqrt2_rational;
pub use time::{compare_times, RayTime};

use crate::error::{Error, Result};

/// An exact location in the plane.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Pos {
    pub x: Coord,
    pub y: Coord,
}

impl Pos {
    pub fn new(x: Coord, y: Coord) -> Self {
        Pos { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Pos::new(Coord::from_int(x), Coord::from_int(y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An input point.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    pub id: u32,
    pub pos: Pos,
}

impl Point {
    pub fn new(id: u32, x: Coord, y: Coord) -> Self {
        Point {
            id,
            pos: Pos::new(x, y),
        }
    }

    pub fn from_ints(id: u32, x: i64, y: i64) -> Self {
        Point {
            id,
            pos: Pos::from_ints(x, y),
        }
    }
}

/// One of the eight grade-2 ray directions; index `i` points at `i·45°`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dir(u8);

impl Dir {
    pub const E: Dir = Dir(0);
    pub const NE: Dir = Dir(1);
    pub const N: Dir = Dir(2);
    pub const NW: Dir = Dir(3);
    pub const W: Dir = Dir(4);
    pub const SW: Dir = Dir(5);
    pub const S: Dir = Dir(6);
    pub const SE: Dir = Dir(7);

    pub const ALL: [Dir; 8] = [
        Dir::E,
        Dir::NE,
        Dir::N,
        Dir::NW,
        Dir::W,
        Dir::SW,
        Dir::S,
        Dir::SE,
    ];

    pub fn new(index: u8) -> Option<Dir> {
        (index < 8).then_some(Dir(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Unnormalized integer direction vector: `(±1,0)`, `(0,±1)` or `(±1,±1)`.
    pub fn vector(self) -> (i64, i64) {
        DIR_VECTORS[self.0 as usize]
    }

    pub fn is_diagonal(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn opposite(self) -> Dir {
        Dir((self.0 + 4) % 8)
    }

    /// Travel time for `steps` multiples of [`Dir::vector`].
    pub fn time_for_steps(self, steps: Coord) -> RayTime {
        if self.is_diagonal() {
            RayTime::diagonal(steps)
        } else {
            RayTime::axis(steps)
        }
    }
}

pub(crate) const DIR_VECTORS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// A logical rotation by `step·45°`. Logical direction `j` is base direction
/// `(j + step) mod 8`; coordinates are never rotated.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Frame(u8);

impl Frame {
    pub const ALL: [Frame; 8] = [
        Frame(0),
        Frame(1),
        Frame(2),
        Frame(3),
        Frame(4),
        Frame(5),
        Frame(6),
        Frame(7),
    ];

    pub fn new(step: u8) -> Option<Frame> {
        (step < 8).then_some(Frame(step))
    }

    pub fn step(self) -> u8 {
        self.0
    }

    /// Base direction of the logical ray `r_{logical+1}`.
    pub fn dir(self, logical: u8) -> Dir {
        Dir((logical + self.0) % 8)
    }

    /// Base half-direction index (multiples of 22.5°) of a logical one.
    pub(crate) fn half(self, logical_half: u8) -> usize {
        ((logical_half as usize) + 2 * self.0 as usize) % 16
    }
}

/// Direction vectors at multiples of 22.5°, with components `(c0, c1)`
/// standing for `c0 + c1·√2`. Odd entries use `1 + √2 = cot 22.5°`, so all odd
/// entries share one length and all even diagonal/axis entries are integer.
pub(crate) const HALF_DIRS: [[(i64, i64); 2]; 16] = [
    [(1, 0), (0, 0)],
    [(1, 1), (1, 0)],
    [(1, 0), (1, 0)],
    [(1, 0), (1, 1)],
    [(0, 0), (1, 0)],
    [(-1, 0), (1, 1)],
    [(-1, 0), (1, 0)],
    [(-1, -1), (1, 0)],
    [(-1, 0), (0, 0)],
    [(-1, -1), (-1, 0)],
    [(-1, 0), (-1, 0)],
    [(-1, 0), (-1, -1)],
    [(0, 0), (-1, 0)],
    [(1, 0), (-1, -1)],
    [(1, 0), (-1, 0)],
    [(1, 1), (-1, 0)],
];

/// The 22.5° wedges of a frame's upper half-plane, named by their bounding
/// guidelines. Every wedge is half-open `[lower, upper)`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum ConeId {
    R1B1,
    B1R2,
    R2A1,
    A1R3,
    R3A2,
    A2R4,
    R4B2,
    B2R5,
}

impl ConeId {
    pub const ALL: [ConeId; 8] = [
        ConeId::R1B1,
        ConeId::B1R2,
        ConeId::R2A1,
        ConeId::A1R3,
        ConeId::R3A2,
        ConeId::A2R4,
        ConeId::R4B2,
        ConeId::B2R5,
    ];

    /// Logical half-direction index of the lower boundary.
    pub fn lower_half(self) -> u8 {
        self as u8
    }

    pub fn from_lower_half(h: u8) -> Option<ConeId> {
        ConeId::ALL.get(h as usize).copied()
    }

    /// The wedge reflected through the frame's vertical axis.
    pub fn mirrored(self) -> ConeId {
        ConeId::ALL[7 - self as usize]
    }

    pub fn name(self) -> &'static str {
        match self {
            ConeId::R1B1 => "C_r1b1",
            ConeId::B1R2 => "C_b1r2",
            ConeId::R2A1 => "C_r2a1",
            ConeId::A1R3 => "C_a1r3",
            ConeId::R3A2 => "C_r3a2",
            ConeId::A2R4 => "C_a2r4",
            ConeId::R4B2 => "C_r4b2",
            ConeId::B2R5 => "C_b2r5",
        }
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Orientation {
    Cw,
    Ccw,
    Collinear,
}

/// Sign of the cross product `(b − a) × (c − a)`.
pub fn orientation(a: &Pos, b: &Pos, c: &Pos) -> Orientation {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let acx = &c.x - &a.x;
    let acy = &c.y - &a.y;
    let lhs = abx * acy;
    let rhs = aby * acx;
    match lhs.cmp(&rhs) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// `cross(B_h, d)` as `p + q·√2` for a rational vector `d`.
fn cross_half_rational(h: usize, dx: &BigRational, dy: &BigRational) -> (BigRational, BigRational) {
    let [(bx0, bx1), (by0, by1)] = HALF_DIRS[h];
    let int = |v: i64| BigRational::from_integer(v.into());
    let p = dy * int(bx0) - dx * int(by0);
    let q = dy * int(bx1) - dx * int(by1);
    (p, q)
}

/// The wedge of `frame` that contains the direction from `p` to `q`, or
/// `None` when that direction lies in the frame's closed lower half-plane.
pub fn cone_of(p: &Pos, q: &Pos, frame: Frame) -> Result<Option<ConeId>> {
    if p == q {
        return Err(Error::DuplicatePoint {
            first: 0,
            second: 0,
            x: p.x.to_string(),
            y: p.y.to_string(),
        });
    }
    let dx = q.x.as_rational() - p.x.as_rational();
    let dy = q.y.as_rational() - p.y.as_rational();
    let (p0, q0) = cross_half_rational(frame.half(0), &dx, &dy);
    if sign_sqrt2_rational(&p0, &q0) != Ordering::Greater {
        return Ok(None);
    }
    // in the open upper half-plane the angle grows monotonically with the
    // number of boundaries at or clockwise of the direction
    let passed = (1..8u8)
        .filter(|&l| {
            let (a, b) = cross_half_rational(frame.half(l), &dx, &dy);
            sign_sqrt2_rational(&a, &b) != Ordering::Less
        })
        .count();
    Ok(ConeId::from_lower_half(passed as u8))
}

/// Where the forward rays `o1 + s·d1` and `o2 + s·d2` (s ≥ 0) meet, with the
/// exact travel time of each ray. Two collinear rays heading at each other
/// meet at the midpoint of their origins.
pub fn ray_intersection(o1: &Pos, d1: Dir, o2: &Pos, d2: Dir) -> Option<(Pos, RayTime, RayTime)> {
    let (v1x, v1y) = d1.vector();
    let (v2x, v2y) = d2.vector();
    let wx = &o2.x - &o1.x;
    let wy = &o2.y - &o1.y;
    let int = |v: i64| Coord::from_int(v);
    let cross_w = |vx: i64, vy: i64| &wx * &int(vy) - &wy * &int(vx);
    let denom = v1x * v2y - v1y * v2x;
    if denom == 0 {
        let head_on = d2 == d1.opposite();
        if !head_on || !cross_w(v1x, v1y).is_zero() {
            return None;
        }
        // collinear: steps along v1 to reach o2
        let along = &wx * &int(v1x) + &wy * &int(v1y);
        if !along.is_positive() {
            return None;
        }
        let norm = (v1x * v1x + v1y * v1y) as i64;
        let steps = along / int(2 * norm);
        let mid = Pos::new(
            &o1.x + &(&steps * &int(v1x)),
            &o1.y + &(&steps * &int(v1y)),
        );
        let t = d1.time_for_steps(steps);
        return Some((mid, t.clone(), t));
    }
    let denom = int(denom);
    let s1 = cross_w(v2x, v2y) / denom.clone();
    let s2 = cross_w(v1x, v1y) / denom;
    if s1.is_negative() || s2.is_negative() {
        return None;
    }
    let at = Pos::new(&o1.x + &(&s1 * &int(v1x)), &o1.y + &(&s1 * &int(v1y)));
    Some((at, d1.time_for_steps(s1), d2.time_for_steps(s2)))
}
