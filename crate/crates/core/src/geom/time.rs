use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Coord;

/// The exact real number `a + b·√2`, used for distances travelled along
/// axis-parallel (`b = 0`) and diagonal (`a = 0`) rays.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RayTime {
    pub a: Coord,
    pub b: Coord,
}

impl RayTime {
    pub fn new(a: Coord, b: Coord) -> Self {
        RayTime { a, b }
    }

    pub fn zero() -> Self {
        RayTime::default()
    }

    pub fn axis(length: Coord) -> Self {
        RayTime {
            a: length,
            b: Coord::zero(),
        }
    }

    /// `steps·√2`, the length of `steps` unit diagonal steps.
    pub fn diagonal(steps: Coord) -> Self {
        RayTime {
            a: Coord::zero(),
            b: steps,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * std::f64::consts::SQRT_2
    }
}

/// Sign of `p + q·√2` for rationals `p` and `q`.
pub(crate) fn sign_sqrt2_rational(p: &BigRational, q: &BigRational) -> Ordering {
    let sp = p.cmp(&BigRational::zero());
    let sq = q.cmp(&BigRational::zero());
    match (sp, sq) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (s1, s2) if s1 == s2 => s1,
        _ => {
            // opposite signs: the term of larger magnitude decides
            let p2 = p * p;
            let q2 = q * q * BigRational::from_integer(2.into());
            let by_magnitude = p2.cmp(&q2);
            if p.is_positive() {
                by_magnitude
            } else {
                by_magnitude.reverse()
            }
        }
    }
}

/// Exact total order on `a + b·√2` values.
pub fn compare_times(t1: &RayTime, t2: &RayTime) -> Ordering {
    let p = t1.a.as_rational() - t2.a.as_rational();
    let q = t1.b.as_rational() - t2.b.as_rational();
    sign_sqrt2_rational(&p, &q)
}

impl Ord for RayTime {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_times(self, other)
    }
}

impl PartialOrd for RayTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RayTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

impl fmt::Debug for RayTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
