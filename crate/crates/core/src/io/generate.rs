//! Seeded random point sets on the 1/1000 grid.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord, Point};

const SIDE: f64 = 1000.0;
const PER_CLUSTER: usize = 50;
const SIGMA: f64 = 40.0;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointModel {
    /// Independent uniform points in `[0, 1000]²`.
    Uniform,
    /// `⌈n/50⌉` Gaussian clusters with σ = 40 around uniform centres.
    Clustered,
}

impl fmt::Display for PointModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointModel::Uniform => "uniform",
            PointModel::Clustered => "clustered",
        })
    }
}

impl FromStr for PointModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(PointModel::Uniform),
            "clustered" => Ok(PointModel::Clustered),
            _ => Err(format!("unknown point model {s:?} (expected uniform or clustered)")),
        }
    }
}

fn snap(v: f64) -> i64 {
    (v * 1000.0).round() as i64
}

/// `n` distinct points with ids `0..n`, coordinates multiples of 1/1000.
pub fn generate_points(n: usize, seed: u64, model: PointModel) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(Error::Config("point count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres: Vec<(f64, f64)> = match model {
        PointModel::Uniform => Vec::new(),
        PointModel::Clustered => (0..n.div_ceil(PER_CLUSTER))
            .map(|_| (rng.random_range(0.0..=SIDE), rng.random_range(0.0..=SIDE)))
            .collect(),
    };
    let normal = Normal::new(0.0, SIGMA).expect("positive sigma");
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let (x, y) = match model {
            PointModel::Uniform => (rng.random_range(0..=1_000_000), rng.random_range(0..=1_000_000)),
            PointModel::Clustered => {
                let (cx, cy) = centres[rng.random_range(0..centres.len())];
                (snap(cx + normal.sample(&mut rng)), snap(cy + normal.sample(&mut rng)))
            }
        };
        if seen.insert((x, y)) {
            let id = points.len() as u32;
            points.push(Point::new(id, Coord::from_ratio(x, 1000), Coord::from_ratio(y, 1000)));
        }
    }
    Ok(points)
}
