//! Full emanation graphs `M_k`.
//!
//! Every point shoots `2^(k+1)` rays at angles `j·π/2^k`, all starting at
//! time zero with unit speed. A ray stops at the first point it reaches after
//! another ray that was still alive there, or when it leaves the bounding
//! box. Grades 1 and 2 run on the exact lattice kernel; higher grades run in
//! approximate mode (see [`build_emanation_approx`]).

mod approx;
pub(crate) mod sim;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assemble::Assembler;
use crate::error::{Error, Result};
use crate::geom::{Coord, Dir, Point, Pos, RayTime};
use crate::graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};
use crate::kernel::{ray_meet, LPos, LTime};
use crate::pointset::PointSet;

pub use approx::{build_emanation_approx, simulate_rays_approx};

use sim::{Meeting, RayKernel, Reason};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub xmin: Coord,
    pub xmax: Coord,
    pub ymin: Coord,
    pub ymax: Coord,
}

impl BBox {
    /// Bounding box of `points`. When the box has zero width or height,
    /// every side is pushed out by `margin`.
    pub fn around(points: &[Point], margin: &Coord) -> Result<BBox> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let mut b = BBox {
            xmin: first.pos.x.clone(),
            xmax: first.pos.x.clone(),
            ymin: first.pos.y.clone(),
            ymax: first.pos.y.clone(),
        };
        for p in &points[1..] {
            if p.pos.x < b.xmin {
                b.xmin = p.pos.x.clone();
            }
            if p.pos.x > b.xmax {
                b.xmax = p.pos.x.clone();
            }
            if p.pos.y < b.ymin {
                b.ymin = p.pos.y.clone();
            }
            if p.pos.y > b.ymax {
                b.ymax = p.pos.y.clone();
            }
        }
        if b.xmin == b.xmax || b.ymin == b.ymax {
            if !margin.is_positive() {
                return Err(Error::Config("bounding box margin must be positive".into()));
            }
            b.xmin = &b.xmin - margin;
            b.xmax = &b.xmax + margin;
            b.ymin = &b.ymin - margin;
            b.ymax = &b.ymax + margin;
        }
        Ok(b)
    }

    pub fn contains(&self, p: &Pos) -> bool {
        self.xmin <= p.x && p.x <= self.xmax && self.ymin <= p.y && p.y <= self.ymax
    }

    fn coords(&self) -> [Coord; 4] {
        [
            self.xmin.clone(),
            self.xmax.clone(),
            self.ymin.clone(),
            self.ymax.clone(),
        ]
    }
}

/// How simultaneous arrivals at one point are resolved.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TiePolicy {
    /// The ray with the smallest `(owner id, direction)` survives.
    #[default]
    DeterministicLex,
    /// The survivor is drawn from a ChaCha generator with this seed.
    Seeded(u64),
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::DeterministicLex => f.write_str("lex"),
            TiePolicy::Seeded(seed) => write!(f, "seeded:{seed}"),
        }
    }
}

impl FromStr for TiePolicy {
    type Err = String;

    /// Accepts `lex` or `seeded:<u64>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "lex" => Ok(TiePolicy::DeterministicLex),
            Some(("seeded", seed)) => seed
                .parse()
                .map(TiePolicy::Seeded)
                .map_err(|_| format!("bad seed in tie policy {s:?}")),
            _ => Err(format!("unknown tie policy {s:?} (expected lex or seeded:<n>)")),
        }
    }
}

/// A ray is named by its owner and its direction index `j` (angle
/// `j·π/2^k`, counter-clockwise from east). For grade 2, `j` is the
/// [`Dir`] index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayId {
    pub owner: u32,
    pub dir: u16,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StopCause {
    /// Stopped by a ray that reached the stop point no later and survived.
    Collision(RayId),
    /// Stopped head-on by the opposite ray on the same line.
    Parallel(RayId),
    BBox,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySegment {
    pub owner: u32,
    pub dir: u16,
    pub stop_point: Pos,
    pub stop_time: RayTime,
    pub stop_cause: StopCause,
}

/// Direction of ray `j` of grade `k ≤ 2`.
fn exact_dir(grade: u32, j: usize) -> Dir {
    Dir::new((j << (2 - grade)) as u8).expect("grade ≤ 2")
}

fn check_grade(grade: u32) -> Result<()> {
    match grade {
        0 => Err(Error::Config("grade must be at least 1".into())),
        1 | 2 => Ok(()),
        _ => Err(Error::ModeUnsupported(grade)),
    }
}

struct LatticeRays {
    origins: Vec<LPos>,
    dirs: Vec<Dir>,
    /// xmin, xmax, ymin, ymax
    bounds: [i64; 4],
}

impl LatticeRays {
    fn ray(&self, r: usize) -> (LPos, Dir) {
        let per = self.dirs.len();
        (self.origins[r / per], self.dirs[r % per])
    }
}

impl RayKernel for LatticeRays {
    type Time = LTime;
    type Pt = LPos;

    fn ray_count(&self) -> usize {
        self.origins.len() * self.dirs.len()
    }

    fn owner(&self, ray: usize) -> usize {
        ray / self.dirs.len()
    }

    fn exit(&self, ray: usize) -> (LPos, LTime) {
        let (o, d) = self.ray(ray);
        let (vx, vy) = d.vector();
        let [xmin, xmax, ymin, ymax] = self.bounds;
        let mut steps = i64::MAX;
        match vx {
            1 => steps = steps.min(xmax - o.x),
            -1 => steps = steps.min(o.x - xmin),
            _ => {}
        }
        match vy {
            1 => steps = steps.min(ymax - o.y),
            -1 => steps = steps.min(o.y - ymin),
            _ => {}
        }
        (o.step((vx, vy), steps), LTime::steps(d.is_diagonal(), steps))
    }

    fn meet(&self, r1: usize, r2: usize) -> Option<Meeting<LPos, LTime>> {
        let (o1, d1) = self.ray(r1);
        let (o2, d2) = self.ray(r2);
        let m = ray_meet(o1, d1, o2, d2)?;
        Some(Meeting {
            at: m.at,
            t1: LTime::steps(d1.is_diagonal(), m.s1),
            t2: LTime::steps(d2.is_diagonal(), m.s2),
            head_on: m.head_on,
        })
    }
}

struct ExactRun {
    set: PointSet,
    kernel: LatticeRays,
    stops: Vec<sim::Stop<LPos, LTime>>,
    multi_ties: usize,
}

fn run_exact(points: &[Point], grade: u32, bbox: &BBox, tie: TiePolicy) -> Result<ExactRun> {
    check_grade(grade)?;
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let set = PointSet::with_extra(points.to_vec(), &bbox.coords())?;
    let lattice = set.lattice();
    let bounds = [
        lattice.to_int(&bbox.xmin)?,
        lattice.to_int(&bbox.xmax)?,
        lattice.to_int(&bbox.ymin)?,
        lattice.to_int(&bbox.ymax)?,
    ];
    if let Some(p) = points.iter().find(|p| !bbox.contains(&p.pos)) {
        return Err(Error::Config(format!(
            "point {} lies outside the bounding box",
            p.id
        )));
    }
    let per = 1usize << (grade + 1);
    let kernel = LatticeRays {
        origins: set.lattice_positions().to_vec(),
        dirs: (0..per).map(|j| exact_dir(grade, j)).collect(),
        bounds,
    };
    let tie_keys: Vec<(u32, u16)> = (0..kernel.ray_count())
        .map(|r| (points[r / per].id, (r % per) as u16))
        .collect();
    let outcome = sim::run(&kernel, &tie_keys, tie);
    Ok(ExactRun {
        set,
        kernel,
        stops: outcome.stops,
        multi_ties: outcome.multi_ties,
    })
}

/// Simulates the ray competition exactly. Requires `1 ≤ grade ≤ 2`.
pub fn simulate_rays(
    points: &[Point],
    grade: u32,
    bbox: &BBox,
    tie: TiePolicy,
) -> Result<Vec<RaySegment>> {
    let run = run_exact(points, grade, bbox, tie)?;
    let per = run.kernel.dirs.len();
    let lattice = run.set.lattice();
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
            stop_point: lattice.to_exact(stop.at),
            stop_time: lattice.time(stop.time),
            stop_cause: match stop.reason {
                Reason::Boundary => StopCause::BBox,
                Reason::Collision(o) => StopCause::Collision(ray_id(o)),
                Reason::HeadOn(o) => StopCause::Parallel(ray_id(o)),
            },
        })
        .collect())
}

/// Builds `M_k` for `k ∈ {1, 2}` with exact coordinates.
pub fn build_emanation(
    points: &[Point],
    grade: u32,
    margin: &Coord,
    tie: TiePolicy,
) -> Result<PlaneGraph> {
    let bbox = BBox::around(points, margin)?;
    let run = run_exact(points, grade, &bbox, tie)?;
    let mut asm = Assembler::new(run.set.lattice_positions());
    for (r, stop) in run.stops.iter().enumerate() {
        let kind = match stop.reason {
            Reason::Boundary => VertexKind::Boundary,
            _ => VertexKind::Steiner,
        };
        asm.add_vertex(stop.at, kind);
        let (origin, _) = run.kernel.ray(r);
        asm.add_segment(origin, stop.at)?;
    }
    let out = asm.finish(false)?;
    let lattice = run.set.lattice();
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
            algorithm: format!("emanation{grade}"),
            grade: Some(grade),
            tie_policy: Some(tie.to_string()),
            ..GraphMeta::default()
        },
    );
    graph.add_diagnostic("proper_crossings", out.crossings);
    graph.add_diagnostic("multi_ray_ties", run.multi_ties);
    Ok(graph)
}
