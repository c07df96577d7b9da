use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::{Coord, Point};
use crate::kernel::{LPos, Lattice};

/// A validated input point set: ids and locations are unique, and every
/// location has an exact image on the construction lattice.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    lattice: Lattice,
    lattice_pos: Vec<LPos>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::with_extra(points, &[])
    }

    /// Like [`PointSet::new`], but the lattice also represents `extra`
    /// values (e.g. a bounding-box margin) exactly.
    pub fn with_extra(points: Vec<Point>, extra: &[Coord]) -> Result<Self> {
        let lattice = Lattice::new(
            points
                .iter()
                .flat_map(|p| [&p.pos.x, &p.pos.y])
                .chain(extra.iter()),
        );
        let mut seen_ids = HashMap::with_capacity(points.len());
        let mut seen_pos: HashMap<LPos, u32> = HashMap::with_capacity(points.len());
        let mut lattice_pos = Vec::with_capacity(points.len());
        for p in &points {
            if seen_ids.insert(p.id, ()).is_some() {
                return Err(Error::DuplicateId(p.id));
            }
            let lp = lattice.to_pos(&p.pos)?;
            if let Some(first) = seen_pos.insert(lp, p.id) {
                return Err(Error::DuplicatePoint {
                    first,
                    second: p.id,
                    x: p.pos.x.to_string(),
                    y: p.pos.y.to_string(),
                });
            }
            lattice_pos.push(lp);
        }
        Ok(PointSet {
            points,
            lattice,
            lattice_pos,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    /// Index of the point with the given id.
    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub(crate) fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub(crate) fn lpos(&self, index: usize) -> LPos {
        self.lattice_pos[index]
    }

    pub(crate) fn lattice_positions(&self) -> &[LPos] {
        &self.lattice_pos
    }

    /// Largest absolute scaled coordinate, used to size float tolerances.
    pub(crate) fn magnitude(&self) -> f64 {
        self.lattice_pos
            .iter()
            .map(|p| p.x.abs().max(p.y.abs()))
            .max()
            .unwrap_or(0) as f64
    }
}
