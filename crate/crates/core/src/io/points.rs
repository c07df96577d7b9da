//! Point set files: JSON `{"points": [{"id", "x", "y"}], "meta": {..}}` or
//! CSV with an `id,x,y` header. Coordinates are decimal strings.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord, Point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub id: u32,
    pub x: Coord,
    pub y: Coord,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub points: Vec<PointRecord>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl PointSetFile {
    pub fn new(points: &[Point], meta: BTreeMap<String, serde_json::Value>) -> Self {
        PointSetFile {
            points: points
                .iter()
                .map(|p| PointRecord {
                    id: p.id,
                    x: p.pos.x.clone(),
                    y: p.pos.y.clone(),
                })
                .collect(),
            meta,
        }
    }

    /// The points, after checking that ids are unique.
    pub fn to_points(&self) -> Result<Vec<Point>> {
        let mut seen = HashSet::new();
        self.points
            .iter()
            .map(|r| {
                if !seen.insert(r.id) {
                    return Err(Error::DuplicateId(r.id));
                }
                Ok(Point::new(r.id, r.x.clone(), r.y.clone()))
            })
            .collect()
    }
}

pub fn points_from_json(text: &str) -> Result<PointSetFile> {
    let file: PointSetFile = serde_json::from_str(text)?;
    file.to_points()?;
    Ok(file)
}

pub fn points_to_json(file: &PointSetFile) -> Result<String> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    Ok(text)
}

pub fn points_from_csv(text: &str) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::parse(1, format!("missing column {name:?}")))
    };
    let (ci, cx, cy) = (column("id")?, column("x")?, column("y")?);
    let mut points = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).ok_or_else(|| Error::parse(line, "missing field"));
        let id: u32 = field(ci)?
            .parse()
            .map_err(|_| Error::parse(line, format!("bad id {:?}", record.get(ci).unwrap_or(""))))?;
        let x: Coord = field(cx)?.parse().map_err(|e: String| Error::parse(line, e))?;
        let y: Coord = field(cy)?.parse().map_err(|e: String| Error::parse(line, e))?;
        if !seen.insert(id) {
            return Err(Error::DuplicateId(id));
        }
        points.push(Point::new(id, x, y));
    }
    Ok(points)
}

pub fn points_to_csv(points: &[Point]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["id", "x", "y"])?;
    for p in points {
        writer.write_record([p.id.to_string(), p.pos.x.to_string(), p.pos.y.to_string()])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Triangle `.node` text for the points, numbered from 0 in input order.
pub fn points_to_triangle_node(points: &[Point]) -> String {
    let mut out = format!("{} 2 0 0\n", points.len());
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!("{i} {} {}\n", p.pos.x, p.pos.y));
    }
    out
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads a point file; `.csv` files are CSV, anything else JSON.
pub fn read_points(path: &Path) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path)?;
    if is_csv(path) {
        points_from_csv(&text)
    } else {
        points_from_json(&text)?.to_points()
    }
}

pub fn write_points(path: &Path, file: &PointSetFile) -> Result<()> {
    let text = if is_csv(path) {
        points_to_csv(&file.to_points()?)?
    } else {
        points_to_json(file)?
    };
    std::fs::write(path, text)?;
    Ok(())
}
