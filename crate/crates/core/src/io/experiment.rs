//! The comparison harness: generate instances, build every configured graph,
//! and average the metrics per (algorithm, size).
//!
//! CSV columns, in order: `configuration, point_count, data_set,
//! steiner_points, max_degree, avg_degree, edge_count, max_edge_len,
//! avg_edge_len, total_edge_len, min_angle_deg, spanning_ratio`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delaunay::{delaunay, import_triangle, TriangleMeshFiles};
use crate::emanation::{build_emanation, TiePolicy};
use crate::error::{Error, Result};
use crate::geom::{Coord, Point};
use crate::graph::PlaneGraph;
use crate::io::generate::{generate_points, PointModel};
use crate::metrics::{metrics_report, MetricsReport};
use crate::seg::{build_seg, SegConfig};

pub const CSV_COLUMNS: [&str; 12] = [
    "configuration",
    "point_count",
    "data_set",
    "steiner_points",
    "max_degree",
    "avg_degree",
    "edge_count",
    "max_edge_len",
    "avg_edge_len",
    "total_edge_len",
    "min_angle_deg",
    "spanning_ratio",
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Seg,
    Emanation1,
    Emanation2,
    Delaunay,
    /// Meshes produced by Triangle, read from `<dir>/n<size>-<i>.1.node`
    /// and `.1.ele`.
    TriangleImport(PathBuf),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Seg => f.write_str("seg"),
            Algorithm::Emanation1 => f.write_str("emanation1"),
            Algorithm::Emanation2 => f.write_str("emanation2"),
            Algorithm::Delaunay => f.write_str("delaunay"),
            Algorithm::TriangleImport(dir) => write!(f, "triangle-import:{}", dir.display()),
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "seg" => Ok(Algorithm::Seg),
            "emanation1" => Ok(Algorithm::Emanation1),
            "emanation2" => Ok(Algorithm::Emanation2),
            "delaunay" => Ok(Algorithm::Delaunay),
            _ => match s.strip_prefix("triangle-import:") {
                Some(dir) if !dir.is_empty() => Ok(Algorithm::TriangleImport(dir.into())),
                _ => Err(format!(
                    "unknown algorithm {s:?} (expected seg, emanation1, emanation2, delaunay or triangle-import:<dir>)"
                )),
            },
        }
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub seed: u64,
    pub generator: PointModel,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub tie: TiePolicy,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("sizes must not be empty".into()));
        }
        if let Some(n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("instance size {n} is below 2")));
        }
        if self.instances_per_size == 0 {
            return Err(Error::Config("instances_per_size must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithms must not be empty".into()));
        }
        Ok(())
    }

    /// Seed of instance `index` of size `size`.
    pub fn instance_seed(&self, size: usize, index: usize) -> u64 {
        splitmix(splitmix(self.seed ^ splitmix(size as u64)) ^ index as u64)
    }

    /// The point set of one instance, as every algorithm sees it.
    pub fn instance_points(&self, size: usize, index: usize) -> Result<Vec<Point>> {
        generate_points(size, self.instance_seed(size, index), self.generator)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// File stem Triangle input and output use for one instance.
pub fn instance_stem(size: usize, index: usize) -> String {
    format!("n{size}-{index}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub algorithm: Algorithm,
    pub size: usize,
    pub instance: usize,
    pub seed: u64,
    pub report: MetricsReport,
    pub diagnostics: std::collections::BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub configuration: String,
    pub point_count: usize,
    pub data_set: String,
    pub instances: usize,
    pub steiner_points: f64,
    pub max_degree: f64,
    pub avg_degree: f64,
    pub edge_count: f64,
    pub max_edge_len: f64,
    pub avg_edge_len: f64,
    pub total_edge_len: f64,
    pub min_angle_deg: f64,
    pub spanning_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ExperimentRow>,
    pub csv: String,
    pub instances: Vec<InstanceRecord>,
    pub warnings: Vec<String>,
}

impl ExperimentOutput {
    /// One JSON object per line, in (algorithm, size, instance) order.
    pub fn instances_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.instances {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }
}

fn build(alg: &Algorithm, points: &[Point], stem: &str, tie: TiePolicy) -> Result<Option<PlaneGraph>> {
    let margin = Coord::from_int(1);
    Ok(Some(match alg {
        Algorithm::Seg => build_seg(
            points,
            &SegConfig {
                tie,
                ..SegConfig::default()
            },
        )?,
        Algorithm::Emanation1 => build_emanation(points, 1, &margin, tie)?,
        Algorithm::Emanation2 => build_emanation(points, 2, &margin, tie)?,
        Algorithm::Delaunay => delaunay(points)?,
        Algorithm::TriangleImport(dir) => match read_mesh(dir, stem) {
            Some(files) => import_triangle(&files, Some(points))?,
            None => return Ok(None),
        },
    }))
}

fn read_mesh(dir: &Path, stem: &str) -> Option<TriangleMeshFiles> {
    let node_text = std::fs::read_to_string(dir.join(format!("{stem}.1.node"))).ok()?;
    let ele_text = std::fs::read_to_string(dir.join(format!("{stem}.1.ele"))).ok()?;
    Some(TriangleMeshFiles { node_text, ele_text })
}

fn mean(reports: &[&MetricsReport], f: impl Fn(&MetricsReport) -> f64) -> f64 {
    reports.iter().map(|r| f(r)).sum::<f64>() / reports.len() as f64
}

/// Runs the experiment. Instances are built in parallel; rows, records and
/// warnings come out in configuration order regardless of scheduling.
pub fn compare_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.instances_per_size).map(move |i| (n, i)))
        .collect();
    let results: Vec<Vec<std::result::Result<InstanceRecord, String>>> = jobs
        .par_iter()
        .map(|&(size, index)| {
            let points = config.instance_points(size, index)?;
            let stem = instance_stem(size, index);
            config
                .algorithms
                .iter()
                .map(|alg| {
                    Ok(match build(alg, &points, &stem, config.tie)? {
                        Some(graph) => Ok(InstanceRecord {
                            algorithm: alg.clone(),
                            size,
                            instance: index,
                            seed: config.instance_seed(size, index),
                            report: metrics_report(&graph)?,
                            diagnostics: graph.meta.diagnostics,
                        }),
                        None => Err(format!("{alg}: no mesh files for instance {stem}, skipped")),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut instances = Vec::new();
    let mut warnings = Vec::new();
    for (alg_index, _) in config.algorithms.iter().enumerate() {
        for per_job in &results {
            match &per_job[alg_index] {
                Ok(record) => instances.push(record.clone()),
                Err(w) => warnings.push(w.clone()),
            }
        }
    }

    let mut rows = Vec::new();
    for alg in &config.algorithms {
        for &size in &config.sizes {
            let reports: Vec<&MetricsReport> = instances
                .iter()
                .filter(|r| &r.algorithm == alg && r.size == size)
                .map(|r| &r.report)
                .collect();
            if reports.is_empty() {
                continue;
            }
            rows.push(ExperimentRow {
                configuration: alg.to_string(),
                point_count: size,
                data_set: config.generator.to_string(),
                instances: reports.len(),
                steiner_points: mean(&reports, |r| r.steiner_points as f64),
                max_degree: mean(&reports, |r| r.max_degree),
                avg_degree: mean(&reports, |r| r.avg_degree),
                edge_count: mean(&reports, |r| r.edge_count as f64),
                max_edge_len: mean(&reports, |r| r.max_edge_len),
                avg_edge_len: mean(&reports, |r| r.avg_edge_len),
                total_edge_len: mean(&reports, |r| r.total_edge_len),
                min_angle_deg: mean(&reports, |r| r.min_angle_deg),
                spanning_ratio: mean(&reports, |r| r.spanning_ratio),
            });
        }
    }
    let csv = rows_to_csv(&rows)?;
    Ok(ExperimentOutput {
        rows,
        csv,
        instances,
        warnings,
    })
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS)?;
    for r in rows {
        writer.write_record([
            r.configuration.clone(),
            r.point_count.to_string(),
            r.data_set.clone(),
            fixed(r.steiner_points),
            fixed(r.max_degree),
            fixed(r.avg_degree),
            fixed(r.edge_count),
            fixed(r.max_edge_len),
            fixed(r.avg_edge_len),
            fixed(r.total_edge_len),
            fixed(r.min_angle_deg),
            fixed(r.spanning_ratio),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
