//! Emanation graphs and simplified emanation graphs (SEG) of planar point
//! sets, with the metrics and Delaunay baselines used to compare them.
//!
//! Construction is exact: input coordinates are rationals, grade-2 ray
//! geometry stays on a rational lattice, and travel times are compared in
//! `Z[√2]`. Metrics are reported in `f64`.

mod assemble;
pub mod delaunay;
pub mod emanation;
pub mod error;
pub mod geom;
pub mod graph;
pub mod io;
mod kernel;
pub mod metrics;
pub mod planarity;
pub mod pointset;
pub mod rangetree;
pub mod seg;

pub use error::{Error, Result};
pub use geom::{
    compare_times, cone_of, orientation, ray_intersection, ConeId, Coord, Dir, Frame,
    Orientation, Point, Pos, RayTime,
};
pub use delaunay::{delaunay, import_triangle, TriangleMeshFiles};
pub use emanation::{build_emanation, build_emanation_approx, simulate_rays, BBox, TiePolicy};
pub use graph::{GraphMeta, PlaneGraph, Vertex, VertexKind};
pub use io::{
    compare_experiment, generate_points, render_svg, Algorithm, ExperimentConfig, GraphFile, PointModel, PointSetFile,
    SvgStyle,
};
pub use metrics::{metrics_report, min_angle, shortest_paths_from, spanning_ratio, MetricsReport};
pub use planarity::{check_planarity, PlanarityReport};
pub use pointset::PointSet;
pub use seg::{build_seg, BlockingRule, NeighborQueries, SegConfig};
