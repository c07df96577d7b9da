//! File formats, point generation, SVG output and the comparison harness.
//!
//! Coordinates are always written as decimal strings so that a write/read
//! round trip reproduces the exact rationals.

pub mod experiment;
pub mod generate;
pub mod graph_file;
pub mod points;
pub mod svg;

pub use experiment::{
    compare_experiment, instance_stem, Algorithm, ExperimentConfig, ExperimentOutput, ExperimentRow,
    InstanceRecord, CSV_COLUMNS,
};
pub use generate::{generate_points, PointModel};
pub use graph_file::{graph_from_json, graph_to_json, GraphFile};
pub use points::{
    points_from_csv, points_from_json, points_to_csv, points_to_json, points_to_triangle_node, read_points,
    write_points, PointRecord, PointSetFile,
};
pub use svg::{render_svg, SvgStyle};
