//! Palette diagrams: ordering and visualization of collections of
//! categorical datasets.
//!
//! Given `N` datasets over the same `K` categories, this crate finds a
//! one-dimensional order in which similar datasets sit next to each other
//! and renders the collection as an SVG diagram:
//!
//! - **Circular**: angles are optimized by stochastic gradient descent on
//!   the angular stress between geodesic data distances and the embedded
//!   distance `1 - cos(theta_i - theta_j)`. Categories are drawn as
//!   concentric rings plus a central disc colored by each dataset's
//!   dominant category.
//! - **Linear**: datasets are ordered by a 1-D ISOMAP embedding of the
//!   same geodesic distances and drawn as a streamgraph of stacked bands.
//!
//! Both orders are computed on shortest-path distances over a k-nearest-
//! neighbor graph, so they follow the shape of the data rather than raw
//! straight-line distances. All entry points are deterministic for a fixed
//! seed.

pub mod cli;
pub mod data;
pub mod embedding;
pub mod error;
pub mod geodesic;
pub mod pipeline;
pub mod render;

pub use data::{normalize_rows, parse_csv, parse_json, DataMatrix};
pub use embedding::{
    angular_distance, circular_order, isomap_ordering, optimize_angles, stress, stress_gradient,
    AngularEmbedding, LinearOrdering, SgdParams,
};
pub use error::{PaletteError, Result};
pub use geodesic::{
    all_pairs_geodesic, build_knn_graph, ensure_connected, pairwise_distances, rescale_distances,
    DistanceMatrix, NeighborGraph,
};
pub use pipeline::{run_on_matrix, run_pipeline, DiagramMode, PipelineResult, RunConfig};
pub use render::{
    assign_colors, layer_order, map_categories, render_circular, render_linear, DiagramStyle,
    SvgDocument,
};
