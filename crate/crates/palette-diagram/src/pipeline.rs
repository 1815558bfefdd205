//! End-to-end pipeline: ingest, geodesic distances, order optimization,
//! rendering.

use std::path::{Path, PathBuf};

use crate::data::{self, DataMatrix};
use crate::embedding::{self, SgdParams};
use crate::error::{PaletteError, Result};
use crate::geodesic;
use crate::render::{self, DiagramStyle, SvgDocument};

/// Which diagram to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramMode {
    Linear,
    Circular,
}

impl DiagramMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagramMode::Linear => "linear",
            DiagramMode::Circular => "circular",
        }
    }
}

/// Full run configuration for one CLI invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub output_path: PathBuf,
    pub mode: DiagramMode,
    pub k: usize,
    pub eta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub restarts: usize,
    pub has_header: bool,
    pub normalize_rows: bool,
    /// Rescale geodesic distances so the maximum equals this value;
    /// `None` keeps raw distances.
    pub rescale_max: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input_path: PathBuf::new(),
            output_path: PathBuf::new(),
            mode: DiagramMode::Circular,
            k: 10,
            eta: 0.05,
            epochs: 1000,
            seed: 42,
            restarts: 5,
            has_header: false,
            normalize_rows: false,
            rescale_max: Some(2.0),
        }
    }
}

/// Result of a pipeline run on an in-memory matrix.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub svg: SvgDocument,
    /// Dataset ordering: angular order (circular) or ISOMAP order (linear).
    pub order: Vec<usize>,
    /// Final angular stress; `None` in linear mode.
    pub final_stress: Option<f64>,
    /// Non-fatal diagnostics (clamped parameters, repaired connectivity).
    pub warnings: Vec<String>,
}

/// Run the order optimization and rendering on an already-parsed matrix.
pub fn run_on_matrix(m: &DataMatrix, config: &RunConfig) -> Result<PipelineResult> {
    let n = m.n_rows();
    if n < 2 {
        return Err(PaletteError::TooFewPoints { n, min: 2 });
    }
    let mut warnings = Vec::new();

    let ambient = geodesic::pairwise_distances(m);
    let k = if config.k > n - 1 {
        warnings.push(format!(
            "n-neighbors {} exceeds N-1; clamped to {}",
            config.k,
            n - 1
        ));
        n - 1
    } else {
        config.k
    };
    let graph = geodesic::build_knn_graph(&ambient, k)?;
    let connected = geodesic::ensure_connected(&graph, &ambient)?;
    let added = connected.edges().len() - graph.edges().len();
    if added > 0 {
        warnings.push(format!(
            "k-NN graph was disconnected; added {added} bridging edge(s)"
        ));
    }
    let mut distances = geodesic::all_pairs_geodesic(&connected)?;
    if let Some(target) = config.rescale_max {
        distances = geodesic::rescale_distances(&distances, target)?;
    }

    let style = DiagramStyle::for_categories(m.n_cols());
    match config.mode {
        DiagramMode::Circular => {
            let params = SgdParams {
                eta: config.eta,
                epochs: config.epochs,
                seed: config.seed,
                restarts: config.restarts,
                ..SgdParams::default()
            };
            let embedding = embedding::optimize_angles(&distances, &params)?;
            let order = embedding::circular_order(&embedding);
            let svg = render::render_circular(m, &embedding, &style)?;
            Ok(PipelineResult {
                svg,
                order,
                final_stress: Some(embedding.final_stress()),
                warnings,
            })
        }
        DiagramMode::Linear => {
            let ordering = embedding::isomap_ordering(&distances)?;
            let svg = render::render_linear(m, &ordering, &style)?;
            Ok(PipelineResult {
                svg,
                order: ordering.permutation,
                final_stress: None,
                warnings,
            })
        }
    }
}

/// Parse an input document, choosing JSON for a `.json` extension and CSV
/// otherwise.
pub fn parse_input(path: &Path, bytes: &[u8], has_header: bool) -> Result<DataMatrix> {
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        data::parse_json(bytes)
    } else {
        data::parse_csv(bytes, has_header)
    }
}

/// Read the input file, run the pipeline, and write the SVG output.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineResult> {
    let bytes = std::fs::read(&config.input_path).map_err(|source| PaletteError::Io {
        path: config.input_path.clone(),
        source,
    })?;
    let mut m = parse_input(&config.input_path, &bytes, config.has_header)?;
    if config.normalize_rows {
        m = data::normalize_rows(&m)?;
    }
    let result = run_on_matrix(&m, config)?;
    std::fs::write(&config.output_path, result.svg.as_str()).map_err(|source| {
        PaletteError::Io {
            path: config.output_path.clone(),
            source,
        }
    })?;
    Ok(result)
}
