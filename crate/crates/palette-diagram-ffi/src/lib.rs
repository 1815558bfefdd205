//! C ABI for the palette-diagram pipeline.
//!
//! Datasets and run results are opaque handles created and destroyed
//! through this API. Every fallible call returns a [`PdStatus`] code; on
//! failure a human-readable message is stored per thread and can be read
//! with [`pd_last_error_message`] until the next failing call.
//!
//! The generated header lives at `include/palette_diagram.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::ptr;

use palette_diagram::pipeline::{run_on_matrix, DiagramMode, PipelineResult, RunConfig};
use palette_diagram::{normalize_rows, parse_csv, parse_json, DataMatrix, PaletteError};

/// Status code for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    /// Null pointer or otherwise unusable argument at the FFI boundary.
    InvalidArgument,
    EmptyInput,
    NegativeValue,
    RaggedRows,
    NotNumeric,
    InvalidUtf8,
    MalformedDocument,
    ZeroRow,
    BadK,
    Disconnected,
    DegenerateDistances,
    DimensionMismatch,
    DegenerateSpectrum,
    TooFewPoints,
    InvalidParams,
    InvalidStyle,
    Io,
}

/// Diagram type selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdMode {
    Circular = 0,
    Linear = 1,
}

/// Pipeline settings; obtain defaults from [`pd_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdOptions {
    pub mode: PdMode,
    /// Neighbor count for the k-NN graph (clamped to N-1).
    pub n_neighbors: usize,
    /// SGD learning rate (circular mode).
    pub eta: f64,
    /// SGD epochs per restart (circular mode).
    pub epochs: usize,
    /// Base seed; restart r uses seed + r.
    pub seed: u64,
    /// Independent restarts; the lowest-stress one wins.
    pub restarts: usize,
    /// Scale each row to sum to 1 before embedding.
    pub normalize_rows: bool,
    /// Rescale geodesic distances so the maximum equals `rescale_max`.
    pub rescale: bool,
    pub rescale_max: f64,
}

/// Opaque parsed dataset handle.
#[repr(C)]
pub struct PdDataset {
    _private: [u8; 0],
}

/// Opaque run result handle.
#[repr(C)]
pub struct PdRunResult {
    _private: [u8; 0],
}

struct RunResultInner {
    result: PipelineResult,
    svg: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(err: &PaletteError) -> PdStatus {
    match err {
        PaletteError::EmptyInput => PdStatus::EmptyInput,
        PaletteError::NegativeValue { .. } => PdStatus::NegativeValue,
        PaletteError::RaggedRows { .. } => PdStatus::RaggedRows,
        PaletteError::NotNumeric { .. } => PdStatus::NotNumeric,
        PaletteError::InvalidUtf8 => PdStatus::InvalidUtf8,
        PaletteError::MalformedDocument(_) => PdStatus::MalformedDocument,
        PaletteError::ZeroRow(_) => PdStatus::ZeroRow,
        PaletteError::BadK { .. } => PdStatus::BadK,
        PaletteError::Disconnected { .. } => PdStatus::Disconnected,
        PaletteError::DegenerateDistances => PdStatus::DegenerateDistances,
        PaletteError::DimensionMismatch { .. } => PdStatus::DimensionMismatch,
        PaletteError::DegenerateSpectrum(_) => PdStatus::DegenerateSpectrum,
        PaletteError::TooFewPoints { .. } => PdStatus::TooFewPoints,
        PaletteError::InvalidParams(_) => PdStatus::InvalidParams,
        PaletteError::InvalidStyle(_) => PdStatus::InvalidStyle,
        PaletteError::Io { .. } => PdStatus::Io,
    }
}

fn fail(err: &PaletteError) -> PdStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn invalid_argument(message: &str) -> PdStatus {
    set_last_error(message);
    PdStatus::InvalidArgument
}

fn dataset_into_raw(m: DataMatrix) -> *mut PdDataset {
    Box::into_raw(Box::new(m)) as *mut PdDataset
}

unsafe fn dataset_ref<'a>(handle: *const PdDataset) -> &'a DataMatrix {
    &*(handle as *const DataMatrix)
}

unsafe fn result_ref<'a>(handle: *const PdRunResult) -> &'a RunResultInner {
    &*(handle as *const RunResultInner)
}

/// Default options: circular mode, 10 neighbors, eta 0.05, 1000 epochs,
/// seed 42, 5 restarts, no row normalization, rescale maximum to 2.
#[no_mangle]
pub extern "C" fn pd_options_default() -> PdOptions {
    PdOptions {
        mode: PdMode::Circular,
        n_neighbors: 10,
        eta: 0.05,
        epochs: 1000,
        seed: 42,
        restarts: 5,
        normalize_rows: false,
        rescale: true,
        rescale_max: 2.0,
    }
}

unsafe fn parse_dataset(
    bytes: *const u8,
    len: usize,
    out: *mut *mut PdDataset,
    parse: impl FnOnce(&[u8]) -> Result<DataMatrix, PaletteError>,
) -> PdStatus {
    if out.is_null() {
        return invalid_argument("out pointer is null");
    }
    *out = ptr::null_mut();
    if bytes.is_null() && len > 0 {
        return invalid_argument("data pointer is null");
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(bytes, len)
    };
    match parse(slice) {
        Ok(m) => {
            *out = dataset_into_raw(m);
            PdStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Parse CSV text into a dataset handle.
///
/// # Safety
/// `bytes` must point to `len` readable bytes (or be null when `len` is 0)
/// and `out` must be a valid pointer. On success the caller owns the handle
/// and must release it with [`pd_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn pd_dataset_parse_csv(
    bytes: *const u8,
    len: usize,
    has_header: bool,
    out: *mut *mut PdDataset,
) -> PdStatus {
    parse_dataset(bytes, len, out, |slice| parse_csv(slice, has_header))
}

/// Parse a JSON document into a dataset handle.
///
/// # Safety
/// Same contract as [`pd_dataset_parse_csv`].
#[no_mangle]
pub unsafe extern "C" fn pd_dataset_parse_json(
    bytes: *const u8,
    len: usize,
    out: *mut *mut PdDataset,
) -> PdStatus {
    parse_dataset(bytes, len, out, parse_json)
}

/// Number of datasets (rows).
///
/// # Safety
/// `dataset` must be a live handle from this API, or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pd_dataset_rows(dataset: *const PdDataset) -> usize {
    if dataset.is_null() {
        return 0;
    }
    dataset_ref(dataset).n_rows()
}

/// Number of categories (columns).
///
/// # Safety
/// `dataset` must be a live handle from this API, or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pd_dataset_cols(dataset: *const PdDataset) -> usize {
    if dataset.is_null() {
        return 0;
    }
    dataset_ref(dataset).n_cols()
}

/// Release a dataset handle. Null is a no-op.
///
/// # Safety
/// `dataset` must be a handle from this API that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_dataset_free(dataset: *mut PdDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset as *mut DataMatrix));
    }
}

/// Run the full pipeline on a dataset and produce a result handle.
///
/// # Safety
/// `dataset` must be a live handle, `options` and `out` valid pointers. On
/// success the caller owns the result handle and must release it with
/// [`pd_run_result_free`].
#[no_mangle]
pub unsafe extern "C" fn pd_run(
    dataset: *const PdDataset,
    options: *const PdOptions,
    out: *mut *mut PdRunResult,
) -> PdStatus {
    if out.is_null() {
        return invalid_argument("out pointer is null");
    }
    *out = ptr::null_mut();
    if dataset.is_null() {
        return invalid_argument("dataset handle is null");
    }
    if options.is_null() {
        return invalid_argument("options pointer is null");
    }
    let options = &*options;
    let config = RunConfig {
        mode: match options.mode {
            PdMode::Circular => DiagramMode::Circular,
            PdMode::Linear => DiagramMode::Linear,
        },
        k: options.n_neighbors,
        eta: options.eta,
        epochs: options.epochs,
        seed: options.seed,
        restarts: options.restarts,
        normalize_rows: options.normalize_rows,
        rescale_max: options.rescale.then_some(options.rescale_max),
        ..RunConfig::default()
    };

    let matrix;
    let m = if options.normalize_rows {
        matrix = match normalize_rows(dataset_ref(dataset)) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        &matrix
    } else {
        dataset_ref(dataset)
    };
    match run_on_matrix(m, &config) {
        Ok(result) => {
            // SVG text is XML and never contains NUL bytes.
            let svg = CString::new(result.svg.as_str()).expect("svg has no NUL bytes");
            let inner = RunResultInner { result, svg };
            *out = Box::into_raw(Box::new(inner)) as *mut PdRunResult;
            PdStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// NUL-terminated SVG document text. Valid until the result is freed.
///
/// # Safety
/// `result` must be a live handle from [`pd_run`], or null (returns null).
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_svg(result: *const PdRunResult) -> *const c_char {
    if result.is_null() {
        return ptr::null();
    }
    result_ref(result).svg.as_ptr()
}

/// Length of the SVG text in bytes, excluding the NUL terminator.
///
/// # Safety
/// `result` must be a live handle from [`pd_run`], or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_svg_len(result: *const PdRunResult) -> usize {
    if result.is_null() {
        return 0;
    }
    result_ref(result).svg.as_bytes().len()
}

/// Number of entries in the dataset ordering.
///
/// # Safety
/// `result` must be a live handle from [`pd_run`], or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_order_len(result: *const PdRunResult) -> usize {
    if result.is_null() {
        return 0;
    }
    result_ref(result).result.order.len()
}

/// Copy the dataset ordering into `buffer`, which must hold at least
/// [`pd_run_result_order_len`] entries.
///
/// # Safety
/// `result` must be a live handle and `buffer` writable for `capacity`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_order(
    result: *const PdRunResult,
    buffer: *mut usize,
    capacity: usize,
) -> PdStatus {
    if result.is_null() {
        return invalid_argument("result handle is null");
    }
    let order = &result_ref(result).result.order;
    if buffer.is_null() {
        return invalid_argument("buffer pointer is null");
    }
    if capacity < order.len() {
        return invalid_argument("buffer capacity is smaller than the ordering");
    }
    ptr::copy_nonoverlapping(order.as_ptr(), buffer, order.len());
    PdStatus::Ok
}

/// Final angular stress of the circular embedding; NaN in linear mode.
///
/// # Safety
/// `result` must be a live handle from [`pd_run`], or null (returns NaN).
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_final_stress(result: *const PdRunResult) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    result_ref(result).result.final_stress.unwrap_or(f64::NAN)
}

/// Release a result handle. Null is a no-op.
///
/// # Safety
/// `result` must be a handle from [`pd_run`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_run_result_free(result: *mut PdRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result as *mut RunResultInner));
    }
}

/// Message for the most recent failure on this thread. Valid until the
/// next failing call on the same thread. Empty when no failure occurred.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static name of a status code, e.g. `"NegativeValue"`.
#[no_mangle]
pub extern "C" fn pd_status_name(status: PdStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        PdStatus::Ok => b"Ok\0",
        PdStatus::InvalidArgument => b"InvalidArgument\0",
        PdStatus::EmptyInput => b"EmptyInput\0",
        PdStatus::NegativeValue => b"NegativeValue\0",
        PdStatus::RaggedRows => b"RaggedRows\0",
        PdStatus::NotNumeric => b"NotNumeric\0",
        PdStatus::InvalidUtf8 => b"InvalidUtf8\0",
        PdStatus::MalformedDocument => b"MalformedDocument\0",
        PdStatus::ZeroRow => b"ZeroRow\0",
        PdStatus::BadK => b"BadK\0",
        PdStatus::Disconnected => b"Disconnected\0",
        PdStatus::DegenerateDistances => b"DegenerateDistances\0",
        PdStatus::DimensionMismatch => b"DimensionMismatch\0",
        PdStatus::DegenerateSpectrum => b"DegenerateSpectrum\0",
        PdStatus::TooFewPoints => b"TooFewPoints\0",
        PdStatus::InvalidParams => b"InvalidParams\0",
        PdStatus::InvalidStyle => b"InvalidStyle\0",
        PdStatus::Io => b"Io\0",
    };
    name.as_ptr() as *const c_char
}
