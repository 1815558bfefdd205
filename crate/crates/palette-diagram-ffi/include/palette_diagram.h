#ifndef PALETTE_DIAGRAM_H
#define PALETTE_DIAGRAM_H

/* Generated by cbindgen from palette-diagram-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Diagram type selector.
 */
typedef enum PdMode {
  PD_MODE_CIRCULAR = 0,
  PD_MODE_LINEAR = 1,
} PdMode;

/**
 * Status code for every fallible call.
 */
typedef enum PdStatus {
  PD_STATUS_OK = 0,
  /**
   * Null pointer or otherwise unusable argument at the FFI boundary.
   */
  PD_STATUS_INVALID_ARGUMENT,
  PD_STATUS_EMPTY_INPUT,
  PD_STATUS_NEGATIVE_VALUE,
  PD_STATUS_RAGGED_ROWS,
  PD_STATUS_NOT_NUMERIC,
  PD_STATUS_INVALID_UTF8,
  PD_STATUS_MALFORMED_DOCUMENT,
  PD_STATUS_ZERO_ROW,
  PD_STATUS_BAD_K,
  PD_STATUS_DISCONNECTED,
  PD_STATUS_DEGENERATE_DISTANCES,
  PD_STATUS_DIMENSION_MISMATCH,
  PD_STATUS_DEGENERATE_SPECTRUM,
  PD_STATUS_TOO_FEW_POINTS,
  PD_STATUS_INVALID_PARAMS,
  PD_STATUS_INVALID_STYLE,
  PD_STATUS_IO,
} PdStatus;

/**
 * Pipeline settings; obtain defaults from [`pd_options_default`].
 */
typedef struct PdOptions {
  enum PdMode mode;
  /**
   * Neighbor count for the k-NN graph (clamped to N-1).
   */
  size_t n_neighbors;
  /**
   * SGD learning rate (circular mode).
   */
  double eta;
  /**
   * SGD epochs per restart (circular mode).
   */
  size_t epochs;
  /**
   * Base seed; restart r uses seed + r.
   */
  uint64_t seed;
  /**
   * Independent restarts; the lowest-stress one wins.
   */
  size_t restarts;
  /**
   * Scale each row to sum to 1 before embedding.
   */
  bool normalize_rows;
  /**
   * Rescale geodesic distances so the maximum equals `rescale_max`.
   */
  bool rescale;
  double rescale_max;
} PdOptions;

/**
 * Opaque parsed dataset handle.
 */
typedef struct PdDataset {
  uint8_t _private[0];
} PdDataset;

/**
 * Opaque run result handle.
 */
typedef struct PdRunResult {
  uint8_t _private[0];
} PdRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: circular mode, 10 neighbors, eta 0.05, 1000 epochs,
 * seed 42, 5 restarts, no row normalization, rescale maximum to 2.
 */
struct PdOptions pd_options_default(void);

/**
 * Parse CSV text into a dataset handle.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes (or be null when `len` is 0)
 * and `out` must be a valid pointer. On success the caller owns the handle
 * and must release it with [`pd_dataset_free`].
 */
enum PdStatus pd_dataset_parse_csv(const uint8_t *bytes,
                                   size_t len,
                                   bool has_header,
                                   struct PdDataset **out);

/**
 * Parse a JSON document into a dataset handle.
 *
 * # Safety
 * Same contract as [`pd_dataset_parse_csv`].
 */
enum PdStatus pd_dataset_parse_json(const uint8_t *bytes, size_t len, struct PdDataset **out);

/**
 * Number of datasets (rows).
 *
 * # Safety
 * `dataset` must be a live handle from this API, or null (returns 0).
 */
size_t pd_dataset_rows(const struct PdDataset *dataset);

/**
 * Number of categories (columns).
 *
 * # Safety
 * `dataset` must be a live handle from this API, or null (returns 0).
 */
size_t pd_dataset_cols(const struct PdDataset *dataset);

/**
 * Release a dataset handle. Null is a no-op.
 *
 * # Safety
 * `dataset` must be a handle from this API that has not been freed.
 */
void pd_dataset_free(struct PdDataset *dataset);

/**
 * Run the full pipeline on a dataset and produce a result handle.
 *
 * # Safety
 * `dataset` must be a live handle, `options` and `out` valid pointers. On
 * success the caller owns the result handle and must release it with
 * [`pd_run_result_free`].
 */
enum PdStatus pd_run(const struct PdDataset *dataset,
                     const struct PdOptions *options,
                     struct PdRunResult **out);

/**
 * NUL-terminated SVG document text. Valid until the result is freed.
 *
 * # Safety
 * `result` must be a live handle from [`pd_run`], or null (returns null).
 */
const char *pd_run_result_svg(const struct PdRunResult *result);

/**
 * Length of the SVG text in bytes, excluding the NUL terminator.
 *
 * # Safety
 * `result` must be a live handle from [`pd_run`], or null (returns 0).
 */
size_t pd_run_result_svg_len(const struct PdRunResult *result);

/**
 * Number of entries in the dataset ordering.
 *
 * # Safety
 * `result` must be a live handle from [`pd_run`], or null (returns 0).
 */
size_t pd_run_result_order_len(const struct PdRunResult *result);

/**
 * Copy the dataset ordering into `buffer`, which must hold at least
 * [`pd_run_result_order_len`] entries.
 *
 * # Safety
 * `result` must be a live handle and `buffer` writable for `capacity`
 * entries.
 */
enum PdStatus pd_run_result_order(const struct PdRunResult *result,
                                  size_t *buffer,
                                  size_t capacity);

/**
 * Final angular stress of the circular embedding; NaN in linear mode.
 *
 * # Safety
 * `result` must be a live handle from [`pd_run`], or null (returns NaN).
 */
double pd_run_result_final_stress(const struct PdRunResult *result);

/**
 * Release a result handle. Null is a no-op.
 *
 * # Safety
 * `result` must be a handle from [`pd_run`] that has not been freed.
 */
void pd_run_result_free(struct PdRunResult *result);

/**
 * Message for the most recent failure on this thread. Valid until the
 * next failing call on the same thread. Empty when no failure occurred.
 */
const char *pd_last_error_message(void);

/**
 * Static name of a status code, e.g. `"NegativeValue"`.
 */
const char *pd_status_name(enum PdStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PALETTE_DIAGRAM_H */
