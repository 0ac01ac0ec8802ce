#ifndef TOPOCLUST_H
#define TOPOCLUST_H

/* Generated by cbindgen from the topoclust-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Which bifiltration backs a grid computation.
 */
typedef enum TcConstruction {
  TC_CONSTRUCTION_TC_ELEMENT = 0,
  TC_CONSTRUCTION_TC_NERVE = 1,
} TcConstruction;

/*
 Layout optimiser selection for `tc_min_crossings`.
 */
typedef enum TcSankeyMode {
  TC_SANKEY_MODE_TC_EXACT = 0,
  TC_SANKEY_MODE_TC_HEURISTIC = 1,
} TcSankeyMode;

/*
 Status code of every fallible call.
 */
typedef enum TcStatus {
  TC_STATUS_TC_OK = 0,
  TC_STATUS_TC_NULL_ARGUMENT = 1,
  TC_STATUS_TC_INVALID_UTF8 = 2,
  TC_STATUS_TC_PARSE_ERROR = 3,
  TC_STATUS_TC_INVALID_ARGUMENT = 4,
  TC_STATUS_TC_MISMATCH = 5,
  TC_STATUS_TC_RESOURCE_CAP = 6,
  TC_STATUS_TC_IO_ERROR = 7,
  TC_STATUS_TC_INTERNAL_ERROR = 8,
} TcStatus;

/*
 Opaque handle to an immutable sequence of partitions.
 */
typedef struct TcSequence TcSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message into `buffer` (truncated,
 always NUL-terminated when capacity > 0) and returns the full length of
 the message including the terminator.
 */
size_t tc_last_error(char *buffer, size_t capacity);

/*
 Parses a sequence file (see the library docs for the format).
 */
enum TcStatus tc_sequence_parse_file(const char *path, struct TcSequence **out);

/*
 Parses sequence-file text from memory.
 */
enum TcStatus tc_sequence_parse(const char *text, struct TcSequence **out);

/*
 Builds a sequence from a label matrix: `labels[x * n_layers + m]` is the
 cluster label of element `x` in layer `m`; labels are interned per
 column. `change_points` may be null for the default `0..M-1`.
 */
enum TcStatus tc_sequence_from_labels(size_t n_elements,
                                      size_t n_layers,
                                      const uint32_t *labels,
                                      const double *change_points,
                                      struct TcSequence **out);

/*
 Releases a sequence handle. Null is a no-op.
 */
void tc_sequence_free(struct TcSequence *seq);

/*
 Number of layers, or 0 for a null handle.
 */
size_t tc_sequence_layer_count(const struct TcSequence *seq);

/*
 Ground-set size, or 0 for a null handle.
 */
size_t tc_sequence_element_count(const struct TcSequence *seq);

/*
 Fills `out_values` (row-major `m x m`, caller-allocated) with the
 Hilbert-function grid; entries below the diagonal are zero.
 */
enum TcStatus tc_hilbert_grid(const struct TcSequence *seq,
                              uint32_t dim,
                              enum TcConstruction construction,
                              uint64_t *out_values);

/*
 Average 0-/1-conflict measures and the superdiagonal crossing bound.
 Any output pointer may be null to skip it.
 */
enum TcStatus tc_conflict_summary(const struct TcSequence *seq,
                                  enum TcConstruction construction,
                                  double *out_c0,
                                  double *out_c1,
                                  uint64_t *out_hf1_bound);

/*
 L2 distance between the Hilbert grids of two sequences over the same
 change points.
 */
enum TcStatus tc_hilbert_distance(const struct TcSequence *a,
                                  const struct TcSequence *b,
                                  uint32_t dim,
                                  enum TcConstruction construction,
                                  double *out_distance);

/*
 Optimised Sankey-layout crossing number (exact under the width cap,
 barycenter heuristic otherwise).
 */
enum TcStatus tc_min_crossings(const struct TcSequence *seq,
                               enum TcSankeyMode mode,
                               uint32_t sweeps,
                               uint64_t *out_crossings);

/*
 Count of strong-triangle-inequality violations of the first-merge
 matrix conditioned on the first layer.
 */
enum TcStatus tc_strong_triangle_violations(const struct TcSequence *seq, uint64_t *out_count);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TOPOCLUST_H */
