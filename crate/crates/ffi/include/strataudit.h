#ifndef STRATAUDIT_H
#define STRATAUDIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StratStatus {
  STRAT_STATUS_OK = 0,
  STRAT_STATUS_NULL_POINTER = 1,
  STRAT_STATUS_INVALID_ARGUMENT = 2,
  STRAT_STATUS_DEGENERATE_DIRECTION = 3,
  STRAT_STATUS_INVALID_COMPLEX = 4,
  STRAT_STATUS_PARSE = 5,
  STRAT_STATUS_REJECTED = 6,
  STRAT_STATUS_IO = 7,
  STRAT_STATUS_INTERNAL = 8,
} StratStatus;

/**
 * A planar simplicial complex.
 */
typedef struct StratComplex StratComplex;

/**
 * A persistence diagram, points sorted by dimension, birth, death.
 */
typedef struct StratDiagram StratDiagram;

/**
 * An integer-valued step function of height.
 */
typedef struct StratStepFunction StratStepFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *strat_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *strat_version(void);

/**
 * Builds a complex from `n_vertices` interleaved `x, y` pairs, `n_edges`
 * vertex-index pairs and `n_triangles` vertex-index triples. The complex
 * must be closed under faces and geometrically embedded.
 *
 * # Safety
 * Each array must hold the stated number of elements; `out` must be writable.
 */
enum StratStatus strat_complex_new(const double *xy,
                                   size_t n_vertices,
                                   const size_t *edges,
                                   size_t n_edges,
                                   const size_t *triangles,
                                   size_t n_triangles,
                                   struct StratComplex **out_complex);

/**
 * Parses a complex from `.gsc` text.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum StratStatus strat_complex_from_gsc(const char *text, struct StratComplex **out_complex);

/**
 * # Safety
 * `complex` must come from this library and not be freed twice. Null is ignored.
 */
void strat_complex_free(struct StratComplex *complex);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `complex` must be null or a live handle.
 */
size_t strat_complex_num_vertices(const struct StratComplex *complex);

/**
 * Length of the smallest top cell of the direction circle.
 *
 * # Safety
 * `complex` must be a live handle; `out_value` must be writable.
 */
enum StratStatus strat_min_stratum(const struct StratComplex *complex, double *out_value);

/**
 * Writes up to `capacity` arcs of the observing region of `vertex` as
 * `(start, length)` pairs and the total arc count to `out_count`. Call
 * with `capacity = 0` to size the buffers.
 *
 * # Safety
 * `starts` and `lengths` must hold `capacity` elements; `out_count` must be writable.
 */
enum StratStatus strat_observing_region(const struct StratComplex *complex,
                                        size_t vertex,
                                        double *starts,
                                        double *lengths,
                                        size_t capacity,
                                        size_t *out_count);

/**
 * Number of vertices observed by none of the `n` directions.
 *
 * # Safety
 * `angles` must hold `n` elements; `out_missed` must be writable.
 */
enum StratStatus strat_missed_count(const struct StratComplex *complex,
                                    const double *angles,
                                    size_t n,
                                    size_t *out_missed);

/**
 * Persistence diagram of the lower-star filtration in direction `angle`.
 *
 * # Safety
 * `complex` must be a live handle; `out_diagram` must be writable.
 */
enum StratStatus strat_persistence_diagram(const struct StratComplex *complex,
                                           double angle,
                                           struct StratDiagram **out_diagram);

/**
 * # Safety
 * `diagram` must be null or a live handle.
 */
size_t strat_diagram_len(const struct StratDiagram *diagram);

/**
 * Point `index`; essential points have death `+inf`.
 *
 * # Safety
 * `diagram` must be a live handle; the outputs must be writable.
 */
enum StratStatus strat_diagram_point(const struct StratDiagram *diagram,
                                     size_t index,
                                     uint8_t *out_dim,
                                     double *out_birth,
                                     double *out_death);

/**
 * # Safety
 * Both handles must be live; `out_distance` must be writable.
 */
enum StratStatus strat_bottleneck_distance(const struct StratDiagram *a,
                                           const struct StratDiagram *b,
                                           double *out_distance);

/**
 * # Safety
 * `diagram` must come from this library and not be freed twice. Null is ignored.
 */
void strat_diagram_free(struct StratDiagram *diagram);

/**
 * Euler characteristic curve in direction `angle`.
 *
 * # Safety
 * `complex` must be a live handle; `out_function` must be writable.
 */
enum StratStatus strat_euler_curve(const struct StratComplex *complex,
                                   double angle,
                                   struct StratStepFunction **out_function);

/**
 * Number of breakpoints.
 *
 * # Safety
 * `function` must be null or a live handle.
 */
size_t strat_step_len(const struct StratStepFunction *function);

/**
 * Breakpoint `index`: the function takes `value` from `height` on.
 *
 * # Safety
 * `function` must be a live handle; the outputs must be writable.
 */
enum StratStatus strat_step_breakpoint(const struct StratStepFunction *function,
                                       size_t index,
                                       double *out_height,
                                       int64_t *out_value);

/**
 * Value at height `t`, or 0 for a null handle.
 *
 * # Safety
 * `function` must be null or a live handle.
 */
int64_t strat_step_eval(const struct StratStepFunction *function, double t);

/**
 * # Safety
 * Both handles must be live; `out_distance` must be writable.
 */
enum StratStatus strat_ecf_l1_distance(const struct StratStepFunction *a,
                                       const struct StratStepFunction *b,
                                       double *out_distance);

/**
 * # Safety
 * `function` must come from this library and not be freed twice. Null is ignored.
 */
void strat_step_free(struct StratStepFunction *function);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATAUDIT_H */
