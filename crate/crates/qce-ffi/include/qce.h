/* C interface for the qce similarity-index library. */

#ifndef QCE_H
#define QCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The standard benchmark positions.
 */
typedef enum {
  QCE_BUILTIN_CAPITALISM = 0,
  QCE_BUILTIN_COMMUNISM = 1,
  QCE_BUILTIN_SCANDINAVIAN_SOCIALISM = 2,
} QceBuiltin;

/**
 * Result of a fallible call.
 */
typedef enum {
  QCE_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  QCE_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument failed validation (bad weights, bad name, bad scale).
   */
  QCE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Vector, benchmark, scale, or weight lengths disagree.
   */
  QCE_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * A score lies outside its dimension's admissible range.
   */
  QCE_STATUS_OUT_OF_RANGE = 4,
  /**
   * The benchmark admits no distance in some dimension.
   */
  QCE_STATUS_DEGENERATE_DIMENSION = 5,
  /**
   * A string argument was not valid UTF-8.
   */
  QCE_STATUS_INVALID_UTF8 = 6,
} QceStatus;

/**
 * Opaque handle to a named benchmark position.
 */
typedef struct QceBenchmark QceBenchmark;

/**
 * Opaque handle to a foundation scale.
 */
typedef struct QceScale QceScale;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *qce_status_message(QceStatus status);

/**
 * The default scale: three dimensions, each spanning [0, 10].
 */
QceScale *qce_scale_default(void);

/**
 * A scale with `dims` identical `[min, max]` dimensions. NULL when the
 * range is invalid or `dims` is zero.
 */
QceScale *qce_scale_uniform(uintptr_t dims, double min, double max);

/**
 * Number of dimensions; 0 for NULL.
 *
 * # Safety
 * `scale` must be NULL or a live handle from a `qce_scale_*` constructor.
 */
uintptr_t qce_scale_dims(const QceScale *scale);

/**
 * # Safety
 * `scale` must be NULL or a handle from a `qce_scale_*` constructor that
 * has not been freed yet.
 */
void qce_scale_free(QceScale *scale);

/**
 * One of the standard benchmarks on the default scale.
 */
QceBenchmark *qce_benchmark_builtin(QceBuiltin which);

/**
 * Create a benchmark from `len` coordinates validated against `scale`.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `position` must point to `len`
 * doubles, `scale` must be a live scale handle, and `out` must be a valid
 * destination pointer.
 */
QceStatus qce_benchmark_new(const char *name,
                            const double *position,
                            uintptr_t len,
                            const QceScale *scale,
                            QceBenchmark **out);

/**
 * Derive a benchmark as the componentwise mean of `count` vectors laid
 * out row-major in `vectors` (`count * dims` doubles).
 *
 * # Safety
 * Pointer arguments as in [`qce_benchmark_new`]; `vectors` must point to
 * `count * dims` doubles.
 */
QceStatus qce_benchmark_derive(const char *name,
                               const double *vectors,
                               uintptr_t count,
                               uintptr_t dims,
                               const QceScale *scale,
                               QceBenchmark **out);

/**
 * Copy the benchmark's coordinates into `out` (`len` doubles).
 *
 * # Safety
 * `benchmark` must be a live benchmark handle and `out` must point to at
 * least `len` writable doubles.
 */
QceStatus qce_benchmark_position(const QceBenchmark *benchmark, double *out, uintptr_t len);

/**
 * The benchmark's name as a newly allocated string; free with
 * [`qce_string_free`]. NULL for a NULL handle.
 *
 * # Safety
 * `benchmark` must be NULL or a live benchmark handle.
 */
char *qce_benchmark_name(const QceBenchmark *benchmark);

/**
 * # Safety
 * `benchmark` must be NULL or a handle from a `qce_benchmark_*`
 * constructor that has not been freed yet.
 */
void qce_benchmark_free(QceBenchmark *benchmark);

/**
 * # Safety
 * `s` must be NULL or a string previously returned by this library.
 */
void qce_string_free(char *s);

/**
 * Capitalism similarity of a default-scale (mo, po, sg) triple.
 *
 * # Safety
 * `out` must point to a writable double.
 */
QceStatus qce_capsi(double mo, double po, double sg, double *out);

/**
 * Communism similarity of a default-scale (mo, po, sg) triple.
 *
 * # Safety
 * `out` must point to a writable double.
 */
QceStatus qce_comsi(double mo, double po, double sg, double *out);

/**
 * Socialism similarity against the built-in Scandinavian benchmark.
 *
 * # Safety
 * `out` must point to a writable double.
 */
QceStatus qce_socsi(double mo, double po, double sg, double *out);

/**
 * Manhattan distance between two `len`-dimensional score vectors on a
 * shared scale. The aggregate is always written; per-dimension distances
 * are written to `per_dim` when it is non-NULL (`len` doubles).
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `scale` must be a live scale
 * handle; `per_dim` must be NULL or point to `len` writable doubles;
 * `aggregate` must be writable.
 */
QceStatus qce_l1_distance(const double *x,
                          const double *y,
                          uintptr_t len,
                          const QceScale *scale,
                          double *aggregate,
                          double *per_dim);

/**
 * Fixed-range similarity of `x` (`len` doubles) to a benchmark. Pass
 * NULL `weights` for equal weighting.
 *
 * # Safety
 * Pointers as in [`qce_l1_distance`]; handles must be live.
 */
QceStatus qce_similarity_fixed_range(const double *x,
                                     uintptr_t len,
                                     const QceBenchmark *benchmark,
                                     const QceScale *scale,
                                     const double *weights,
                                     double *out);

/**
 * Benchmark-relative similarity of `x` (`len` doubles) to a benchmark.
 * Pass NULL `weights` for equal weighting.
 *
 * # Safety
 * Pointers as in [`qce_l1_distance`]; handles must be live.
 */
QceStatus qce_similarity_benchmark_relative(const double *x,
                                            uintptr_t len,
                                            const QceBenchmark *benchmark,
                                            const QceScale *scale,
                                            const double *weights,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCE_H */
