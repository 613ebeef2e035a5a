#ifndef MATSTRETCH_H
#define MATSTRETCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_ARGUMENT = 2,
  MS_STATUS_DIMENSION_MISMATCH = 3,
  MS_STATUS_SINGULAR = 4,
  MS_STATUS_BREAKDOWN = 5,
  MS_STATUS_PANIC = 6,
} MsStatus;

typedef enum MsMethod {
  /**
   * Dense LU with unrestricted partial pivoting.
   */
  MS_METHOD_FULL = 0,
  /**
   * Dense LU with the pivot search limited to the lower bandwidth.
   */
  MS_METHOD_RESTRICTED = 1,
  /**
   * Row stretching of the border followed by band LU.
   */
  MS_METHOD_STRETCH = 2,
  /**
   * Block elimination (single border only).
   */
  MS_METHOD_BLOCK_ELIMINATION = 3,
  /**
   * Deflated block elimination (single border only).
   */
  MS_METHOD_DEFLATED_BLOCK_ELIMINATION = 4,
} MsMethod;

typedef enum MsNorm {
  MS_NORM_ONE = 0,
  MS_NORM_TWO = 1,
  MS_NORM_INF = 2,
} MsNorm;

/**
 * An arrow matrix: band core with `border` dense trailing rows and columns.
 */
typedef struct MsArrow MsArrow;

/**
 * A factored stretched arrow matrix, reusable for many right sides.
 */
typedef struct MsFactorization MsFactorization;

typedef struct MsOpCounts {
  uint64_t comparisons;
  uint64_t divisions;
  uint64_t multiplications;
  uint64_t subtractions;
  uint64_t total;
} MsOpCounts;

/**
 * Work done by one call to ms_solve.
 */
typedef struct MsSolveReport {
  struct MsOpCounts factor;
  struct MsOpCounts solve;
} MsSolveReport;

typedef struct MsPredictedCounts {
  uint64_t order;
  uint64_t factor;
  uint64_t solve;
} MsPredictedCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *ms_status_message(enum MsStatus status);

/**
 * Detail for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ms_last_error(void);

/**
 * Builds an arrow matrix from a dense row-major array of order
 * `core_order + border`. Entries outside the band of the core must be zero.
 *
 * # Safety
 * `dense` must point to `(core_order + border)^2` doubles and `out` must be
 * writable.
 */
enum MsStatus ms_arrow_new(size_t core_order,
                           size_t border,
                           size_t lower,
                           size_t upper,
                           const double *dense,
                           struct MsArrow **out);

/**
 * Member of the tridiagonal test family with one all-ones border, of total
 * order `order` and diagonal `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_arrow_family(double t, size_t order, struct MsArrow **out);

/**
 * Total order of an arrow matrix, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t ms_arrow_order(const struct MsArrow *a);

/**
 * # Safety
 * `a` must be null or a handle from this library not yet freed.
 */
void ms_arrow_free(struct MsArrow *a);

/**
 * Solves `A x = y` with one method. `glue` selects the glue scaling for the
 * stretching method and is ignored otherwise. `report` may be null.
 *
 * # Safety
 * `y` and `x` must each hold `len` doubles; `report` must be null or
 * writable.
 */
enum MsStatus ms_solve(const struct MsArrow *a,
                       enum MsMethod method,
                       enum MsNorm glue,
                       const double *y,
                       double *x,
                       size_t len,
                       struct MsSolveReport *report);

/**
 * Stretches and factors an arrow matrix once for repeated solves.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum MsStatus ms_stretch_factor(const struct MsArrow *a,
                                enum MsNorm glue,
                                struct MsFactorization **out);

/**
 * Order of the stretched matrix, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t ms_factorization_order(const struct MsFactorization *f);

/**
 * Operation counts of the factorization.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum MsStatus ms_factorization_counts(const struct MsFactorization *f, struct MsOpCounts *out);

/**
 * Solves with a stored factorization; `len` is the original order.
 * `counts` may be null.
 *
 * # Safety
 * `y` and `x` must each hold `len` doubles; `counts` must be null or
 * writable.
 */
enum MsStatus ms_factorization_solve(const struct MsFactorization *f,
                                     const double *y,
                                     double *x,
                                     size_t len,
                                     struct MsOpCounts *counts);

/**
 * # Safety
 * `f` must be null or a handle from this library not yet freed.
 */
void ms_factorization_free(struct MsFactorization *f);

/**
 * Closed-form stretched order and operation counts for core order `n`,
 * bandwidths `lower`/`upper` and `border` dense rows and columns.
 * The solve count covers the band part of the factors only.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_predicted_counts(uint64_t n,
                                  uint64_t lower,
                                  uint64_t upper,
                                  uint64_t border,
                                  struct MsPredictedCounts *out);

/**
 * Condition number from an explicit inverse (1 and inf) or singular values
 * (2). A singular matrix yields infinity with status `Ok`.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum MsStatus ms_cond(const struct MsArrow *a, enum MsNorm norm, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATSTRETCH_H */
