#ifndef PELLREP_H
#define PELLREP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Smallest accepted precision cap; `0` selects the default.
 */
#define PR_MIN_PRECISION_CAP 256

typedef enum PrSequence {
  PR_SEQUENCE_PELL = 0,
  PR_SEQUENCE_PELL_LUCAS = 1,
} PrSequence;

typedef enum PrStatus {
  PR_STATUS_OK = 0,
  PR_STATUS_NULL_POINTER = 1,
  PR_STATUS_INVALID_ARGUMENT = 2,
  PR_STATUS_INVALID_BASE = 3,
  /**
   * The integer has no two-block representation.
   */
  PR_STATUS_NOT_FOUND = 4,
  /**
   * Index out of range.
   */
  PR_STATUS_OUT_OF_RANGE = 5,
  /**
   * A certified evaluation or reduction failed.
   */
  PR_STATUS_COMPUTATION_FAILED = 6,
  /**
   * A reduced bound did not beat the assumed lower bound on `n`.
   */
  PR_STATUS_REDUCTION_INSUFFICIENT = 7,
  PR_STATUS_PANIC = 8,
} PrStatus;

/**
 * Opaque solver report.
 */
typedef struct PrSolverReport PrSolverReport;

/**
 * `d1` repeated `l1` times followed by `d2` repeated `l2` times, in base `base`.
 */
typedef struct PrRepresentation {
  uint32_t base;
  uint32_t d1;
  uint32_t l1;
  uint32_t d2;
  uint32_t l2;
} PrRepresentation;

typedef struct PrSolution {
  uint32_t sequence;
  uint32_t n;
  struct PrRepresentation repr;
} PrSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Solves for one sequence over `base_min..=base_max` and stores a new
 * report in `*out`. `precision_cap` is in bits; `0` for the default.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PrStatus pr_solve(uint32_t sequence,
                       uint32_t base_min,
                       uint32_t base_max,
                       uint32_t precision_cap,
                       struct PrSolverReport **out);

/**
 * # Safety
 * `report` must come from [`pr_solve`] and not be freed; `out` must be
 * writable.
 */
enum PrStatus pr_report_solution_count(const struct PrSolverReport *report, size_t *out);

/**
 * # Safety
 * As for [`pr_report_solution_count`].
 */
enum PrStatus pr_report_solution(const struct PrSolverReport *report,
                                 size_t index,
                                 struct PrSolution *out);

/**
 * Decimal value of solution `index`, owned by the report; null if out of
 * range.
 *
 * # Safety
 * `report` must come from [`pr_solve`] and not be freed.
 */
const char *pr_report_solution_value(const struct PrSolverReport *report, size_t index);

/**
 * Full report as JSON; free with [`pr_string_free`].
 *
 * # Safety
 * `report` must come from [`pr_solve`]; `out` must be writable.
 */
enum PrStatus pr_report_to_json(const struct PrSolverReport *report, char **out);

/**
 * # Safety
 * `report` must come from [`pr_solve`] or be null; it is invalid afterwards.
 */
void pr_report_free(struct PrSolverReport *report);

/**
 * Two-block decomposition of the decimal integer `n` in `base`.
 * [`PrStatus::NotFound`] when there is none.
 *
 * # Safety
 * `n` must be a NUL-terminated string; `out` must be writable.
 */
enum PrStatus pr_decompose(const char *n, uint32_t base, struct PrRepresentation *out);

/**
 * `P_n` or `Q_n` in decimal; free with [`pr_string_free`].
 *
 * # Safety
 * `out` must be writable.
 */
enum PrStatus pr_term(uint32_t sequence, uint32_t n, char **out);

/**
 * Initial-bound ledger as JSON; free with [`pr_string_free`].
 *
 * # Safety
 * `out` must be writable.
 */
enum PrStatus pr_bounds_json(uint32_t sequence, uint32_t precision_cap, char **out);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *pr_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not be freed yet, or be null.
 */
void pr_string_free(char *s);

/**
 * Library version, static.
 */
const char *pr_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PELLREP_H */
