#ifndef WELLSUM_H
#define WELLSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WellsumRoute {
  WELLSUM_ROUTE_BESSEL = 0,
  WELLSUM_ROUTE_HYPER = 1,
  WELLSUM_ROUTE_QUAD = 2,
} WellsumRoute;

typedef enum WellsumStatus {
  WELLSUM_STATUS_OK = 0,
  WELLSUM_STATUS_NULL_POINTER = 1,
  WELLSUM_STATUS_INVALID_UTF8 = 2,
  WELLSUM_STATUS_PARSE = 64,
  WELLSUM_STATUS_DOMAIN = 65,
  WELLSUM_STATUS_NUMERIC = 70,
  WELLSUM_STATUS_IO = 74,
  WELLSUM_STATUS_PANIC = 99,
} WellsumStatus;

typedef enum WellsumVerdict {
  WELLSUM_VERDICT_PASS = 0,
  WELLSUM_VERDICT_FAIL = 1,
  WELLSUM_VERDICT_NO_EXACT = 2,
} WellsumVerdict;

/**
 * Precision and term count for numerical work.
 */
typedef struct WellsumContext WellsumContext;

/**
 * One certification result.
 */
typedef struct WellsumReport WellsumReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *wellsum_last_error(void);

/**
 * Creates a context. `bits` ≥ 64, `terms` ≥ 8.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum WellsumStatus wellsum_context_new(uint32_t bits, uintptr_t terms, struct WellsumContext **out);

/**
 * # Safety
 * `ctx` must be null or a handle from [`wellsum_context_new`] not yet freed.
 */
void wellsum_context_free(struct WellsumContext *ctx);

/**
 * Certifies a series given in the family grammar, or `"identity24"`.
 *
 * # Safety
 * `ctx` must be a live context, `family` a nul-terminated string and `out` writable.
 */
enum WellsumStatus wellsum_verify(const struct WellsumContext *ctx,
                                  const char *family,
                                  struct WellsumReport **out);

/**
 * # Safety
 * `report` must be a live report.
 */
enum WellsumVerdict wellsum_report_verdict(const struct WellsumReport *report);

/**
 * The numeric sum as a decimal string, owned by the report.
 *
 * # Safety
 * `report` must be a live report.
 */
const char *wellsum_report_numeric(const struct WellsumReport *report);

/**
 * The exact value, e.g. `8π⁴/155925`, or null when none is known. Owned by the report.
 *
 * # Safety
 * `report` must be a live report.
 */
const char *wellsum_report_exact(const struct WellsumReport *report);

/**
 * The full report as JSON, owned by the report.
 *
 * # Safety
 * `report` must be a live report.
 */
const char *wellsum_report_json(const struct WellsumReport *report);

/**
 * # Safety
 * `report` must be null or a live report.
 */
void wellsum_report_free(struct WellsumReport *report);

/**
 * Closed form of a series as text. `*out` is null when none is known;
 * otherwise release it with [`wellsum_string_free`].
 *
 * # Safety
 * `family` must be a nul-terminated string and `out` writable.
 */
enum WellsumStatus wellsum_closed_form(const char *family, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void wellsum_string_free(char *s);

/**
 * Writes `C_1 … C_n_max` of the state `(alpha, beta)` as doubles into `out`.
 * `alpha` and `beta` are strings such as `"5/2"`.
 *
 * # Safety
 * `ctx` must be live, `alpha` and `beta` nul-terminated, and `out` must hold `n_max` doubles.
 */
enum WellsumStatus wellsum_coeffs(const struct WellsumContext *ctx,
                                  const char *alpha,
                                  const char *beta,
                                  enum WellsumRoute route,
                                  uintptr_t n_max,
                                  double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WELLSUM_H */
