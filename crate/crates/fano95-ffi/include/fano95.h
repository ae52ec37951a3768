#ifndef FANO95_H
#define FANO95_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by the fallible entry points.
 */
typedef enum F95Status {
  F95Status_Ok = 0,
  /**
   * Claim verification found a hard mismatch.
   */
  F95Status_VerifyMismatch = 1,
  /**
   * Bad argument: null pointer, unknown id, out-of-range ordinal,
   * malformed text, or a bound below the supported minimum.
   */
  F95Status_InvalidArgument = 2,
  /**
   * The enumeration did not produce the expected 95 families.
   */
  F95Status_CountMismatch = 3,
  F95Status_Internal = 4,
} F95Status;

/**
 * Opaque catalog handle.
 */
typedef struct F95Catalog F95Catalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread; do not free.
 */
const char *f95_last_error(void);

/**
 * Builds the catalog by enumerating weight systems up to `max_weight`
 * (at least 40; 100 is the standard bound). On success writes a handle to
 * `out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory for one pointer.
 */
enum F95Status f95_catalog_new(uint32_t max_weight, struct F95Catalog **out);

/**
 * Releases a catalog handle. A null handle is ignored.
 *
 * # Safety
 * `cat` must be a pointer returned by [`f95_catalog_new`] that has not been
 * freed yet.
 */
void f95_catalog_free(struct F95Catalog *cat);

/**
 * Number of families in the catalog, or 0 on a null handle.
 *
 * # Safety
 * `cat` must be a live handle from [`f95_catalog_new`] or null.
 */
uint32_t f95_catalog_len(const struct F95Catalog *cat);

/**
 * The whole catalog as JSON. Free with [`f95_string_free`].
 *
 * # Safety
 * `cat` must be a live handle from [`f95_catalog_new`].
 */
char *f95_catalog_json(const struct F95Catalog *cat);

/**
 * The whole catalog as CSV. Free with [`f95_string_free`].
 *
 * # Safety
 * `cat` must be a live handle from [`f95_catalog_new`].
 */
char *f95_catalog_csv(const struct F95Catalog *cat);

/**
 * One family as JSON, by 1-based ordinal. Null on a bad ordinal. Free with
 * [`f95_string_free`].
 *
 * # Safety
 * `cat` must be a live handle from [`f95_catalog_new`].
 */
char *f95_family_json(const struct F95Catalog *cat, uint32_t gimel);

/**
 * Runs every ledger claim and golden system. Returns `Ok` when nothing
 * hard-mismatches, `VerifyMismatch` otherwise. When `out_report` is
 * non-null it receives the JSON report (free with [`f95_string_free`]).
 *
 * # Safety
 * `cat` must be a live handle; `out_report` must be null or valid for one
 * pointer write.
 */
enum F95Status f95_ledger_verify(const struct F95Catalog *cat, char **out_report);

/**
 * Decides a registered golden system by id (such as `SYS-23`). Writes 1 to
 * `out_infeasible` when the system is infeasible, 0 when satisfiable.
 *
 * # Safety
 * `id` must be a valid NUL-terminated string; `out_infeasible` must be null
 * or valid for one `int` write.
 */
enum F95Status f95_lp_check_id(const char *id, int32_t *out_infeasible);

/**
 * Decides an ad-hoc system in the one-constraint-per-line text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out_infeasible` must be
 * null or valid for one `int` write.
 */
enum F95Status f95_lp_check_text(const char *text, int32_t *out_infeasible);

/**
 * Releases a string produced by this library. A null pointer is ignored.
 *
 * # Safety
 * `s` must be a pointer previously returned by one of the `f95_*` string
 * functions, not yet freed.
 */
void f95_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FANO95_H */
