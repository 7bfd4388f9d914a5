#ifndef CSLGEOM_H
#define CSLGEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CslStatus {
  CSL_STATUS_OK = 0,
  CSL_STATUS_NULL_POINTER = 1,
  CSL_STATUS_INVALID_PARAMS = 2,
  CSL_STATUS_DEGENERATE_METRIC = 3,
  CSL_STATUS_DIMENSION_MISMATCH = 4,
  CSL_STATUS_BUFFER_TOO_SMALL = 5,
  CSL_STATUS_NONPOSITIVE_EPSILON = 6,
  CSL_STATUS_OFF_SPHERE = 7,
  CSL_STATUS_INTERNAL = 8,
} CslStatus;

typedef enum CslFamilyKind {
  CSL_FAMILY_KIND_TOTALLY_GEODESIC = 0,
  CSL_FAMILY_KIND_CALABI_TORUS = 1,
  CSL_FAMILY_KIND_CALABI_PRODUCT = 2,
  CSL_FAMILY_KIND_CLIFFORD_TORUS = 3,
} CslFamilyKind;

typedef enum CslThreshold {
  CSL_THRESHOLD_BASIC = 0,
  CSL_THRESHOLD_MAIN = 1,
  CSL_THRESHOLD_MAIN1 = 2,
  CSL_THRESHOLD_MAIN3 = 3,
  CSL_THRESHOLD_TG = 4,
} CslThreshold;

/**
 * Opaque handle to a built family.
 */
typedef struct CslFamily CslFamily;

/**
 * Invariants at one chart point. `gauss_curv` is NaN unless `n == 2`.
 */
typedef struct CslPointInfo {
  uintptr_t n;
  double norm_b2;
  double norm_h2;
  double gauss_curv;
  double ric_jh;
  double legendrian_residual;
} CslPointInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a family. `params` lists values in the family's order (`r1, r2, r3, r4`
 * for the Calabi torus, `r1, r2` for the Calabi product); NaN leaves a value
 * unset, and a missing partner radius is completed to `r² + r'² = 1`.
 *
 * # Safety
 * `params` must be valid for `params_len` reads and `out` valid for one write.
 */
enum CslStatus csl_family_new(enum CslFamilyKind kind,
                              uintptr_t n,
                              const double *params,
                              uintptr_t params_len,
                              struct CslFamily **out);

/**
 * Release a family. Null is ignored.
 *
 * # Safety
 * `family` must be null or a handle from [`csl_family_new`] not yet freed.
 */
void csl_family_free(struct CslFamily *family);

/**
 * Intrinsic dimension of the family, or 0 for a null handle.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
uintptr_t csl_family_dim(const struct CslFamily *family);

/**
 * Evaluate invariants at the chart point `u` (length `n`).
 *
 * # Safety
 * `u` must be valid for `u_len` reads and `out` valid for one write.
 */
enum CslStatus csl_family_eval(const struct CslFamily *family,
                               const double *u,
                               uintptr_t u_len,
                               struct CslPointInfo *out);

/**
 * Write the cubic form at `u` as a dense row-major `n × n × n` array.
 * Fails with `BufferTooSmall` when `buf_len < n³`.
 *
 * # Safety
 * `u` must be valid for `u_len` reads and `buf` valid for `buf_len` writes.
 */
enum CslStatus csl_family_sigma(const struct CslFamily *family,
                                const double *u,
                                uintptr_t u_len,
                                double *buf,
                                uintptr_t buf_len);

/**
 * Value of a pinching threshold at `(n, |H|²)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum CslStatus csl_threshold(enum CslThreshold which, uintptr_t n, double h2, double *out);

/**
 * The relaxed threshold for a given `eps > 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum CslStatus csl_threshold_eps(uintptr_t n, double h2, double eps, double *out);

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to fit) and return the full message length including the NUL.
 * Returns 0 when no error has occurred.
 *
 * # Safety
 * `buf` must be null or valid for `buf_len` writes.
 */
uintptr_t csl_last_error(char *buf, uintptr_t buf_len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *csl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSLGEOM_H */
