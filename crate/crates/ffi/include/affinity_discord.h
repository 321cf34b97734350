#ifndef AFFINITY_DISCORD_H
#define AFFINITY_DISCORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AdMeasure {
  AD_MEASURE_AFFINITY = 0,
  AD_MEASURE_HILBERT_SCHMIDT = 1,
  AD_MEASURE_REMEDIED = 2,
} AdMeasure;

typedef enum AdStatus {
  AD_STATUS_OK = 0,
  AD_STATUS_NULL_POINTER = 1,
  /*
   The matrix is not a density matrix (shape, Hermiticity, positivity, trace).
   */
  AD_STATUS_INVALID_STATE = 2,
  /*
   The operation does not support this dimension.
   */
  AD_STATUS_UNSUPPORTED = 3,
  AD_STATUS_INVALID_ARGUMENT = 4,
  AD_STATUS_IO = 5,
  AD_STATUS_PANIC = 6,
} AdStatus;

typedef enum AdStrategy {
  AD_STRATEGY_GRID = 0,
  AD_STRATEGY_MULTISTART = 1,
  AD_STRATEGY_HYBRID = 2,
} AdStrategy;

/*
 Opaque handle to a validated bipartite density matrix.
 */
typedef struct AdState AdState;

/*
 Builds a state from row-major real and imaginary parts of the
 (dim_a·dim_b)² density matrix. `im` may be null for a real matrix.

 # Safety
 `re` (and `im` when non-null) must point to (dim_a·dim_b)² doubles;
 `out` must be writable. Free the result with [`ad_state_free`].
 */
enum AdStatus ad_state_from_parts(size_t dim_a,
                                  size_t dim_b,
                                  const double *re,
                                  const double *im,
                                  struct AdState **out);

/*
 Reads a JSON state file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum AdStatus ad_state_from_json_file(const char *path, struct AdState **out);

/*
 Builds a family member: `family` is "werner2", "belldiag" (direction
 (1, 1, 1) scaled by `param`), "werner" or "isotropic" (local dimension `m`).

 # Safety
 `family` must be a NUL-terminated string; `out` must be writable.
 */
enum AdStatus ad_state_family(const char *family, size_t m, double param, struct AdState **out);

/*
 # Safety
 `state` must be null or a handle not yet freed.
 */
void ad_state_free(struct AdState *state);

/*
 Local dimension of A, or 0 for a null handle.

 # Safety
 `state` must be null or a live handle.
 */
size_t ad_state_dim_a(const struct AdState *state);

/*
 Local dimension of B, or 0 for a null handle.

 # Safety
 `state` must be null or a live handle.
 */
size_t ad_state_dim_b(const struct AdState *state);

/*
 Exact affinity discord of a 2 × n state.

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum AdStatus ad_closed_form_2xn(const struct AdState *state, double *out);

/*
 Spectral lower bound on the affinity discord (any dimension).

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum AdStatus ad_lower_bound(const struct AdState *state, double *out);

/*
 1 − Σ s_i² for a pure state; `AD_STATUS_INVALID_ARGUMENT` if the state is mixed.

 # Safety
 `state` must be a live handle; `out` must be writable.
 */
enum AdStatus ad_pure_discord(const struct AdState *state, double *out);

/*
 Minimizes the chosen measure over projective measurements on A.
 A `budget` of 0 selects the default.

 # Safety
 `state` must be a live handle; `out` and `evaluations` (if non-null) must be writable.
 */
enum AdStatus ad_optimize(const struct AdState *state,
                          enum AdMeasure measure,
                          enum AdStrategy strategy,
                          size_t budget,
                          uint64_t seed,
                          double *out,
                          size_t *evaluations);

/*
 Closed-form affinity and Hilbert–Schmidt discord of the two-qubit Werner state.

 # Safety
 `affinity` and `hs` must be writable.
 */
enum AdStatus ad_werner_two_qubit(double p, double *affinity, double *hs);

/*
 Closed forms for the m × m Werner state.

 # Safety
 `affinity` and `hs` must be writable.
 */
enum AdStatus ad_werner(size_t m, double x, double *affinity, double *hs);

/*
 Closed forms for the m × m isotropic state.

 # Safety
 `affinity` and `hs` must be writable.
 */
enum AdStatus ad_isotropic(size_t m, double x, double *affinity, double *hs);

/*
 Closed forms for the Bell-diagonal state with correlation triple (c1, c2, c3).

 # Safety
 `affinity` and `hs` must be writable.
 */
enum AdStatus ad_bell_diagonal(double c1, double c2, double c3, double *affinity, double *hs);

/*
 Copies the calling thread's last error message into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length plus one, so a call
 with `len = 0` sizes the buffer.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t ad_last_error_message(char *buf, size_t len);

#endif  /* AFFINITY_DISCORD_H */
