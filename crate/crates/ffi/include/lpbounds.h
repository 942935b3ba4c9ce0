#ifndef LPBOUNDS_H
#define LPBOUNDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  // Matrix is malformed, not Hermitian, or out of the allowed spectrum.
  LP_STATUS_INVALID_INPUT = 2,
  LP_STATUS_DIM_MISMATCH = 3,
  // Dimension without a supported MUB construction.
  LP_STATUS_UNSUPPORTED = 4,
  // Eigensolver failure or a degenerate intermediate.
  LP_STATUS_NUMERICAL = 5,
  // JSON could not be parsed or produced.
  LP_STATUS_JSON = 6,
  // Internal panic caught at the boundary.
  LP_STATUS_PANIC = 7,
} LpStatus;

// Opaque effect handle.
typedef struct LpEffect LpEffect;

// Opaque MUB family handle.
typedef struct LpMub LpMub;

// Opaque density-matrix handle.
typedef struct LpState LpState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the next call.
const char *lp_last_error_message(void);

// Creates an effect `0 <= A <= 1` from a `dim x dim` row-major matrix.
//
// # Safety
// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out` must be writable.
enum LpStatus lp_effect_new(const double *re, const double *im, size_t dim, struct LpEffect **out);

// # Safety
// `e` must come from `lp_effect_new` and not have been freed. Null is ignored.
void lp_effect_free(struct LpEffect *e);

// Creates a density matrix (Hermitian, PSD, unit trace).
//
// # Safety
// As for [`lp_effect_new`].
enum LpStatus lp_state_new(const double *re, const double *im, size_t dim, struct LpState **out);

// # Safety
// `s` must come from `lp_state_new` or `lp_max_sum_oracle` and not have been freed.
void lp_state_free(struct LpState *s);

// `tr(rho A)`
//
// # Safety
// Handles must be live; `out` must be writable.
enum LpStatus lp_probability(const struct LpEffect *effect,
                             const struct LpState *state,
                             double *out);

// `1 + ||A^{1/2} B^{1/2}||`
//
// # Safety
// Handles must be live; `out` must be writable.
enum LpStatus lp_pair_bound(const struct LpEffect *a, const struct LpEffect *b, double *out);

// Multi-effect bound over `count` effects.
//
// # Safety
// `effects` must point to `count` live handles; `out` must be writable.
enum LpStatus lp_multi_bound(const struct LpEffect *const *effects, size_t count, double *out);

// Exact `max_rho sum_i tr(rho A_i)`. `maximizer` may be null; otherwise it
// receives a new state handle owned by the caller.
//
// # Safety
// `effects` must point to `count` live handles; `value` must be writable.
enum LpStatus lp_max_sum_oracle(const struct LpEffect *const *effects,
                                size_t count,
                                double *value,
                                struct LpState **maximizer);

// `1 + sqrt(D + 1)`; needs no handle.
double lp_mub_bound(size_t dim);

// Pairwise combination of the weak bound over all `D + 1` bases.
//
// # Safety
// `out` must be writable.
enum LpStatus lp_trivial_combination_bound(size_t dim, double *out);

// Builds the MUB family for `dim` (2 or an odd prime).
//
// # Safety
// `out` must be writable.
enum LpStatus lp_mub_new(size_t dim, struct LpMub **out);

// # Safety
// `m` must come from `lp_mub_new` and not have been freed.
void lp_mub_free(struct LpMub *m);

// Number of bases, or 0 for a null handle.
//
// # Safety
// `m` must be null or live.
size_t lp_mub_num_bases(const struct LpMub *m);

// Largest deviation of a cross-basis overlap from `1/sqrt(D)`.
//
// # Safety
// `m` must be live; `out` must be writable.
enum LpStatus lp_mub_verify(const struct LpMub *m, double *out);

// Separability statistic of a `D^2`-dimensional state. `entangled` receives 1
// when the statistic exceeds `1 + sqrt(D + 1)`, else 0.
//
// # Safety
// Handles must be live; `lhs` and `entangled` must be writable.
enum LpStatus lp_separability_statistic(const struct LpState *state,
                                        const struct LpMub *mub,
                                        double *lhs,
                                        int32_t *entangled);

// Evaluates the multi-effect bound from JSON. `effects_json` holds
// `{"effects": [...]}`; `state_json` may be null, in which case the bound is
// evaluated at the oracle maximizer. The report string written to `out` must
// be released with `lp_string_free`.
//
// # Safety
// String arguments must be NUL-terminated UTF-8; `out` must be writable.
enum LpStatus lp_evaluate_multi_json(const char *effects_json, const char *state_json, char **out);

// # Safety
// `s` must come from this library and not have been freed. Null is ignored.
void lp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPBOUNDS_H */
