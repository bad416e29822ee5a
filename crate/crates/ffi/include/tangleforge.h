#ifndef TANGLEFORGE_H
#define TANGLEFORGE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_ARGUMENT = 2,
  TF_STATUS_INVALID_STATE = 3,
  TF_STATUS_PARSE = 4,
  TF_STATUS_NUMERICAL = 5,
  TF_STATUS_PANIC = 6,
} TfStatus;

typedef enum TfRoofMeasure {
  TF_ROOF_MEASURE_TAU3 = 0,
  TF_ROOF_MEASURE_ONE_TANGLE_A = 1,
} TfRoofMeasure;

/**
 * Validated density matrix.
 */
typedef struct TfDensity TfDensity;

/**
 * Normalized pure state.
 */
typedef struct TfPureState TfPureState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t tf_last_error_message(char *buf, size_t len);

/**
 * Builds a state from `len` amplitudes (`im` may be null for real input).
 * With `normalize` false the vector must already have unit norm.
 *
 * # Safety
 * `re` (and `im` if non-null) must be valid for `len` reads; `out` must be
 * writable.
 */
enum TfStatus tf_pure_from_amplitudes(const double *re,
                                      const double *im,
                                      size_t len,
                                      bool normalize,
                                      struct TfPureState **out);

/**
 * Built-in pure state by name, such as `"ghz"`, `"w"`, `"psi5"` or `"j:pi/3,2pi/3"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum TfStatus tf_pure_named(const char *name, struct TfPureState **out);

/**
 * Pure state from `{"n_qubits": n, "amplitudes": [[re, im], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TfStatus tf_pure_from_json(const char *json, struct TfPureState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void tf_pure_free(struct TfPureState *state);

/**
 * Number of qubits, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t tf_pure_n_qubits(const struct TfPureState *state);

/**
 * Copies the amplitudes into `re` and `im`, each of length `len`, which must
 * equal `2^n`.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` must be valid for `len` writes.
 */
enum TfStatus tf_pure_amplitudes(const struct TfPureState *state,
                                 double *re,
                                 double *im,
                                 size_t len);

/**
 * `|ψ⟩⟨ψ|` as a new density handle.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_pure_to_density(const struct TfPureState *state, struct TfDensity **out);

/**
 * Density matrix from row-major `dim × dim` real and imaginary parts (`im`
 * may be null).
 *
 * # Safety
 * `re` (and `im` if non-null) must be valid for `dim * dim` reads; `out`
 * must be writable.
 */
enum TfStatus tf_density_from_matrix(const double *re,
                                     const double *im,
                                     size_t dim,
                                     struct TfDensity **out);

/**
 * Any built-in state by name; pure names give their projector.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum TfStatus tf_density_named(const char *name, struct TfDensity **out);

/**
 * Density matrix from `{"dim": d, "matrix": [[[re, im], ...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TfStatus tf_density_from_json(const char *json, struct TfDensity **out);

/**
 * # Safety
 * `rho` must be null or a handle from this library not yet freed.
 */
void tf_density_free(struct TfDensity *rho);

/**
 * Matrix dimension, or 0 for a null handle.
 *
 * # Safety
 * `rho` must be null or a live handle.
 */
size_t tf_density_dim(const struct TfDensity *rho);

/**
 * Three-tangle of a three-qubit pure state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_three_tangle(const struct TfPureState *state, double *out);

/**
 * One-tangle `4·det ρ_q` of qubit `qubit` of a pure state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_one_tangle(const struct TfPureState *state, size_t qubit, double *out);

/**
 * Multipartite measure `E_ms` of a three to five qubit pure state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_e_ms(const struct TfPureState *state, double *out);

/**
 * Wootters concurrence of qubits `a < b` of `rho`; a two-qubit `rho` with
 * `a = 0, b = 1` is used as is.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_concurrence(const struct TfDensity *rho, size_t a, size_t b, double *out);

/**
 * Negativity of `rho` across qubit `qubit` versus the rest.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_negativity(const struct TfDensity *rho, size_t qubit, double *out);

/**
 * π-tangle of a three-qubit state.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum TfStatus tf_pi_tangle(const struct TfDensity *rho, double *out);

/**
 * Closed-form three-tangle of the GHZ mixture `σ(x)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TfStatus tf_tau_sigma(double x, double *out);

/**
 * Numerical convex roof of `measure` on `rho`. `restarts` of 0 selects the
 * default; `converged` may be null.
 *
 * # Safety
 * `rho` must be a live handle; `value` must be writable; `converged` must be
 * null or writable.
 */
enum TfStatus tf_roof_minimize(const struct TfDensity *rho,
                               enum TfRoofMeasure measure,
                               size_t restarts,
                               uint64_t seed,
                               double *value,
                               bool *converged);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TANGLEFORGE_H */
