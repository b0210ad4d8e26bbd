#ifndef DILATON_GME_H
#define DILATON_GME_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DgStatus {
  DG_STATUS_OK = 0,
  DG_STATUS_NULL_POINTER = 1,
  DG_STATUS_INVALID_PARAMS = 2,
  DG_STATUS_DEGENERATE_COEFFICIENT = 3,
  DG_STATUS_INVALID_SPEC = 4,
  DG_STATUS_SCALE_CAP = 5,
  DG_STATUS_NOT_X_STATE = 6,
  DG_STATUS_INVALID_DENSITY = 7,
  DG_STATUS_OUT_OF_RANGE = 8,
  DG_STATUS_INTERNAL = 9,
} DgStatus;

/**
 * Reduced density of one scenario.
 */
typedef struct DgDensity DgDensity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code; never free the result.
 */
const char *dg_status_message(enum DgStatus status);

/**
 * Bogoliubov coefficients for `(mass, dilaton, omega)`.
 *
 * # Safety
 * `alpha` and `beta` must be valid for writes.
 */
enum DgStatus dg_bogoliubov(double mass, double dilaton, double omega, double *alpha, double *beta);

/**
 * Closed-form entanglement with `p` accessible and `q` inaccessible
 * horizon modes.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DgStatus dg_e_general(double theta,
                           double mass,
                           double dilaton,
                           double omega,
                           uint32_t p,
                           uint32_t q,
                           double *out);

/**
 * Interior maximiser in `D`. `*has_peak` is 0 when the curve is monotonic,
 * in which case `*d_star` is left untouched.
 *
 * # Safety
 * `d_star` and `has_peak` must be valid for writes.
 */
enum DgStatus dg_peak_dilaton(double mass,
                              double omega,
                              uint32_t p,
                              uint32_t q,
                              double *d_star,
                              int *has_peak);

/**
 * Builds the reduced density of a scenario by explicit expansion and trace.
 *
 * # Safety
 * `out` must be valid for writes; on success it receives a handle owned by
 * the caller.
 */
enum DgStatus dg_density_new(size_t n_parties,
                             size_t n_horizon,
                             size_t p,
                             size_t q,
                             double theta,
                             double mass,
                             double dilaton,
                             double omega,
                             struct DgDensity **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `handle` must come from [`dg_density_new`] and not be used afterwards.
 */
void dg_density_free(struct DgDensity *handle);

/**
 * # Safety
 * `handle` must be a live handle and `out` valid for writes.
 */
enum DgStatus dg_density_n_modes(const struct DgDensity *handle, size_t *out);

/**
 * Number of stored nonzero entries (both triangles).
 *
 * # Safety
 * `handle` must be a live handle and `out` valid for writes.
 */
enum DgStatus dg_density_nnz(const struct DgDensity *handle, size_t *out);

/**
 * Entry `index` in row-major label order. Labels put the first mode in
 * the most significant bit.
 *
 * # Safety
 * `handle` must be a live handle; the out pointers must be valid for writes.
 */
enum DgStatus dg_density_entry(const struct DgDensity *handle,
                               size_t index,
                               uint64_t *row,
                               uint64_t *col,
                               double *value);

/**
 * Genuine multipartite entanglement of the handle's X state.
 *
 * # Safety
 * `handle` must be a live handle and `out` valid for writes.
 */
enum DgStatus dg_density_gme(const struct DgDensity *handle, double *out);

/**
 * Runs the verification suite (`small != 0` selects the reduced grid) and
 * returns the JSON report. `*passed` is 1 iff every check passed.
 *
 * # Safety
 * `json` and `passed` must be valid for writes; free `*json` with
 * [`dg_string_free`].
 */
enum DgStatus dg_verify_json(int small, char **json, int *passed);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void dg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DILATON_GME_H */
