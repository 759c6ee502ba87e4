#ifndef CHEEGERLAB_H
#define CHEEGERLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes; the nonzero values match the CLI exit codes where they overlap.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_INPUT = 2,
  CL_STATUS_NECK_DETECTED = 3,
  CL_STATUS_NUMERICAL = 4,
  CL_STATUS_PANIC = 5,
} ClStatus;

/**
 * Opaque validated domain.
 */
typedef struct ClDomain ClDomain;

/**
 * Opaque isoperimetric profile of a domain.
 */
typedef struct ClProfile ClProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null. Free with [`cl_string_free`].
 */
char *cl_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cl_string_free(char *s);

/**
 * Polygon from `n` interleaved `x, y` pairs.
 *
 * # Safety
 * `xy` must point to `2n` doubles and `out` must be writable.
 */
enum ClStatus cl_domain_from_vertices(const double *xy, size_t n, struct ClDomain **out);

/**
 * Domain from the JSON accepted by the CLI.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum ClStatus cl_domain_from_json(const char *json, struct ClDomain **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum ClStatus cl_domain_disk(double cx, double cy, double radius, struct ClDomain **out);

/**
 * # Safety
 * `d` must be null or a live handle from this library.
 */
void cl_domain_free(struct ClDomain *d);

/**
 * Area, perimeter and inradius.
 *
 * # Safety
 * `d` must be a live handle; the outputs must be writable.
 */
enum ClStatus cl_domain_measure(const struct ClDomain *d,
                                double *area,
                                double *perimeter,
                                double *inradius);

/**
 * Builds the profile with default options; fails with `NeckDetected` on domains with a neck.
 *
 * # Safety
 * `d` must be a live handle and `out` writable.
 */
enum ClStatus cl_profile_build(const struct ClDomain *d, struct ClProfile **out);

/**
 * # Safety
 * `p` must be null or a live handle from this library.
 */
void cl_profile_free(struct ClProfile *p);

/**
 * Cheeger constant `H(1)` with the volumes `m ≤ M` of the smallest and largest Cheeger sets.
 *
 * # Safety
 * `p` must be a live handle; the outputs must be writable.
 */
enum ClStatus cl_profile_h1(const struct ClProfile *p,
                            double *h1,
                            double *m_vol,
                            double *big_m_vol);

/**
 * `F(κ)` for `κ ≥ 1/R`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum ClStatus cl_profile_f(const struct ClProfile *p, double kappa, double *out);

/**
 * Isoperimetric profile `I(V)` and its derivative `𝔎(V)` for `πR² ≤ V < |Ω|`.
 *
 * # Safety
 * `p` must be a live handle; the outputs must be writable.
 */
enum ClStatus cl_profile_i(const struct ClProfile *p,
                           double volume,
                           double *perimeter,
                           double *kappa);

/**
 * Solves `H(p)`. Up to `capacity` minimizer volumes go to `volumes` and their number to
 * `count`; when every volume of an interval is optimal (`p = ½`), `interval` is set and the
 * endpoints are written instead.
 *
 * # Safety
 * `p` must be a live handle, `volumes` must hold `capacity` doubles (it may be null when
 * `capacity` is 0) and the other outputs must be writable.
 */
enum ClStatus cl_solve_h(const struct ClProfile *p,
                         double exponent,
                         double *hp,
                         double *volumes,
                         size_t capacity,
                         size_t *count,
                         bool *interval);

/**
 * Discrete Cheeger constant on a grid of spacing `h` with a 4, 8 or 16 neighbour stencil.
 *
 * # Safety
 * `d` must be a live handle and `out` writable.
 */
enum ClStatus cl_oracle_h1(const struct ClDomain *d, double h, uint32_t stencil, double *out);

/**
 * Profile summary as JSON, or null on failure. Free with [`cl_string_free`].
 *
 * # Safety
 * `p` must be a live handle.
 */
char *cl_profile_summary_json(const struct ClProfile *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHEEGERLAB_H */
