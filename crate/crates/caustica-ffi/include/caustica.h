#ifndef CAUSTICA_H
#define CAUSTICA_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every FFI entry point.
 */
typedef enum CausticaStatus {
  CAUSTICA_STATUS_OK = 0,
  /**
   * Null pointer or otherwise invalid argument.
   */
  CAUSTICA_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Profile text failed to parse or validate.
   */
  CAUSTICA_STATUS_PARSE_ERROR = 2,
  /**
   * The potential is critical; the regular-branch quantity is undefined.
   */
  CAUSTICA_STATUS_CRITICAL = 3,
  /**
   * The potential is not critical; the critical-branch quantity is undefined.
   */
  CAUSTICA_STATUS_NOT_CRITICAL = 4,
  /**
   * Numerical failure (integrator, eigensolver, boundary leak, ...).
   */
  CAUSTICA_STATUS_NUMERIC_ERROR = 5,
} CausticaStatus;

/**
 * Opaque fundamental-pair handle.
 */
typedef struct CausticaPair CausticaPair;

/**
 * Opaque coefficient profile handle.
 */
typedef struct CausticaProfile CausticaProfile;

/**
 * Caustic diagnostics (flattened [`classical::CausticReport`]).
 */
typedef struct CausticaCausticReport {
  bool critical;
  double u_t;
  double caustic_residual;
  /**
   * Stretching factor; NaN when non-critical.
   */
  double k;
  /**
   * Focal intercept s(T); NaN when non-critical.
   */
  double focal_intercept;
  uint32_t morse_index;
} CausticaCausticReport;

/**
 * Coefficients of `I(b,T;a,0) = A a^2 + B ab + C b^2 + D a + E b + F`.
 */
typedef struct CausticaActionForm {
  double a;
  double b;
  double c;
  double d;
  double e;
  double f;
} CausticaActionForm;

/**
 * Final Gaussian packet of the slit experiment.
 */
typedef struct CausticaSlitResult {
  double center;
  double sigma;
  double variance;
  double norm;
} CausticaSlitResult;

/**
 * Susceptibility output.
 */
typedef struct CausticaSusceptibility {
  double s;
  double jacobi_abs;
  double finite_difference;
  bool purely_quantum;
} CausticaSusceptibility;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message for the calling thread into `buffer`
 * (always NUL-terminated when `capacity > 0`); returns the full message
 * length in bytes, excluding the terminator.
 */
uintptr_t caustica_last_error(char *buffer, uintptr_t capacity);

/**
 * Report schema version of the library (static string, do not free).
 */
const char *caustica_schema_version(void);

/**
 * Parse a JSON coefficient profile (see the repo docs for the schema).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CausticaStatus caustica_profile_parse(const char *json, struct CausticaProfile **out);

/**
 * Build a constant profile.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CausticaStatus caustica_profile_constant(double value,
                                              double horizon,
                                              struct CausticaProfile **out);

/**
 * Evaluate a profile at time `t`.
 *
 * # Safety
 * `profile` must come from a `caustica_profile_*` constructor; `out` must
 * be a valid pointer.
 */
enum CausticaStatus caustica_profile_eval(const struct CausticaProfile *profile,
                                          double t,
                                          double *out);

/**
 * Release a profile handle.
 *
 * # Safety
 * `profile` must come from a `caustica_profile_*` constructor (or be null).
 */
void caustica_profile_free(struct CausticaProfile *profile);

/**
 * Integrate the fundamental pair (u, v) and special solution s over [0, T].
 *
 * # Safety
 * `lambda` and `mu` must be live profile handles; `out` a valid pointer.
 */
enum CausticaStatus caustica_solve_fundamental(const struct CausticaProfile *lambda,
                                               const struct CausticaProfile *mu,
                                               uintptr_t steps,
                                               struct CausticaPair **out);

/**
 * Release a fundamental-pair handle.
 *
 * # Safety
 * `pair` must come from `caustica_solve_fundamental` (or be null).
 */
void caustica_pair_free(struct CausticaPair *pair);

/**
 * Caustic diagnostics for a solved pair.
 *
 * # Safety
 * `pair` must be a live pair handle; `out` a valid pointer.
 */
enum CausticaStatus caustica_caustic_report(const struct CausticaPair *pair,
                                            double eps_caustic,
                                            struct CausticaCausticReport *out);

/**
 * Quadratic-form coefficients of the boundary-value action (non-critical).
 *
 * # Safety
 * `pair` must be a live pair handle; `out` a valid pointer.
 */
enum CausticaStatus caustica_action_coefficients(const struct CausticaPair *pair,
                                                 double eps_caustic,
                                                 struct CausticaActionForm *out);

/**
 * Lowest `n_max` Dirichlet eigenvalues of `-[d^2/dt^2 + lambda(t)]` at `n`
 * interior points, written into `eigenvalues` (capacity `n_max`). The
 * extended index (modes with `E <= 0`) lands in `index`.
 *
 * # Safety
 * `lambda` must be a live profile handle; `eigenvalues` must point to at
 * least `n_max` doubles; `index` must be a valid pointer.
 */
enum CausticaStatus caustica_spectrum(const struct CausticaProfile *lambda,
                                      uintptr_t n_max,
                                      uintptr_t n,
                                      double *eigenvalues,
                                      uint32_t *index);

/**
 * Evolve the slit state through the regular kernel in closed form.
 *
 * # Safety
 * `form` and `out` must be valid pointers.
 */
enum CausticaStatus caustica_slit_evolve(const struct CausticaActionForm *form,
                                         double a,
                                         double sigma0,
                                         double p,
                                         double hbar,
                                         uint32_t morse_index,
                                         struct CausticaSlitResult *out);

/**
 * Momentum susceptibility of the final spread.
 *
 * # Safety
 * `form` and `out` must be valid pointers.
 */
enum CausticaStatus caustica_susceptibility(const struct CausticaActionForm *form,
                                            double a,
                                            double sigma0,
                                            double p,
                                            double hbar,
                                            struct CausticaSusceptibility *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CAUSTICA_H */
