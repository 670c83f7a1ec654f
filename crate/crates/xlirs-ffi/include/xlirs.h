#ifndef XLIRS_H
#define XLIRS_H

/* Generated by cbindgen from the xlirs-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum XlirsStatus {
  /**
   * Success.
   */
  XLIRS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  XLIRS_STATUS_NULL_POINTER = 1,
  /**
   * Inputs failed validation (geometry, angles, ranges, power).
   */
  XLIRS_STATUS_INVALID_INPUT = 2,
  /**
   * The requested model's preconditions do not hold for this scenario.
   */
  XLIRS_STATUS_NOT_APPLICABLE = 3,
  /**
   * Adaptive quadrature did not reach its tolerance.
   */
  XLIRS_STATUS_NO_CONVERGENCE = 4,
  /**
   * A special-function argument left its real domain.
   */
  XLIRS_STATUS_DOMAIN_ERROR = 5,
} XlirsStatus;

/**
 * Single-valued SNR models addressable through [`xlirs_snr`].
 */
typedef enum XlirsModel {
  /**
   * Exact element-wise double sum.
   */
  XLIRS_MODEL_EXACT_SUM = 0,
  /**
   * Continuum integral over the aperture rectangle.
   */
  XLIRS_MODEL_INTEGRAL = 1,
  /**
   * Infinite-aperture boresight limit.
   */
  XLIRS_MODEL_ASYMPTOTIC = 2,
  /**
   * Single-column integral form.
   */
  XLIRS_MODEL_ULA_INTEGRAL = 3,
  /**
   * Single-column closed form in the subtended angles.
   */
  XLIRS_MODEL_ULA_CLOSED = 4,
  /**
   * Infinite-column limit.
   */
  XLIRS_MODEL_ULA_ASYMPTOTIC = 5,
  /**
   * Plane-wave baseline with the aperture-matched reference gain.
   */
  XLIRS_MODEL_UPW = 6,
} XlirsModel;

/**
 * Opaque scenario handle (geometry, both endpoints, transmit SNR).
 */
typedef struct XlirsScenario XlirsScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a scenario handle.
 *
 * Element counts must be odd; `spacing_m <= wavelength_m / 2`;
 * `sqrt(element_area_m2) <= spacing_m`; zenith angles in (0, pi), azimuth
 * angles in (-pi/2, pi/2); ranges and `transmit_snr_linear` positive.
 *
 * On success writes a handle the caller must release with
 * [`xlirs_scenario_free`].
 *
 * # Safety
 * `out_scenario` must be a valid pointer to writable memory.
 */
enum XlirsStatus xlirs_scenario_new(uint32_t m_y,
                                    uint32_t m_z,
                                    double spacing_m,
                                    double element_area_m2,
                                    double wavelength_m,
                                    double tx_range_m,
                                    double tx_zenith_rad,
                                    double tx_azimuth_rad,
                                    double rx_range_m,
                                    double rx_zenith_rad,
                                    double rx_azimuth_rad,
                                    double transmit_snr_linear,
                                    struct XlirsScenario **out_scenario);

/**
 * Releases a scenario handle. Null is a no-op.
 *
 * # Safety
 * `scenario` must be null or a handle obtained from
 * [`xlirs_scenario_new`] that has not been freed yet.
 */
void xlirs_scenario_free(struct XlirsScenario *scenario);

/**
 * Evaluates one single-valued SNR model; the result is linear scale.
 * `model` takes an [`XlirsModel`] value; anything else yields
 * `INVALID_INPUT` (the parameter is a plain integer so that a stray value
 * from C stays a checked error).
 *
 * # Safety
 * `scenario` must be a live handle from [`xlirs_scenario_new`];
 * `out_snr_linear` must point to writable memory.
 */
enum XlirsStatus xlirs_snr(const struct XlirsScenario *scenario,
                           uint32_t model,
                           double *out_snr_linear);

/**
 * Inscribed/circumscribed-disk bounds on the aperture integral
 * (polar quadrature). Both outputs are linear scale.
 *
 * # Safety
 * As for [`xlirs_snr`]; both out-pointers must be writable.
 */
enum XlirsStatus xlirs_snr_bounds(const struct XlirsScenario *scenario,
                                  double *out_lower_linear,
                                  double *out_upper_linear);

/**
 * Closed-form boresight bounds (elliptic integrals). For equidistant
 * endpoints both outputs carry the exact closed-form value.
 *
 * # Safety
 * As for [`xlirs_snr_bounds`].
 */
enum XlirsStatus xlirs_snr_boresight(const struct XlirsScenario *scenario,
                                     double *out_lower_linear,
                                     double *out_upper_linear);

/**
 * Plane-wave baseline with an explicit reference gain.
 * `beta0_squared_m4 <= 0` selects the aperture-matched default.
 *
 * # Safety
 * As for [`xlirs_snr`].
 */
enum XlirsStatus xlirs_snr_upw(const struct XlirsScenario *scenario,
                               double beta0_squared_m4,
                               double *out_snr_linear);

/**
 * Incomplete elliptic integral of the first kind, parameter convention:
 * `F(theta | k) = integral_0^theta dbeta / sqrt(1 - k sin^2 beta)`.
 *
 * # Safety
 * `out_value` must point to writable memory.
 */
enum XlirsStatus xlirs_ellip_f(double theta, double k, double *out_value);

/**
 * Complete elliptic integral of the first kind, parameter in [0, 1).
 *
 * # Safety
 * `out_value` must point to writable memory.
 */
enum XlirsStatus xlirs_ellip_k(double m, double *out_value);

/**
 * 10 log10(x); presentation helper.
 */
double xlirs_db_from_linear(double linear);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; never null.
 */
const char *xlirs_last_error_message(void);

/**
 * Library version as a static null-terminated string.
 */
const char *xlirs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XLIRS_H */
