#ifndef PINCH_SOP_H
#define PINCH_SOP_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum {
  PINCH_STATUS_OK = 0,
  PINCH_STATUS_INVALID_PARAMETER = 1,
  PINCH_STATUS_DOMAIN = 2,
  PINCH_STATUS_SINGULARITY = 3,
  PINCH_STATUS_ACCURACY = 4,
  PINCH_STATUS_USAGE = 5,
  PINCH_STATUS_IO = 6,
  PINCH_STATUS_NULL_POINTER = 7,
  PINCH_STATUS_PANIC = 8,
} PinchStatus;

// Validated configuration. Opaque to C.
typedef struct PinchConfig PinchConfig;

// Model parameters, SI units.
typedef struct {
  // Side of the square region, m.
  double region_side;
  // Waveguide height, m.
  double height;
  // Carrier frequency, Hz.
  double carrier_freq;
  double n_eff;
  // Transmit power, W.
  double transmit_power;
  // Noise power, W.
  double noise_power;
  // Target secrecy rate, bps/Hz.
  double target_rate;
} PinchParams;

// Outcome of a Monte Carlo run.
typedef struct {
  double estimate;
  // `sqrt(p (1 - p) / trials)`.
  double std_error;
  uint64_t trials;
  uint64_t hits;
} PinchMcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default parameters: D = 10 m, h = 3 m, 28 GHz, n_eff = 1.4, 20 dBm
// transmit power, -80 dBm noise, 0.1 bps/Hz.
PinchParams pinch_params_default(void);

// Validates `params` and stores a new handle in `*out`.
//
// # Safety
// `params` must point to a `PinchParams`; `out` must be valid for writes.
PinchStatus pinch_config_new(const PinchParams *params, PinchConfig **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `cfg` must be null or a handle from `pinch_config_new` not yet freed.
void pinch_config_free(PinchConfig *cfg);

// Copies the parameters a handle was built from.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_config_params(const PinchConfig *cfg, PinchParams *out);

// Effective transmit SNR `eta P_s / sigma^2`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_config_gamma_bar(const PinchConfig *cfg, double *out);

// Linear rate threshold `2^R_th`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_config_c_th(const PinchConfig *cfg, double *out);

// SOP by adaptive quadrature to absolute tolerance `tol` in `(0, 1e-3]`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_sop_exact(const PinchConfig *cfg, double tol, double *out);

// Gauss-Chebyshev SOP of order `order`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_sop_chebyshev(const PinchConfig *cfg, uintptr_t order, double *out);

// High-power limit of the SOP.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_sop_asymptotic(const PinchConfig *cfg, double *out);

// `(2 pi - 1) / 24`.
double pinch_sop_lower_bound_pas(void);

// `0.5`.
double pinch_sop_lower_bound_fpa(void);

// Monte Carlo SOP of the pinching-antenna system. Results depend only on
// `(trials, seed)`, not on `workers`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_mc_sop_pas(const PinchConfig *cfg,
                             uint64_t trials,
                             uint64_t seed,
                             uintptr_t workers,
                             PinchMcResult *out);

// Monte Carlo SOP of the fixed antenna at the region centre.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_mc_sop_fpa(const PinchConfig *cfg,
                             uint64_t trials,
                             uint64_t seed,
                             uintptr_t workers,
                             PinchMcResult *out);

// CDF of Bob's SNR at `z > 0`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_cdf_gamma_b(const PinchConfig *cfg, double z, double *out);

// Density of Eve's SNR at `z > 0`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_pdf_gamma_e(const PinchConfig *cfg, double z, double *out);

// Density of Eve's squared horizontal distance at `w >= 0`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_pdf_w(const PinchConfig *cfg, double w, double *out);

// CDF of Eve's squared horizontal distance at `t`.
//
// # Safety
// `cfg` must be a live handle; `out` must be valid for writes.
PinchStatus pinch_cdf_chi(const PinchConfig *cfg, double t, double *out);

// Message of the most recent failure on this thread, or null if none.
// Valid until the next failing call on the same thread.
const char *pinch_last_error_message(void);

// Static name of a status code, e.g. `"invalid-parameter"`.
const char *pinch_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINCH_SOP_H */
