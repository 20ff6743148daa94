#ifndef FLOQEPT_FLOQEPT_H
#define FLOQEPT_FLOQEPT_H

/* C interface to the floqept simulator. Frequencies are in Hz.
 *
 * Every function returning floqept_status reports failure through the code
 * and a thread-local message (floqept_last_error). Handles are opaque and
 * owned by the caller; destroy functions accept NULL. */

#include <stddef.h>

#if defined(_WIN32)
#if defined(FLOQEPT_BUILDING)
#define FLOQEPT_API __declspec(dllexport)
#else
#define FLOQEPT_API __declspec(dllimport)
#endif
#else
#define FLOQEPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum floqept_status {
  FLOQEPT_OK = 0,
  FLOQEPT_ERR_INVALID_ARGUMENT = 1,
  FLOQEPT_ERR_VALIDATION = 2,
  FLOQEPT_ERR_NUMERICAL = 3,
  FLOQEPT_ERR_IO = 4,
  FLOQEPT_ERR_RANGE = 5,
  FLOQEPT_ERR_INTERNAL = 6
} floqept_status;

typedef enum floqept_channel { FLOQEPT_CH1 = 0, FLOQEPT_CH2 = 1 } floqept_channel;

typedef enum floqept_phase { FLOQEPT_UNBROKEN = 0, FLOQEPT_EP = 1, FLOQEPT_BROKEN = 2 } floqept_phase;

typedef enum floqept_route {
  FLOQEPT_ROUTE_CLOSED_FORM = 0,
  FLOQEPT_ROUTE_MONODROMY = 1,
  FLOQEPT_ROUTE_SPECTRAL = 2
} floqept_route;

typedef enum floqept_readout {
  FLOQEPT_READOUT_AUTO = 0,
  FLOQEPT_READOUT_TRANSFER = 1,
  FLOQEPT_READOUT_SELF = 2
} floqept_readout;

FLOQEPT_API const char* floqept_version(void);
/* Message of the last failed call on this thread; "" when none. */
FLOQEPT_API const char* floqept_last_error(void);
FLOQEPT_API const char* floqept_status_name(floqept_status s);
FLOQEPT_API const char* floqept_phase_name(floqept_phase p);
FLOQEPT_API const char* floqept_route_name(floqept_route r);
FLOQEPT_API floqept_status floqept_route_parse(const char* text, floqept_route* out);

/* ---- configuration: model parameters plus simulation settings ---- */

typedef struct floqept_config floqept_config;

FLOQEPT_API floqept_status floqept_config_create(floqept_config** out);
FLOQEPT_API floqept_status floqept_config_clone(const floqept_config* cfg, floqept_config** out);
FLOQEPT_API void floqept_config_destroy(floqept_config* cfg);

/* Keys: delta0 gamma_c gamma12 delta_b omega_b delta_zeeman0 stark_shift n1 n2
 * truncation_m rel_tol abs_tol grid_start grid_stop grid_step sim_duration. */
FLOQEPT_API floqept_status floqept_config_set(floqept_config* cfg, const char* key, const char* value);
FLOQEPT_API floqept_status floqept_config_set_double(floqept_config* cfg, const char* key, double value);
FLOQEPT_API floqept_status floqept_config_get_double(const floqept_config* cfg, const char* key, double* out);
FLOQEPT_API size_t floqept_config_key_count(void);
FLOQEPT_API const char* floqept_config_key(size_t i);

/* Flat "key = value" text; '#' starts a comment line. */
FLOQEPT_API floqept_status floqept_config_load_text(floqept_config* cfg, const char* text);
FLOQEPT_API floqept_status floqept_config_load_file(floqept_config* cfg, const char* path);
/* Writes the settings text (round-trip exact) into buf; *needed gets the full
 * length including the terminator. buf may be NULL when capacity is 0. */
FLOQEPT_API floqept_status floqept_config_format(const floqept_config* cfg, char* buf, size_t capacity,
                                                 size_t* needed);

/* FLOQEPT_ERR_VALIDATION with the full report as the message when invalid. */
FLOQEPT_API floqept_status floqept_config_validate(const floqept_config* cfg);
FLOQEPT_API int floqept_required_truncation(const floqept_config* cfg);

/* ---- eigenvalues ---- */

typedef struct floqept_branches {
  double re_plus, im_plus;
  double re_minus, im_minus;
  floqept_phase phase;
} floqept_branches;

/* Static two-mode branches at the configured delta0 and gamma_c (decay excluded). */
FLOQEPT_API floqept_status floqept_static_eigen(const floqept_config* cfg, floqept_branches* out);
/* Closed-form rotating-wave Floquet branches (decay excluded). */
FLOQEPT_API floqept_status floqept_rwa_eigen(const floqept_config* cfg, floqept_branches* out);
FLOQEPT_API floqept_status floqept_effective_coupling(const floqept_config* cfg, double* out);

typedef struct floqept_quasienergies {
  double re[2], im[2];  /* folded to [-w/2, w/2), decay included */
  int zone_offset[2];   /* unfolded = folded + offset * w */
  double real_gap;      /* circular distance of the folded real parts */
  double determinant_abs;
  double determinant_expected;
  size_t steps;
} floqept_quasienergies;

FLOQEPT_API floqept_status floqept_monodromy(const floqept_config* cfg, floqept_quasienergies* out);

/* ---- harmonic-balance response ---- */

/* Time-averaged power per channel for a unit probe on `probe` at `detuning`. */
FLOQEPT_API floqept_status floqept_steady_state_power(const floqept_config* cfg, floqept_channel probe,
                                                      double detuning, double power_out[2]);

typedef struct floqept_spectrum floqept_spectrum;

/* probe_mask: bit 0 probes CH1, bit 1 probes CH2 (powers summed). */
FLOQEPT_API floqept_status floqept_spectrum_compute(const floqept_config* cfg, unsigned probe_mask, int jobs,
                                                    int with_sidebands, floqept_spectrum** out);
FLOQEPT_API void floqept_spectrum_destroy(floqept_spectrum* s);
FLOQEPT_API size_t floqept_spectrum_size(const floqept_spectrum* s);
FLOQEPT_API int floqept_spectrum_truncation(const floqept_spectrum* s);
FLOQEPT_API const double* floqept_spectrum_grid(const floqept_spectrum* s);
FLOQEPT_API const double* floqept_spectrum_power(const floqept_spectrum* s, floqept_channel c);
/* NULL when computed without sidebands or when |m| > truncation. */
FLOQEPT_API const double* floqept_spectrum_sideband(const floqept_spectrum* s, floqept_channel c, int m);

/* ---- peaks ---- */

typedef struct floqept_peak {
  double center, height, fwhm;
  int has_label;
  int label;
} floqept_peak;

typedef struct floqept_peaks floqept_peaks;

FLOQEPT_API floqept_status floqept_detect_peaks(const double* x, const double* y, size_t n, double prominence,
                                                floqept_peaks** out);
FLOQEPT_API void floqept_peaks_destroy(floqept_peaks* p);
FLOQEPT_API size_t floqept_peaks_count(const floqept_peaks* p);
FLOQEPT_API floqept_status floqept_peaks_get(const floqept_peaks* p, size_t i, floqept_peak* out);
FLOQEPT_API floqept_status floqept_peaks_label(floqept_peaks* p, double origin, double spacing);

/* ---- separation ---- */

typedef struct floqept_separation_options {
  double coarse_step;
  double fine_step;
  double prominence;
  floqept_readout readout;
  int jobs;
} floqept_separation_options;

typedef struct floqept_separation_point {
  double delta0_abs;
  double separation;
  int merged;
  double ch1_center, ch2_center;
  double fwhm;
  double resolution;
  double eigen_separation;
} floqept_separation_point;

FLOQEPT_API void floqept_separation_options_init(floqept_separation_options* o);
/* opts may be NULL for defaults. */
FLOQEPT_API floqept_status floqept_separation(const floqept_config* cfg, const floqept_separation_options* opts,
                                              floqept_separation_point* out);
FLOQEPT_API floqept_status floqept_separation_curve(const floqept_config* cfg, const double* delta0_abs, size_t n,
                                                    const floqept_separation_options* opts,
                                                    floqept_separation_point* out);

/* ---- beat ---- */

typedef struct floqept_beat {
  int found;
  double frequency, amplitude, confidence;
  double duration, resolution, nyquist;
  char note[128];
} floqept_beat;

/* samples_per_period or confidence_threshold <= 0 selects the default (16, 8). */
FLOQEPT_API floqept_status floqept_beat_frequency(const floqept_config* cfg, double samples_per_period,
                                                  double confidence_threshold, floqept_beat* out);

/* ---- EP search ---- */

typedef struct floqept_ep_options {
  double bracket_width;
  double monodromy_gap;
  int has_gamma_eff; /* closed-form route: use gamma_eff instead of the Bessel formula */
  double gamma_eff;
  floqept_separation_options separation;
} floqept_ep_options;

typedef struct floqept_ep_result {
  double delta0_abs, mu, gamma_eff;
  floqept_route route;
  double lo, hi;
  int iterations;
} floqept_ep_result;

FLOQEPT_API void floqept_ep_options_init(floqept_ep_options* o);
FLOQEPT_API floqept_status floqept_locate_ep(const floqept_config* cfg, int n, floqept_route route,
                                             const floqept_ep_options* opts, floqept_ep_result* out);
/* *broken is 1 when the route's indicator reports the broken phase. */
FLOQEPT_API floqept_status floqept_ep_indicator(const floqept_config* cfg, int n, floqept_route route,
                                                double delta0_abs, const floqept_ep_options* opts, int* broken);

/* ---- coupling curve ---- */

typedef struct floqept_gamma_point {
  double omega_b;
  double gamma_eff;
  int resolved;
} floqept_gamma_point;

typedef struct floqept_gamma_curve floqept_gamma_curve;

FLOQEPT_API floqept_status floqept_gamma_curve_compute(const floqept_config* cfg, const double* omegas, size_t n,
                                                       floqept_route route, const floqept_ep_options* opts, int jobs,
                                                       floqept_gamma_curve** out);
FLOQEPT_API floqept_status floqept_gamma_curve_fit(const floqept_gamma_point* points, size_t n,
                                                   floqept_gamma_curve** out);
FLOQEPT_API void floqept_gamma_curve_destroy(floqept_gamma_curve* g);
FLOQEPT_API size_t floqept_gamma_curve_size(const floqept_gamma_curve* g);
FLOQEPT_API floqept_status floqept_gamma_curve_point(const floqept_gamma_curve* g, size_t i, floqept_gamma_point* out);
/* Diagnostic for unresolved points; "" otherwise. */
FLOQEPT_API const char* floqept_gamma_curve_point_note(const floqept_gamma_curve* g, size_t i);
FLOQEPT_API int floqept_gamma_curve_fitted(const floqept_gamma_curve* g);
FLOQEPT_API double floqept_gamma_curve_gamma_c(const floqept_gamma_curve* g);
FLOQEPT_API double floqept_gamma_curve_delta_b(const floqept_gamma_curve* g);
FLOQEPT_API double floqept_gamma_curve_residual_norm(const floqept_gamma_curve* g);
FLOQEPT_API int floqept_gamma_curve_iterations(const floqept_gamma_curve* g);
FLOQEPT_API const char* floqept_gamma_curve_message(const floqept_gamma_curve* g);

FLOQEPT_API double floqept_coupling_model(double omega_b, double gamma_c, double delta_b);

/* Bessel function of the first kind, integer order, |x| <= 50. */
FLOQEPT_API floqept_status floqept_bessel_j(int m, double x, double* out);

/* ---- Bessel height fits ---- */

typedef struct floqept_fit_result {
  double alpha, k;
  double residual_norm, gradient_norm, r_squared;
  int converged, iterations;
  char message[160];
} floqept_fit_result;

FLOQEPT_API floqept_status floqept_fit_sideband_heights(const double* omegas, const double* heights, size_t n, int m,
                                                        floqept_fit_result* out);
/* heights_out holds n_orders * n_omegas values, order-major. */
FLOQEPT_API floqept_status floqept_simulate_sideband_heights(const floqept_config* cfg, const double* omegas,
                                                             size_t n_omegas, const int* orders, size_t n_orders,
                                                             int jobs, double* heights_out);

/* ---- drive depth ---- */

FLOQEPT_API floqept_status floqept_solve_drive_depth(double gamma_c, double omega_b, int n1, int n2, double target,
                                                     double x_lo, double x_hi, double* delta_b_out);
/* Writes up to capacity roots in x; *count gets the total number found. */
FLOQEPT_API floqept_status floqept_drive_depth_roots(double gamma_c, int n1, int n2, double target, double x_max,
                                                     double* roots, size_t capacity, size_t* count);

/* ---- phase diagram ---- */

typedef struct floqept_phase_cell {
  double delta0_abs, omega_b, mu, gamma_eff;
  floqept_phase phase;
} floqept_phase_cell;

/* out holds n_omega * n_delta0 cells, omega-major. */
FLOQEPT_API floqept_status floqept_phase_diagram(const floqept_config* cfg, const double* delta0_abs,
                                                 size_t n_delta0, const double* omegas, size_t n_omega, int n,
                                                 double resolution, floqept_phase_cell* out);

#ifdef __cplusplus
}
#endif

#endif
