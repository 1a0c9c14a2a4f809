/* C interface to the biphoton simulation and correlation library.
 *
 * All entry points return bp_status; BP_OK is 0. On failure,
 * bp_last_error() returns a thread-local description of the most recent
 * error. Opaque handles are released with their matching _free function.
 * Times are seconds in configuration structs and picoseconds (int64/uint64)
 * on tag-level interfaces.
 */
#ifndef BIPHOTON_H
#define BIPHOTON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bp_status {
  BP_OK = 0,
  BP_ERR_INVALID_ARGUMENT = 1,
  BP_ERR_IO = 2,
  BP_ERR_PARSE = 3,
  BP_ERR_ANALYSIS = 4,
  BP_ERR_RESOURCE_LIMIT = 5
} bp_status;

const char* bp_last_error(void);

/* ---- phase matching ---- */

typedef struct bp_geometry {
  double lambda_sp_m;        /* lower-transition wavelength */
  double lambda_pd_m;        /* upper-transition wavelength */
  double cell_length_m;
  double pump_detuning_rad_s; /* signed angular frequency */
  double signal_angle_rad;
} bp_geometry;

/* 780 nm / 776 nm, 25 mm cell, zero detuning and angle. */
bp_geometry bp_geometry_default(void);

bp_status bp_delta_k_exact(const bp_geometry* geom, double* out_rad_m);
bp_status bp_delta_k_small_angle(const bp_geometry* geom, double* out_rad_m);
bp_status bp_phase_match_factor(double delta_k_rad_m, double cell_length_m,
                                double* out);
bp_status bp_idler_angle(const bp_geometry* geom, double signal_angle_rad,
                         double* out_rad);
/* Best emission angle for the geometry's detuning (angle field ignored). */
bp_status bp_optimal_signal_angle(const bp_geometry* geom, double* out_angle_rad,
                                  double* out_factor);
/* factors must hold n_detunings * n_thetas entries; detunings vary slowest. */
bp_status bp_scan_phase_matching(const bp_geometry* geom, const double* thetas_rad,
                                 size_t n_thetas, const double* detunings_rad_s,
                                 size_t n_detunings, double* factors);

/* ---- temporal mode ---- */

typedef struct bp_temporal_mode {
  double rise_time_s;
  double decay_time_s;
} bp_temporal_mode;

bp_status bp_energy_fraction(const bp_temporal_mode* mode, double window_s,
                             double* out);
bp_status bp_mode_overlap(const bp_temporal_mode* a, const bp_temporal_mode* b,
                          double dt_s, double* out);
bp_status bp_hom_coincidence_probability(const bp_temporal_mode* a,
                                         const bp_temporal_mode* b, double dt_s,
                                         double* out);

/* ---- tag streams ---- */

typedef struct bp_stream bp_stream;

void bp_stream_free(bp_stream* stream);
uint64_t bp_stream_count(const bp_stream* stream);
/* Copies all tags into caller arrays of bp_stream_count() entries
 * (either pointer may be NULL to skip). */
bp_status bp_stream_tags(const bp_stream* stream, uint8_t* channels,
                         uint64_t* times_ps);
bp_status bp_stream_read(const char* path, bp_stream** out);
bp_status bp_stream_write(const bp_stream* stream, const char* path,
                          uint64_t* bytes_written);
bp_status bp_stream_import_csv(const char* path, bp_stream** out);
bp_status bp_stream_merge(const bp_stream* const* streams, size_t n,
                          bp_stream** out);

/* ---- simulation ---- */

/* Channel ids used by the simulators: idler/signal of source A = 0/1,
 * source B = 2/3, split or beam-splitter outputs = 4/5. */
enum {
  BP_CH_IDLER_A = 0,
  BP_CH_SIGNAL_A = 1,
  BP_CH_IDLER_B = 2,
  BP_CH_SIGNAL_B = 3,
  BP_CH_SPLIT_T = 4,
  BP_CH_SPLIT_R = 5
};

typedef struct bp_source_config {
  double pair_rate_hz;          /* generated pairs/s, pre-loss */
  bp_temporal_mode mode;
  double signal_transmission;   /* [0,1], detector efficiency folded in */
  double idler_transmission;
  double signal_noise_rate_hz;
  double idler_noise_rate_hz;
  double jitter_fwhm_s;
  double dead_time_s;           /* 0 = off */
  double duration_s;
  uint64_t seed;
} bp_source_config;

/* Fills *out from a named preset: "ideal", "paper-2023", "paper-2021". */
bp_status bp_preset_config(const char* name, bp_source_config* out);

bp_status bp_simulate_pairs(const bp_source_config* config, bp_stream** out);
bp_status bp_simulate_hom(const bp_source_config* config_a,
                          const bp_source_config* config_b,
                          double indistinguishability, uint64_t beamsplitter_seed,
                          bp_stream** out);
bp_status bp_simulate_heralded_autocorr(const bp_source_config* config,
                                        uint64_t splitter_seed, bp_stream** out);

/* ---- analysis ---- */

typedef struct bp_histogram bp_histogram;

/* duration_s <= 0 derives the span from the stream. threads = 0 means 1. */
bp_status bp_g2_cross(const bp_stream* stream, uint8_t idler_ch, uint8_t signal_ch,
                      uint64_t bin_width_ps, int64_t tau_min_ps, int64_t tau_max_ps,
                      double duration_s, unsigned threads, bp_histogram** out);
void bp_histogram_free(bp_histogram* hist);
size_t bp_histogram_bins(const bp_histogram* hist);
int64_t bp_histogram_tau_ps(const bp_histogram* hist, size_t bin);
uint64_t bp_histogram_counts(const bp_histogram* hist, size_t bin);
double bp_histogram_g2(const bp_histogram* hist, size_t bin);
bp_status bp_g2_peak(const bp_histogram* hist, int64_t* tau_ps, double* g2_max,
                     uint64_t* counts);

typedef struct bp_herald_stats {
  double eta_h;         /* accidental-corrected heralding efficiency */
  double eta_h_raw;
  double accidental;    /* expected accidental matches per idler */
  double pair_rate_hz;  /* detected, accidental-corrected */
  uint64_t n_idler;
  uint64_t n_signal;
  uint64_t matched;
  int window_warning;   /* nonzero: corrected estimate was negative */
} bp_herald_stats;

bp_status bp_heralding_efficiency(const bp_stream* stream, uint8_t idler_ch,
                                  uint8_t signal_ch, int64_t window_offset_ps,
                                  uint64_t window_width_ps, double duration_s,
                                  bp_herald_stats* out);

typedef struct bp_conditioned_g2 {
  double g2c;
  uint64_t n_idler;
  uint64_t n_it;
  uint64_t n_ir;
  uint64_t n_itr;
} bp_conditioned_g2;

bp_status bp_heralded_g2c(const bp_stream* stream, uint8_t idler_ch, uint8_t t_ch,
                          uint8_t r_ch, int64_t window_offset_ps,
                          uint64_t window_width_ps, bp_conditioned_g2* out);

typedef struct bp_hom_result bp_hom_result;

bp_status bp_hom_profile(const bp_stream* stream, uint8_t idler_a, uint8_t idler_b,
                         uint8_t out1, uint8_t out2, int64_t window_offset_ps,
                         uint64_t window_width_ps, uint64_t delay_bin_ps,
                         uint64_t delay_range_ps, uint64_t baseline_min_ps,
                         bp_hom_result** out);
void bp_hom_result_free(bp_hom_result* result);
size_t bp_hom_result_bins(const bp_hom_result* result);
int64_t bp_hom_result_delay_ps(const bp_hom_result* result, size_t bin);
uint64_t bp_hom_result_counts(const bp_hom_result* result, size_t bin);
double bp_hom_result_visibility(const bp_hom_result* result);
double bp_hom_result_baseline(const bp_hom_result* result);

#ifdef __cplusplus
}
#endif

#endif /* BIPHOTON_H */
