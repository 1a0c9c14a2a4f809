#include "biphoton.h"

#include <cstring>
#include <string>

#include "correlate.hpp"
#include "phasematch.hpp"
#include "presets.hpp"
#include "source_sim.hpp"
#include "tagstream.hpp"
#include "temporal_mode.hpp"

namespace {

thread_local std::string g_last_error;

bp_status fail(bp_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename F>
bp_status guarded(F&& fn) {
  try {
    fn();
    return BP_OK;
  } catch (const bp::ParseError& e) {
    return fail(BP_ERR_PARSE, e.what());
  } catch (const bp::AnalysisError& e) {
    return fail(BP_ERR_ANALYSIS, e.what());
  } catch (const bp::ResourceLimitError& e) {
    return fail(BP_ERR_RESOURCE_LIMIT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(BP_ERR_IO, e.what());
  }
}

bp::OpticalGeometry to_geometry(const bp_geometry& g) {
  bp::OpticalGeometry geom;
  geom.lambda_sp = g.lambda_sp_m;
  geom.lambda_pd = g.lambda_pd_m;
  geom.cell_length = g.cell_length_m;
  geom.pump_detuning = g.pump_detuning_rad_s;
  geom.signal_angle = g.signal_angle_rad;
  return geom;
}

bp::TemporalMode to_mode(const bp_temporal_mode& m) {
  return bp::TemporalMode(m.rise_time_s, m.decay_time_s);
}

bp::SourceConfig to_source_config(const bp_source_config& c) {
  bp::SourceConfig cfg;
  cfg.pair_rate = c.pair_rate_hz;
  cfg.mode = to_mode(c.mode);
  cfg.signal_transmission = c.signal_transmission;
  cfg.idler_transmission = c.idler_transmission;
  cfg.signal_noise_rate = c.signal_noise_rate_hz;
  cfg.idler_noise_rate = c.idler_noise_rate_hz;
  cfg.jitter_fwhm = c.jitter_fwhm_s;
  cfg.dead_time = c.dead_time_s;
  cfg.duration = c.duration_s;
  cfg.seed = c.seed;
  return cfg;
}

bp_status require(bool ok, const char* what) {
  return ok ? BP_OK : fail(BP_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

struct bp_stream {
  bp::TagStream impl;
};

struct bp_histogram {
  bp::CorrelationHistogram impl;
};

struct bp_hom_result {
  bp::HomProfile impl;
};

extern "C" {

const char* bp_last_error(void) { return g_last_error.c_str(); }

bp_geometry bp_geometry_default(void) {
  bp::OpticalGeometry g;
  return {g.lambda_sp, g.lambda_pd, g.cell_length, g.pump_detuning, g.signal_angle};
}

bp_status bp_delta_k_exact(const bp_geometry* geom, double* out) {
  if (bp_status s = require(geom && out, "null argument")) return s;
  return guarded([&] { *out = bp::delta_k_exact(to_geometry(*geom)); });
}

bp_status bp_delta_k_small_angle(const bp_geometry* geom, double* out) {
  if (bp_status s = require(geom && out, "null argument")) return s;
  return guarded([&] { *out = bp::delta_k_small_angle(to_geometry(*geom)); });
}

bp_status bp_phase_match_factor(double delta_k, double cell_length, double* out) {
  if (bp_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] { *out = bp::phase_match_factor(delta_k, cell_length); });
}

bp_status bp_idler_angle(const bp_geometry* geom, double signal_angle, double* out) {
  if (bp_status s = require(geom && out, "null argument")) return s;
  return guarded([&] { *out = bp::idler_angle(signal_angle, to_geometry(*geom)); });
}

bp_status bp_optimal_signal_angle(const bp_geometry* geom, double* out_angle,
                                  double* out_factor) {
  if (bp_status s = require(geom && out_angle, "null argument")) return s;
  return guarded([&] {
    const bp::PhaseMatchResult res = bp::optimal_signal_angle(to_geometry(*geom));
    *out_angle = res.optimal_angle;
    if (out_factor) *out_factor = res.factor;
  });
}

bp_status bp_scan_phase_matching(const bp_geometry* geom, const double* thetas,
                                 size_t n_thetas, const double* detunings,
                                 size_t n_detunings, double* factors) {
  if (bp_status s = require(geom && thetas && detunings && factors, "null argument"))
    return s;
  return guarded([&] {
    const auto rows = bp::scan_phase_matching(
        std::vector<double>(thetas, thetas + n_thetas),
        std::vector<double>(detunings, detunings + n_detunings), to_geometry(*geom));
    for (size_t i = 0; i < rows.size(); ++i) factors[i] = rows[i].factor;
  });
}

bp_status bp_energy_fraction(const bp_temporal_mode* mode, double window, double* out) {
  if (bp_status s = require(mode && out, "null argument")) return s;
  return guarded([&] { *out = to_mode(*mode).energy_fraction(window); });
}

bp_status bp_mode_overlap(const bp_temporal_mode* a, const bp_temporal_mode* b,
                          double dt, double* out) {
  if (bp_status s = require(a && b && out, "null argument")) return s;
  return guarded([&] { *out = bp::mode_overlap(to_mode(*a), to_mode(*b), dt); });
}

bp_status bp_hom_coincidence_probability(const bp_temporal_mode* a,
                                         const bp_temporal_mode* b, double dt,
                                         double* out) {
  if (bp_status s = require(a && b && out, "null argument")) return s;
  return guarded(
      [&] { *out = bp::hom_coincidence_probability(to_mode(*a), to_mode(*b), dt); });
}

void bp_stream_free(bp_stream* stream) { delete stream; }

uint64_t bp_stream_count(const bp_stream* stream) {
  return stream ? stream->impl.size() : 0;
}

bp_status bp_stream_tags(const bp_stream* stream, uint8_t* channels,
                         uint64_t* times_ps) {
  if (bp_status s = require(stream != nullptr, "null stream")) return s;
  const auto& tags = stream->impl.tags();
  for (size_t i = 0; i < tags.size(); ++i) {
    if (channels) channels[i] = tags[i].channel;
    if (times_ps) times_ps[i] = tags[i].time_ps;
  }
  return BP_OK;
}

bp_status bp_stream_read(const char* path, bp_stream** out) {
  if (bp_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new bp_stream{bp::read_stream_file(path)}; });
}

bp_status bp_stream_write(const bp_stream* stream, const char* path,
                          uint64_t* bytes_written) {
  if (bp_status s = require(stream && path, "null argument")) return s;
  return guarded([&] {
    const uint64_t n = bp::write_stream_file(stream->impl, path);
    if (bytes_written) *bytes_written = n;
  });
}

bp_status bp_stream_import_csv(const char* path, bp_stream** out) {
  if (bp_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new bp_stream{bp::import_csv_file(path)}; });
}

bp_status bp_stream_merge(const bp_stream* const* streams, size_t n, bp_stream** out) {
  if (bp_status s = require(streams && out, "null argument")) return s;
  return guarded([&] {
    std::vector<bp::TagStream> inputs;
    inputs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!streams[i]) throw std::invalid_argument("null stream in merge input");
      inputs.push_back(streams[i]->impl);
    }
    *out = new bp_stream{bp::merge_sorted(inputs)};
  });
}

bp_status bp_preset_config(const char* name, bp_source_config* out) {
  if (bp_status s = require(name && out, "null argument")) return s;
  return guarded([&] {
    const bp::SourceConfig cfg = bp::preset(name);
    *out = {cfg.pair_rate,
            {cfg.mode.rise_time(), cfg.mode.decay_time()},
            cfg.signal_transmission,
            cfg.idler_transmission,
            cfg.signal_noise_rate,
            cfg.idler_noise_rate,
            cfg.jitter_fwhm,
            cfg.dead_time,
            cfg.duration,
            cfg.seed};
  });
}

bp_status bp_simulate_pairs(const bp_source_config* config, bp_stream** out) {
  if (bp_status s = require(config && out, "null argument")) return s;
  return guarded(
      [&] { *out = new bp_stream{bp::simulate_pairs(to_source_config(*config))}; });
}

bp_status bp_simulate_hom(const bp_source_config* config_a,
                          const bp_source_config* config_b, double indistinguishability,
                          uint64_t beamsplitter_seed, bp_stream** out) {
  if (bp_status s = require(config_a && config_b && out, "null argument")) return s;
  return guarded([&] {
    *out = new bp_stream{bp::simulate_hom_experiment(
        to_source_config(*config_a), to_source_config(*config_b),
        indistinguishability, beamsplitter_seed)};
  });
}

bp_status bp_simulate_heralded_autocorr(const bp_source_config* config,
                                        uint64_t splitter_seed, bp_stream** out) {
  if (bp_status s = require(config && out, "null argument")) return s;
  return guarded([&] {
    *out = new bp_stream{
        bp::simulate_heralded_autocorr(to_source_config(*config), splitter_seed)};
  });
}

bp_status bp_g2_cross(const bp_stream* stream, uint8_t idler_ch, uint8_t signal_ch,
                      uint64_t bin_width_ps, int64_t tau_min_ps, int64_t tau_max_ps,
                      double duration_s, unsigned threads, bp_histogram** out) {
  if (bp_status s = require(stream && out, "null argument")) return s;
  return guarded([&] {
    *out = new bp_histogram{bp::g2_cross(stream->impl, idler_ch, signal_ch,
                                         bin_width_ps, tau_min_ps, tau_max_ps,
                                         duration_s, threads == 0 ? 1 : threads)};
  });
}

void bp_histogram_free(bp_histogram* hist) { delete hist; }

size_t bp_histogram_bins(const bp_histogram* hist) {
  return hist ? hist->impl.bins() : 0;
}

int64_t bp_histogram_tau_ps(const bp_histogram* hist, size_t bin) {
  return hist->impl.bin_center_ps(bin);
}

uint64_t bp_histogram_counts(const bp_histogram* hist, size_t bin) {
  return hist->impl.counts[bin];
}

double bp_histogram_g2(const bp_histogram* hist, size_t bin) {
  return hist->impl.g2(bin);
}

bp_status bp_g2_peak(const bp_histogram* hist, int64_t* tau_ps, double* g2_max,
                     uint64_t* counts) {
  if (bp_status s = require(hist != nullptr, "null histogram")) return s;
  return guarded([&] {
    const bp::G2Peak peak = bp::g2_peak(hist->impl);
    if (tau_ps) *tau_ps = peak.tau_ps;
    if (g2_max) *g2_max = peak.g2;
    if (counts) *counts = peak.counts;
  });
}

bp_status bp_heralding_efficiency(const bp_stream* stream, uint8_t idler_ch,
                                  uint8_t signal_ch, int64_t window_offset_ps,
                                  uint64_t window_width_ps, double duration_s,
                                  bp_herald_stats* out) {
  if (bp_status s = require(stream && out, "null argument")) return s;
  return guarded([&] {
    const bp::HeraldStats st = bp::heralding_efficiency(
        stream->impl, idler_ch, signal_ch, {window_offset_ps, window_width_ps},
        duration_s);
    *out = {st.eta_h,   st.eta_h_raw, st.accidental, st.pair_rate,
            st.n_idler, st.n_signal,  st.matched,    st.window_warning ? 1 : 0};
  });
}

bp_status bp_heralded_g2c(const bp_stream* stream, uint8_t idler_ch, uint8_t t_ch,
                          uint8_t r_ch, int64_t window_offset_ps,
                          uint64_t window_width_ps, bp_conditioned_g2* out) {
  if (bp_status s = require(stream && out, "null argument")) return s;
  return guarded([&] {
    const bp::ConditionedG2 res = bp::heralded_g2c(
        stream->impl, idler_ch, t_ch, r_ch, {window_offset_ps, window_width_ps});
    *out = {res.g2c, res.n_idler, res.n_it, res.n_ir, res.n_itr};
  });
}

bp_status bp_hom_profile(const bp_stream* stream, uint8_t idler_a, uint8_t idler_b,
                         uint8_t out1, uint8_t out2, int64_t window_offset_ps,
                         uint64_t window_width_ps, uint64_t delay_bin_ps,
                         uint64_t delay_range_ps, uint64_t baseline_min_ps,
                         bp_hom_result** out) {
  if (bp_status s = require(stream && out, "null argument")) return s;
  return guarded([&] {
    *out = new bp_hom_result{bp::hom_profile(
        stream->impl, idler_a, idler_b, out1, out2,
        {window_offset_ps, window_width_ps}, delay_bin_ps, delay_range_ps,
        baseline_min_ps)};
  });
}

void bp_hom_result_free(bp_hom_result* result) { delete result; }

size_t bp_hom_result_bins(const bp_hom_result* result) {
  return result ? result->impl.counts.size() : 0;
}

int64_t bp_hom_result_delay_ps(const bp_hom_result* result, size_t bin) {
  return result->impl.bin_center_ps[bin];
}

uint64_t bp_hom_result_counts(const bp_hom_result* result, size_t bin) {
  return result->impl.counts[bin];
}

double bp_hom_result_visibility(const bp_hom_result* result) {
  return result->impl.visibility;
}

double bp_hom_result_baseline(const bp_hom_result* result) {
  return result->impl.baseline;
}

}  // extern "C"
