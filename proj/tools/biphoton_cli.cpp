// Command-line front end for the biphoton library. Links the C API only.

#include <biphoton.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toml_lite.hpp"

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kDegToRad = 0.017453292519943295;

// Exit codes: 0 success, 2 usage, 3 parse/io, 4 analysis-undefined.
struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(bp_status status) {
  switch (status) {
    case BP_OK:
      return 0;
    case BP_ERR_INVALID_ARGUMENT:
    case BP_ERR_RESOURCE_LIMIT:
      return 2;
    case BP_ERR_PARSE:
    case BP_ERR_IO:
      return 3;
    case BP_ERR_ANALYSIS:
      return 4;
  }
  return 2;
}

void check(bp_status status) {
  if (status != BP_OK) throw CliError{exit_code_for(status), bp_last_error()};
}

struct StreamHandle {
  bp_stream* ptr = nullptr;
  ~StreamHandle() { bp_stream_free(ptr); }
};

struct HistHandle {
  bp_histogram* ptr = nullptr;
  ~HistHandle() { bp_histogram_free(ptr); }
};

struct HomHandle {
  bp_hom_result* ptr = nullptr;
  ~HomHandle() { bp_hom_result_free(ptr); }
};

// ---- config plumbing ----------------------------------------------------

json load_config_file(const std::string& path) {
  try {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
      std::ifstream f(path);
      if (!f) throw CliError{3, "cannot open config " + path};
      return json::parse(f);
    }
    return toml_lite::parse_file(path);
  } catch (const json::parse_error& e) {
    throw CliError{3, std::string("config: ") + e.what()};
  } catch (const toml_lite::TomlError& e) {
    throw CliError{3, e.what()};
  }
}

double jget(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw CliError{3, "config: " + key + " must be a number"};
  return j[key].get<double>();
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("BIPHOTON_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw CliError{2, "BIPHOTON_SEED is not a valid integer"};
  }
}

bp_source_config source_from_json(const json& section) {
  bp_source_config cfg;
  const std::string preset =
      section.contains("preset") ? section["preset"].get<std::string>() : "ideal";
  check(bp_preset_config(preset.c_str(), &cfg));
  cfg.pair_rate_hz = jget(section, "pair_rate_hz", cfg.pair_rate_hz);
  cfg.mode.rise_time_s = jget(section, "rise_ns", cfg.mode.rise_time_s * 1e9) * 1e-9;
  cfg.mode.decay_time_s = jget(section, "decay_ns", cfg.mode.decay_time_s * 1e9) * 1e-9;
  cfg.signal_transmission = jget(section, "signal_transmission", cfg.signal_transmission);
  cfg.idler_transmission = jget(section, "idler_transmission", cfg.idler_transmission);
  cfg.signal_noise_rate_hz = jget(section, "signal_noise_hz", cfg.signal_noise_rate_hz);
  cfg.idler_noise_rate_hz = jget(section, "idler_noise_hz", cfg.idler_noise_rate_hz);
  cfg.jitter_fwhm_s = jget(section, "jitter_ps", cfg.jitter_fwhm_s * 1e12) * 1e-12;
  cfg.dead_time_s = jget(section, "dead_ns", cfg.dead_time_s * 1e9) * 1e-9;
  cfg.duration_s = jget(section, "duration_s", cfg.duration_s);
  cfg.seed = static_cast<std::uint64_t>(jget(section, "seed", static_cast<double>(cfg.seed)));
  return cfg;
}

json source_to_json(const bp_source_config& cfg) {
  return json{{"pair_rate_hz", cfg.pair_rate_hz},
              {"rise_ns", cfg.mode.rise_time_s * 1e9},
              {"decay_ns", cfg.mode.decay_time_s * 1e9},
              {"signal_transmission", cfg.signal_transmission},
              {"idler_transmission", cfg.idler_transmission},
              {"signal_noise_hz", cfg.signal_noise_rate_hz},
              {"idler_noise_hz", cfg.idler_noise_rate_hz},
              {"jitter_ps", cfg.jitter_fwhm_s * 1e12},
              {"dead_ns", cfg.dead_time_s * 1e9},
              {"duration_s", cfg.duration_s},
              {"seed", cfg.seed}};
}

// ---- small output helpers ----------------------------------------------

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw CliError{3, "cannot write " + path};
  f << text;
}

void emit_json(const std::string& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// "a:b:step" or "v1,v2,..." or single value
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      const std::size_t c1 = text.find(':');
      const std::size_t c2 = text.find(':', c1 + 1);
      if (c2 == std::string::npos) throw std::invalid_argument("grid");
      const double start = std::stod(text.substr(0, c1));
      const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(text.substr(c2 + 1));
      if (!(step > 0.0) || stop < start) throw std::invalid_argument("grid");
      const long n = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
      for (long i = 0; i < n; ++i) out.push_back(start + step * static_cast<double>(i));
      return out;
    }
    std::istringstream items(text);
    std::string item;
    while (std::getline(items, item, ','))
      if (!item.empty()) out.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw CliError{2, "bad grid '" + text + "' (want start:stop:step or v1,v2,...)"};
  }
  if (out.empty()) throw CliError{2, "empty grid '" + text + "'"};
  return out;
}

StreamHandle load_stream(const std::string& path) {
  StreamHandle stream;
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
    check(bp_stream_import_csv(path.c_str(), &stream.ptr));
  else
    check(bp_stream_read(path.c_str(), &stream.ptr));
  return stream;
}

// ---- commands -----------------------------------------------------------

struct CommonOpts {
  std::string config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;

  json config() const {
    return config_path.empty() ? json::object() : load_config_file(config_path);
  }
  std::string out_path(const std::string& name) const {
    return output_dir + "/" + name;
  }
};

int cmd_phasematch(const CommonOpts& common, const std::string& theta_grid,
                   const std::string& detuning_list, double lambda_sp_nm,
                   double lambda_pd_nm, double cell_mm, double ratio_angle_deg,
                   bool find_optimum) {
  const json file_cfg = common.config();
  const json geo_cfg = file_cfg.value("geometry", json::object());

  bp_geometry geom = bp_geometry_default();
  geom.lambda_sp_m = (lambda_sp_nm > 0 ? lambda_sp_nm : jget(geo_cfg, "lambda_sp_nm", 780.0)) * 1e-9;
  geom.lambda_pd_m = (lambda_pd_nm > 0 ? lambda_pd_nm : jget(geo_cfg, "lambda_pd_nm", 776.0)) * 1e-9;
  geom.cell_length_m = (cell_mm > 0 ? cell_mm : jget(geo_cfg, "cell_mm", 25.0)) * 1e-3;

  const std::vector<double> thetas_deg = parse_grid(theta_grid);
  const std::vector<double> detunings_ghz = parse_grid(detuning_list);

  std::vector<double> thetas_rad, detunings_rad;
  for (double d : thetas_deg) thetas_rad.push_back(d * kDegToRad);
  for (double d : detunings_ghz) detunings_rad.push_back(d * 1e9 * kTwoPi);

  std::vector<double> factors(thetas_rad.size() * detunings_rad.size());
  check(bp_scan_phase_matching(&geom, thetas_rad.data(), thetas_rad.size(),
                               detunings_rad.data(), detunings_rad.size(),
                               factors.data()));

  std::ostringstream csv;
  csv << "theta_deg,detuning_ghz,factor\n";
  for (std::size_t d = 0; d < detunings_ghz.size(); ++d)
    for (std::size_t t = 0; t < thetas_deg.size(); ++t)
      csv << fmt9(thetas_deg[t]) << "," << fmt9(detunings_ghz[d]) << ","
          << fmt9(factors[d * thetas_deg.size() + t]) << "\n";
  write_text_file(common.out_path("phasematch.csv"), csv.str());

  json summary;
  summary["config"] = {{"lambda_sp_nm", geom.lambda_sp_m * 1e9},
                       {"lambda_pd_nm", geom.lambda_pd_m * 1e9},
                       {"cell_mm", geom.cell_length_m * 1e3},
                       {"theta_deg", thetas_deg},
                       {"detuning_ghz", detunings_ghz},
                       {"ratio_angle_deg", ratio_angle_deg}};

  double idler = 0.0;
  check(bp_idler_angle(&geom, ratio_angle_deg * kDegToRad, &idler));
  summary["idler_angle_ratio"] = idler / (ratio_angle_deg * kDegToRad);

  json per_detuning = json::array();
  std::vector<double> ratio_factors;
  for (double d : detunings_ghz) {
    bp_geometry g = geom;
    g.pump_detuning_rad_s = d * 1e9 * kTwoPi;
    g.signal_angle_rad = ratio_angle_deg * kDegToRad;
    double dk = 0.0, f_at_ratio = 0.0;
    check(bp_delta_k_exact(&g, &dk));
    check(bp_phase_match_factor(dk, g.cell_length_m, &f_at_ratio));
    ratio_factors.push_back(f_at_ratio);
    json entry{{"detuning_ghz", d},
               {"delta_k_rad_m", dk},
               {"factor_at_ratio_angle", f_at_ratio}};
    if (find_optimum || d < 0.0) {
      double best_angle = 0.0, best_factor = 0.0;
      check(bp_optimal_signal_angle(&g, &best_angle, &best_factor));
      entry["optimal_angle_deg"] = best_angle / kDegToRad;
      entry["optimal_factor"] = best_factor;
    }
    per_detuning.push_back(entry);
  }
  summary["detunings"] = per_detuning;

  json ratios = json::array();
  for (std::size_t i = 0; i < detunings_ghz.size(); ++i)
    for (std::size_t j = 0; j < detunings_ghz.size(); ++j)
      if (i != j && ratio_factors[j] > 0.0)
        ratios.push_back({{"numerator_ghz", detunings_ghz[i]},
                          {"denominator_ghz", detunings_ghz[j]},
                          {"factor_ratio", ratio_factors[i] / ratio_factors[j]}});
  summary["factor_ratios_at_ratio_angle"] = ratios;

  emit_json(common.out_path("phasematch.json"), summary);
  return 0;
}

int cmd_simulate(const CommonOpts& common, const std::string& kind,
                 const std::string& preset, double duration,
                 double indistinguishability, const std::string& out_file) {
  const json file_cfg = common.config();
  json src_a = file_cfg.contains("source") && file_cfg["source"].contains("a")
                   ? file_cfg["source"]["a"]
                   : json::object();
  json src_b = file_cfg.contains("source") && file_cfg["source"].contains("b")
                   ? file_cfg["source"]["b"]
                   : src_a;
  if (!preset.empty()) {
    src_a["preset"] = preset;
    if (!src_b.contains("preset")) src_b["preset"] = preset;
  }

  bp_source_config cfg_a = source_from_json(src_a);
  bp_source_config cfg_b = source_from_json(src_b);
  if (duration > 0.0) cfg_a.duration_s = cfg_b.duration_s = duration;

  std::optional<std::uint64_t> seed = common.seed;
  if (!seed && src_a.contains("seed")) seed = cfg_a.seed;
  if (!seed) seed = env_seed();
  if (!seed) throw CliError{2, "simulate: a seed is required (--seed, config, or BIPHOTON_SEED)"};
  cfg_a.seed = *seed;
  if (!src_b.contains("seed")) cfg_b.seed = *seed + 1;

  StreamHandle stream;
  if (kind == "pairs") {
    check(bp_simulate_pairs(&cfg_a, &stream.ptr));
  } else if (kind == "hom") {
    check(bp_simulate_hom(&cfg_a, &cfg_b, indistinguishability, *seed ^ 0x4d4f48ULL,
                          &stream.ptr));
  } else if (kind == "autocorr") {
    check(bp_simulate_heralded_autocorr(&cfg_a, *seed ^ 0x535054ULL, &stream.ptr));
  } else {
    throw CliError{2, "simulate: unknown kind '" + kind + "'"};
  }

  uint64_t bytes = 0;
  check(bp_stream_write(stream.ptr, out_file.c_str(), &bytes));

  json summary{{"command", "simulate"},
               {"kind", kind},
               {"output", out_file},
               {"bytes", bytes},
               {"tags", bp_stream_count(stream.ptr)},
               {"config", {{"source_a", source_to_json(cfg_a)}}}};
  if (kind == "hom") {
    summary["config"]["source_b"] = source_to_json(cfg_b);
    summary["config"]["indistinguishability"] = indistinguishability;
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct AnalysisOpts {
  int idler_ch = BP_CH_IDLER_A;
  int signal_ch = BP_CH_SIGNAL_A;
  std::uint64_t bin_ps = 100;
  double tau_min_ns = -5.0;
  double tau_max_ns = 15.0;
  double window_ns = 3.5;
  double window_offset_ns = 0.0;
  double duration_s = 0.0;
  unsigned threads = 1;
};

int cmd_g2(const CommonOpts& common, const std::string& file, const AnalysisOpts& a) {
  StreamHandle stream = load_stream(file);
  HistHandle hist;
  check(bp_g2_cross(stream.ptr, static_cast<uint8_t>(a.idler_ch),
                    static_cast<uint8_t>(a.signal_ch), a.bin_ps,
                    static_cast<int64_t>(std::llround(a.tau_min_ns * 1e3)),
                    static_cast<int64_t>(std::llround(a.tau_max_ns * 1e3)),
                    a.duration_s, a.threads, &hist.ptr));

  std::ostringstream csv;
  csv << "tau_ps,counts,g2\n";
  for (std::size_t i = 0; i < bp_histogram_bins(hist.ptr); ++i)
    csv << bp_histogram_tau_ps(hist.ptr, i) << "," << bp_histogram_counts(hist.ptr, i)
        << "," << fmt9(bp_histogram_g2(hist.ptr, i)) << "\n";
  write_text_file(common.out_path("g2.csv"), csv.str());

  int64_t peak_tau = 0;
  double peak_g2 = 0.0;
  uint64_t peak_counts = 0;
  check(bp_g2_peak(hist.ptr, &peak_tau, &peak_g2, &peak_counts));
  double mean = 0.0;
  for (std::size_t i = 0; i < bp_histogram_bins(hist.ptr); ++i)
    mean += bp_histogram_g2(hist.ptr, i);
  mean /= static_cast<double>(bp_histogram_bins(hist.ptr));

  emit_json(common.out_path("g2.json"),
            json{{"command", "g2"},
                 {"input", file},
                 {"peak", {{"tau_ps", peak_tau}, {"g2", peak_g2}, {"counts", peak_counts}}},
                 {"mean_g2", mean},
                 {"config",
                  {{"idler_ch", a.idler_ch},
                   {"signal_ch", a.signal_ch},
                   {"bin_ps", a.bin_ps},
                   {"tau_min_ns", a.tau_min_ns},
                   {"tau_max_ns", a.tau_max_ns},
                   {"duration_s", a.duration_s},
                   {"threads", a.threads}}}});
  return 0;
}

int cmd_herald(const CommonOpts& common, const std::string& file, const AnalysisOpts& a) {
  StreamHandle stream = load_stream(file);
  bp_herald_stats stats{};
  check(bp_heralding_efficiency(stream.ptr, static_cast<uint8_t>(a.idler_ch),
                                static_cast<uint8_t>(a.signal_ch),
                                static_cast<int64_t>(std::llround(a.window_offset_ns * 1e3)),
                                static_cast<uint64_t>(std::llround(a.window_ns * 1e3)),
                                a.duration_s, &stats));
  if (stats.window_warning)
    std::cerr << "warning: accidental-corrected heralding efficiency was negative; "
                 "check the window placement\n";
  emit_json(common.out_path("herald.json"),
            json{{"command", "herald"},
                 {"input", file},
                 {"eta_h", stats.eta_h},
                 {"eta_h_raw", stats.eta_h_raw},
                 {"accidental_per_idler", stats.accidental},
                 {"pair_rate_hz", stats.pair_rate_hz},
                 {"n_idler", stats.n_idler},
                 {"n_signal", stats.n_signal},
                 {"matched", stats.matched},
                 {"config",
                  {{"idler_ch", a.idler_ch},
                   {"signal_ch", a.signal_ch},
                   {"window_ns", a.window_ns},
                   {"window_offset_ns", a.window_offset_ns},
                   {"duration_s", a.duration_s}}}});
  return 0;
}

int cmd_autocorr(const CommonOpts& common, const std::string& file, const AnalysisOpts& a,
                 int t_ch, int r_ch) {
  StreamHandle stream = load_stream(file);
  bp_conditioned_g2 res{};
  check(bp_heralded_g2c(stream.ptr, static_cast<uint8_t>(a.idler_ch),
                        static_cast<uint8_t>(t_ch), static_cast<uint8_t>(r_ch),
                        static_cast<int64_t>(std::llround(a.window_offset_ns * 1e3)),
                        static_cast<uint64_t>(std::llround(a.window_ns * 1e3)), &res));
  emit_json(common.out_path("autocorr.json"),
            json{{"command", "autocorr"},
                 {"input", file},
                 {"g2c", res.g2c},
                 {"n_idler", res.n_idler},
                 {"n_it", res.n_it},
                 {"n_ir", res.n_ir},
                 {"n_itr", res.n_itr},
                 {"config",
                  {{"idler_ch", a.idler_ch},
                   {"t_ch", t_ch},
                   {"r_ch", r_ch},
                   {"window_ns", a.window_ns},
                   {"window_offset_ns", a.window_offset_ns}}}});
  return 0;
}

int cmd_hom(const CommonOpts& common, const std::string& file, const AnalysisOpts& a,
            int idler_b, int out1, int out2, std::uint64_t delay_bin_ps,
            double delay_range_ns, double baseline_min_ns) {
  StreamHandle stream = load_stream(file);
  HomHandle prof;
  check(bp_hom_profile(stream.ptr, static_cast<uint8_t>(a.idler_ch),
                       static_cast<uint8_t>(idler_b), static_cast<uint8_t>(out1),
                       static_cast<uint8_t>(out2),
                       static_cast<int64_t>(std::llround(a.window_offset_ns * 1e3)),
                       static_cast<uint64_t>(std::llround(a.window_ns * 1e3)),
                       delay_bin_ps,
                       static_cast<uint64_t>(std::llround(delay_range_ns * 1e3)),
                       static_cast<uint64_t>(std::llround(baseline_min_ns * 1e3)),
                       &prof.ptr));

  std::ostringstream csv;
  csv << "herald_dt_ps,coincidences\n";
  for (std::size_t i = 0; i < bp_hom_result_bins(prof.ptr); ++i)
    csv << bp_hom_result_delay_ps(prof.ptr, i) << ","
        << bp_hom_result_counts(prof.ptr, i) << "\n";
  write_text_file(common.out_path("hom.csv"), csv.str());

  emit_json(common.out_path("hom.json"),
            json{{"command", "hom"},
                 {"input", file},
                 {"visibility", bp_hom_result_visibility(prof.ptr)},
                 {"baseline", bp_hom_result_baseline(prof.ptr)},
                 {"config",
                  {{"idler_a", a.idler_ch},
                   {"idler_b", idler_b},
                   {"out1", out1},
                   {"out2", out2},
                   {"window_ns", a.window_ns},
                   {"window_offset_ns", a.window_offset_ns},
                   {"delay_bin_ps", delay_bin_ps},
                   {"delay_range_ns", delay_range_ns},
                   {"baseline_min_ns", baseline_min_ns}}}});
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&failures](const char* name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    failures += !ok;
  };

  bp_geometry geom = bp_geometry_default();
  geom.signal_angle_rad = 1.4 * kDegToRad;

  auto factor_at = [&geom](double ghz) {
    bp_geometry g = geom;
    g.pump_detuning_rad_s = ghz * 1e9 * kTwoPi;
    double dk = 0.0, f = 0.0;
    check(bp_delta_k_exact(&g, &dk));
    check(bp_phase_match_factor(dk, g.cell_length_m, &f));
    return f;
  };
  const double r1 = factor_at(-1.1) / factor_at(1.0);
  const double r2 = factor_at(-1.1) / factor_at(1.1);
  report("phase-matching ratio -1.1/+1.0 in [1.09,1.13]", r1 > 1.09 && r1 < 1.13);
  report("phase-matching ratio -1.1/+1.1 in [1.12,1.16]", r2 > 1.12 && r2 < 1.16);

  bp_geometry gneg = geom;
  gneg.pump_detuning_rad_s = -1.1e9 * kTwoPi;
  double best_angle = 0.0, best_factor = 0.0;
  check(bp_optimal_signal_angle(&gneg, &best_angle, &best_factor));
  report("optimal angle near 2.7 deg with factor ~1",
         std::abs(best_angle / kDegToRad - 2.708) < 0.01 && best_factor > 1.0 - 1e-9);

  bp_temporal_mode mode{0.15e-9, 1.0e-9};
  double frac = 0.0;
  check(bp_energy_fraction(&mode, 3.5e-9, &frac));
  report("default mode captures >= 95% in 3.5 ns", frac >= 0.95);

  bp_source_config cfg{};
  check(bp_preset_config("ideal", &cfg));
  cfg.duration_s = 0.05;
  cfg.seed = 42;
  StreamHandle s1, s2;
  check(bp_simulate_pairs(&cfg, &s1.ptr));
  check(bp_simulate_pairs(&cfg, &s2.ptr));
  bool identical = bp_stream_count(s1.ptr) == bp_stream_count(s2.ptr) &&
                   bp_stream_count(s1.ptr) > 0;
  if (identical) {
    const uint64_t n = bp_stream_count(s1.ptr);
    std::vector<uint64_t> t1(n), t2(n);
    std::vector<uint8_t> c1(n), c2(n);
    check(bp_stream_tags(s1.ptr, c1.data(), t1.data()));
    check(bp_stream_tags(s2.ptr, c2.data(), t2.data()));
    identical = t1 == t2 && c1 == c2;
  }
  report("simulation deterministic for fixed seed", identical);

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biphoton source simulator and correlation toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("-c,--config", common.config_path, "TOML or JSON run configuration");
  app.add_option("-d,--output-dir", common.output_dir, "directory for result files");
  std::uint64_t seed_flag = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "simulation seed");

  // phasematch
  auto* pm = app.add_subcommand("phasematch", "phase-matching scan and optimum");
  std::string theta_grid = "0:3:0.01";
  std::string detuning_list = "-1.1,1.0";
  double lambda_sp_nm = 0.0, lambda_pd_nm = 0.0, cell_mm = 0.0, ratio_angle = 1.4;
  bool find_optimum = false;
  pm->add_option("--theta", theta_grid, "signal angle grid in deg (start:stop:step)");
  pm->add_option("--detuning", detuning_list, "pump detunings in GHz (comma list)");
  pm->add_option("--lambda-sp-nm", lambda_sp_nm, "lower transition wavelength [nm]");
  pm->add_option("--lambda-pd-nm", lambda_pd_nm, "upper transition wavelength [nm]");
  pm->add_option("--cell-mm", cell_mm, "vapor cell length [mm]");
  pm->add_option("--ratio-angle-deg", ratio_angle, "angle for factor ratios [deg]");
  pm->add_flag("--find-optimum", find_optimum, "report the optimal angle per detuning");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a detector tag stream (.bpl)");
  std::string sim_kind = "pairs", sim_preset, sim_out = "stream.bpl";
  double sim_duration = 0.0, indist = 1.0;
  sim->add_option("--kind", sim_kind, "pairs | hom | autocorr");
  sim->add_option("--preset", sim_preset, "ideal | paper-2023 | paper-2021");
  sim->add_option("--duration", sim_duration, "override duration [s]");
  sim->add_option("--indistinguishability", indist, "HOM mode-match factor [0,1]");
  sim->add_option("-o,--out", sim_out, "output .bpl path");

  // analysis commands share options
  AnalysisOpts an;
  std::string in_file;
  int t_ch = BP_CH_SPLIT_T, r_ch = BP_CH_SPLIT_R, idler_b = BP_CH_IDLER_B;
  std::uint64_t delay_bin_ps = 100;
  double delay_range_ns = 20.0, baseline_min_ns = 5.0;

  auto add_common_analysis = [&](CLI::App* cmd, bool with_window) {
    cmd->add_option("file", in_file, "input .bpl (or .csv) tag stream")->required();
    cmd->add_option("--idler-ch", an.idler_ch, "idler channel id");
    cmd->add_option("--duration", an.duration_s, "acquisition duration [s], 0 = derive");
    if (with_window) {
      cmd->add_option("--window-ns", an.window_ns, "herald window width [ns]");
      cmd->add_option("--window-offset-ns", an.window_offset_ns, "herald window offset [ns]");
    }
  };

  auto* g2cmd = app.add_subcommand("g2", "signal-idler cross-correlation histogram");
  add_common_analysis(g2cmd, false);
  g2cmd->add_option("--signal-ch", an.signal_ch, "signal channel id");
  g2cmd->add_option("--bin-ps", an.bin_ps, "histogram bin width [ps]");
  g2cmd->add_option("--tau-min-ns", an.tau_min_ns, "histogram lower edge [ns]");
  g2cmd->add_option("--tau-max-ns", an.tau_max_ns, "histogram upper edge [ns]");
  g2cmd->add_option("--threads", an.threads, "worker count (result is independent of it)");

  auto* herald = app.add_subcommand("herald", "heralding efficiency and pair rate");
  add_common_analysis(herald, true);
  herald->add_option("--signal-ch", an.signal_ch, "signal channel id");

  auto* autoc = app.add_subcommand("autocorr", "heralded signal auto-correlation g2c(0)");
  add_common_analysis(autoc, true);
  autoc->add_option("--t-ch", t_ch, "transmitted-arm channel id");
  autoc->add_option("--r-ch", r_ch, "reflected-arm channel id");

  auto* hom = app.add_subcommand("hom", "HOM coincidences vs herald time difference");
  add_common_analysis(hom, true);
  hom->add_option("--idler-b", idler_b, "second source idler channel id");
  hom->add_option("--out1", t_ch, "beam splitter output 1 channel id");
  hom->add_option("--out2", r_ch, "beam splitter output 2 channel id");
  hom->add_option("--delay-bin-ps", delay_bin_ps, "herald dt bin width [ps]");
  hom->add_option("--delay-range-ns", delay_range_ns, "max |herald dt| [ns]");
  hom->add_option("--baseline-min-ns", baseline_min_ns, "wing region for the baseline [ns]");

  app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (seed_opt->count() > 0) common.seed = seed_flag;

  try {
    if (app.got_subcommand("phasematch"))
      return cmd_phasematch(common, theta_grid, detuning_list, lambda_sp_nm,
                            lambda_pd_nm, cell_mm, ratio_angle, find_optimum);
    if (app.got_subcommand("simulate"))
      return cmd_simulate(common, sim_kind, sim_preset, sim_duration, indist, sim_out);
    if (app.got_subcommand("g2")) return cmd_g2(common, in_file, an);
    if (app.got_subcommand("herald")) return cmd_herald(common, in_file, an);
    if (app.got_subcommand("autocorr"))
      return cmd_autocorr(common, in_file, an, t_ch, r_ch);
    if (app.got_subcommand("hom"))
      return cmd_hom(common, in_file, an, idler_b, t_ch, r_ch, delay_bin_ps,
                     delay_range_ns, baseline_min_ns);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
