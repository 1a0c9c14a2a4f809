#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <biphoton.h>

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const char* name) {
    path = std::string("capi_test_") + name + ".tmp";
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("geometry default and phase matching round trip") {
  const bp_geometry g = bp_geometry_default();
  CHECK(g.lambda_sp_m == doctest::Approx(780e-9));
  CHECK(g.lambda_pd_m == doctest::Approx(776e-9));
  CHECK(g.cell_length_m == doctest::Approx(25e-3));
  CHECK(g.pump_detuning_rad_s == 0.0);
  CHECK(g.signal_angle_rad == 0.0);

  double dk = -1.0;
  REQUIRE(bp_delta_k_exact(&g, &dk) == BP_OK);
  CHECK(dk == doctest::Approx(0.0).epsilon(1e-15));

  bp_geometry tilted = g;
  tilted.signal_angle_rad = 1.4 * 3.14159265358979323846 / 180.0;
  tilted.pump_detuning_rad_s = -2.0 * 3.14159265358979323846 * 1.1e9;
  REQUIRE(bp_delta_k_exact(&tilted, &dk) == BP_OK);
  CHECK(std::abs(dk - (-33.77847993151542)) < 1e-6);

  double factor = 0.0;
  REQUIRE(bp_phase_match_factor(dk, tilted.cell_length_m, &factor) == BP_OK);
  CHECK(factor > 0.0);
  CHECK(factor < 1.0);

  double angle = 0.0, best = 0.0;
  REQUIRE(bp_optimal_signal_angle(&tilted, &angle, &best) == BP_OK);
  CHECK(angle == doctest::Approx(0.04726081926883540).epsilon(1e-9));
  CHECK(best > 1.0 - 1e-9);

  double idler = 0.0;
  REQUIRE(bp_idler_angle(&g, 0.01, &idler) == BP_OK);
  CHECK(idler == doctest::Approx(0.01 * 776.0 / 780.0).epsilon(1e-12));
}

TEST_CASE("scan layout: detunings vary slowest") {
  const bp_geometry g = bp_geometry_default();
  const double thetas[2] = {0.0, 0.02};
  const double detunings[3] = {-6.9e9, 0.0, 6.3e9};
  double factors[6] = {0};
  REQUIRE(bp_scan_phase_matching(&g, thetas, 2, detunings, 3, factors) == BP_OK);
  for (size_t d = 0; d < 3; ++d)
    for (size_t t = 0; t < 2; ++t) {
      bp_geometry p = g;
      p.signal_angle_rad = thetas[t];
      p.pump_detuning_rad_s = detunings[d];
      double dk = 0.0, f = 0.0;
      REQUIRE(bp_delta_k_exact(&p, &dk) == BP_OK);
      REQUIRE(bp_phase_match_factor(dk, p.cell_length_m, &f) == BP_OK);
      CHECK(factors[d * 2 + t] == f);
    }
}

TEST_CASE("temporal mode entry points") {
  const bp_temporal_mode mode{0.15e-9, 1.0e-9};
  double out = 0.0;
  REQUIRE(bp_energy_fraction(&mode, 3.5e-9, &out) == BP_OK);
  CHECK(out == doctest::Approx(0.9985485615791620).epsilon(1e-12));
  REQUIRE(bp_mode_overlap(&mode, &mode, 1e-9, &out) == BP_OK);
  CHECK(out == doctest::Approx(0.4325747601191075).epsilon(1e-6));
  REQUIRE(bp_hom_coincidence_probability(&mode, &mode, 0.0, &out) == BP_OK);
  CHECK(out == doctest::Approx(0.0).epsilon(1e-12));

  const bp_temporal_mode bad{1.0e-9, 0.5e-9};
  CHECK(bp_energy_fraction(&bad, 1e-9, &out) == BP_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(bp_last_error()) > 0);
}

TEST_CASE("null arguments are invalid, not fatal") {
  double out = 0.0;
  const bp_geometry g = bp_geometry_default();
  CHECK(bp_delta_k_exact(nullptr, &out) == BP_ERR_INVALID_ARGUMENT);
  CHECK(bp_delta_k_exact(&g, nullptr) == BP_ERR_INVALID_ARGUMENT);
  CHECK(bp_stream_read(nullptr, nullptr) == BP_ERR_INVALID_ARGUMENT);
  CHECK(bp_simulate_pairs(nullptr, nullptr) == BP_ERR_INVALID_ARGUMENT);
  CHECK(bp_histogram_bins(nullptr) == 0);
  CHECK(bp_stream_count(nullptr) == 0);
  bp_stream_free(nullptr);
  bp_histogram_free(nullptr);
  bp_hom_result_free(nullptr);
}

TEST_CASE("presets") {
  bp_source_config c;
  REQUIRE(bp_preset_config("ideal", &c) == BP_OK);
  CHECK(c.signal_transmission == 1.0);
  CHECK(c.jitter_fwhm_s == 0.0);

  REQUIRE(bp_preset_config("paper-2023", &c) == BP_OK);
  CHECK(c.pair_rate_hz > 1e6);
  CHECK(c.signal_transmission < 1.0);
  CHECK(c.jitter_fwhm_s == doctest::Approx(55e-12));

  bp_source_config c21;
  REQUIRE(bp_preset_config("paper-2021", &c21) == BP_OK);
  CHECK(c21.jitter_fwhm_s == doctest::Approx(350e-12));
  CHECK(c21.signal_transmission < c.signal_transmission);

  CHECK(bp_preset_config("nonsense", &c) == BP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("simulate, analyze and file round trip through the C surface") {
  bp_source_config c;
  REQUIRE(bp_preset_config("ideal", &c) == BP_OK);
  c.pair_rate_hz = 3e4;
  c.duration_s = 2.0;
  c.seed = 2024;

  bp_stream* stream = nullptr;
  REQUIRE(bp_simulate_pairs(&c, &stream) == BP_OK);
  REQUIRE(stream != nullptr);
  const uint64_t n = bp_stream_count(stream);
  CHECK(n > 100000);

  std::vector<uint8_t> channels(n);
  std::vector<uint64_t> times(n);
  REQUIRE(bp_stream_tags(stream, channels.data(), times.data()) == BP_OK);
  for (uint64_t i = 1; i < n; ++i) CHECK(times[i] >= times[i - 1]);

  TempFile file("roundtrip");
  uint64_t bytes = 0;
  REQUIRE(bp_stream_write(stream, file.path.c_str(), &bytes) == BP_OK);
  CHECK(bytes == 16 + 9 * n);

  bp_stream* back = nullptr;
  REQUIRE(bp_stream_read(file.path.c_str(), &back) == BP_OK);
  REQUIRE(bp_stream_count(back) == n);
  std::vector<uint64_t> times2(n);
  REQUIRE(bp_stream_tags(back, nullptr, times2.data()) == BP_OK);
  CHECK(times2 == times);

  bp_histogram* hist = nullptr;
  REQUIRE(bp_g2_cross(back, BP_CH_IDLER_A, BP_CH_SIGNAL_A, 100, -5000, 5000,
                      c.duration_s, 2, &hist) == BP_OK);
  REQUIRE(bp_histogram_bins(hist) == 100);
  int64_t tau = 0;
  double g2max = 0.0;
  uint64_t peak_counts = 0;
  REQUIRE(bp_g2_peak(hist, &tau, &g2max, &peak_counts) == BP_OK);
  CHECK(g2max > 100.0);  // lossless ideal source is strongly correlated
  CHECK(tau >= 0);
  CHECK(bp_histogram_counts(hist, 0) <= peak_counts);
  CHECK(bp_histogram_tau_ps(hist, 0) == -5000 + 50);

  bp_herald_stats stats;
  REQUIRE(bp_heralding_efficiency(back, BP_CH_IDLER_A, BP_CH_SIGNAL_A, -100, 3500,
                                  c.duration_s, &stats) == BP_OK);
  CHECK(stats.eta_h == doctest::Approx(1.0).epsilon(0.01));
  CHECK(stats.window_warning == 0);

  bp_histogram_free(hist);
  bp_stream_free(back);
  bp_stream_free(stream);
}

TEST_CASE("autocorr and hom through the C surface") {
  bp_source_config c;
  REQUIRE(bp_preset_config("ideal", &c) == BP_OK);
  c.pair_rate_hz = 3e4;
  c.duration_s = 2.0;
  c.seed = 9;

  bp_stream* split = nullptr;
  REQUIRE(bp_simulate_heralded_autocorr(&c, 4, &split) == BP_OK);
  bp_conditioned_g2 g;
  REQUIRE(bp_heralded_g2c(split, BP_CH_IDLER_A, BP_CH_SPLIT_T, BP_CH_SPLIT_R, -100,
                          3500, &g) == BP_OK);
  CHECK(g.g2c < 0.1);  // ideal heralded source antibunches
  CHECK(g.n_it + g.n_ir >= g.n_itr);
  bp_stream_free(split);

  bp_source_config b = c;
  b.seed = 10;
  bp_stream* hom = nullptr;
  REQUIRE(bp_simulate_hom(&c, &b, 1.0, 3, &hom) == BP_OK);
  bp_hom_result* prof = nullptr;
  REQUIRE(bp_hom_profile(hom, BP_CH_IDLER_A, BP_CH_IDLER_B, BP_CH_SPLIT_T,
                         BP_CH_SPLIT_R, -100, 3500, 10000, 200000, 100000,
                         &prof) == BP_OK);
  REQUIRE(bp_hom_result_bins(prof) == 41);
  CHECK(bp_hom_result_delay_ps(prof, 20) == 0);
  // 10 ns delay bins average the overlap far from zero: expect a shallow
  // but positive dip
  CHECK(bp_hom_result_visibility(prof) > 0.0);
  CHECK(bp_hom_result_visibility(prof) < 1.0);
  CHECK(bp_hom_result_baseline(prof) > 0.0);
  bp_hom_result_free(prof);
  bp_stream_free(hom);
}

TEST_CASE("merge and csv import through the C surface") {
  TempFile csv("import");
  {
    std::ofstream out(csv.path);
    out << "channel,timestamp_ps\n0,100\n1,50\n";
  }
  bp_stream* a = nullptr;
  REQUIRE(bp_stream_import_csv(csv.path.c_str(), &a) == BP_OK);
  REQUIRE(bp_stream_count(a) == 2);

  const bp_stream* inputs[2] = {a, a};
  bp_stream* merged = nullptr;
  REQUIRE(bp_stream_merge(inputs, 2, &merged) == BP_OK);
  CHECK(bp_stream_count(merged) == 4);
  bp_stream_free(merged);
  bp_stream_free(a);
}

TEST_CASE("error codes map faults distinctly") {
  bp_stream* out = nullptr;
  CHECK(bp_stream_read("no_such_file_anywhere.bpl", &out) == BP_ERR_IO);
  CHECK(out == nullptr);

  TempFile garbage("garbage");
  {
    std::ofstream f(garbage.path, std::ios::binary);
    f << "NOTBPL__________________";
  }
  CHECK(bp_stream_read(garbage.path.c_str(), &out) == BP_ERR_PARSE);
  CHECK(std::strlen(bp_last_error()) > 0);

  bp_source_config c;
  REQUIRE(bp_preset_config("ideal", &c) == BP_OK);
  c.pair_rate_hz = 1e12;
  c.duration_s = 1e6;
  CHECK(bp_simulate_pairs(&c, &out) == BP_ERR_RESOURCE_LIMIT);

  // analysis fault: empty stream
  bp_stream* empty = nullptr;
  {
    TempFile f("empty");
    std::ofstream o(f.path, std::ios::binary);
    const char header[16] = {'B', 'P', 'L', '1', 1, 0};
    o.write(header, 16);
    o.close();
    REQUIRE(bp_stream_read(f.path.c_str(), &empty) == BP_OK);
  }
  bp_histogram* hist = nullptr;
  CHECK(bp_g2_cross(empty, 0, 1, 100, -1000, 1000, 0.0, 1, &hist) ==
        BP_ERR_ANALYSIS);
  bp_stream_free(empty);
}
