#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "constants.hpp"
#include "phasematch.hpp"
#include "rng.hpp"

using namespace bp;

namespace {

OpticalGeometry geom_at(double theta_deg, double detuning_ghz) {
  OpticalGeometry g;
  g.signal_angle = theta_deg * kPi / 180.0;
  g.pump_detuning = kTwoPi * detuning_ghz * 1e9;
  return g;
}

}  // namespace

TEST_CASE("delta_k_exact reference points") {
  // collinear resonant case is exactly phase matched
  CHECK(delta_k_exact(geom_at(0.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));

  // frozen quad-precision evaluations of the mismatch formula; the double
  // evaluation cancels ~1e7-scale wavevectors, so ~1e-9 absolute is the
  // attainable agreement
  CHECK(std::abs(delta_k_exact(geom_at(1.4, -1.1)) - (-33.77847993151542)) < 1e-6);
  CHECK(std::abs(delta_k_exact(geom_at(1.4, 1.0)) - 54.24701099045522) < 1e-6);
}

TEST_CASE("delta_k_small_angle limits and agreement") {
  OpticalGeometry g = geom_at(0.0, -1.1);
  CHECK(delta_k_small_angle(g) ==
        doctest::Approx(2.0 * g.pump_detuning / kSpeedOfLight).epsilon(1e-15));

  // positive for any angle at zero detuning (omega_sp < omega_pd)
  for (double deg : {0.1, 0.5, 1.0, 2.0, 5.0})
    CHECK(delta_k_small_angle(geom_at(deg, 0.0)) > 0.0);

  // within 1% of the exact expression at the collection angle
  const double exact = delta_k_exact(geom_at(1.4, -1.1));
  const double approx = delta_k_small_angle(geom_at(1.4, -1.1));
  CHECK(std::abs(approx - exact) / std::abs(exact) < 0.01);
}

TEST_CASE("small-angle agreement up to 3 degrees") {
  // delta_k can pass through zero, so judge the approximation against the
  // magnitude of its ingredient terms rather than the (cancelling) result
  for (double deg = 0.05; deg <= 3.0; deg += 0.05) {
    for (double ghz : {-2.0, -1.1, 0.7, 1.5}) {
      const OpticalGeometry g = geom_at(deg, ghz);
      const double exact = delta_k_exact(g);
      const double approx = delta_k_small_angle(g);
      const double angular = 0.5 * g.signal_angle * g.signal_angle * g.omega_sp() *
                             (1.0 - g.omega_sp() / g.omega_pd()) / kSpeedOfLight;
      const double scale = std::abs(2.0 * g.pump_detuning / kSpeedOfLight) + angular;
      CHECK(std::abs(approx - exact) <= 1e-3 * scale + 1e-12);
    }
  }
}

TEST_CASE("phase_match_factor basics") {
  CHECK(phase_match_factor(0.0, 0.025) == 1.0);
  // first sinc zero at dk L / 2 = pi
  const double dk = 2.0 * kPi / 0.025;
  CHECK(phase_match_factor(dk, 0.025) == doctest::Approx(0.0).epsilon(1e-25));
  // series branch continuous with the direct branch
  const double left = phase_match_factor(0.99e-4 * 2 / 0.025, 0.025);
  const double right = phase_match_factor(1.01e-4 * 2 / 0.025, 0.025);
  CHECK(left == doctest::Approx(right).epsilon(1e-8));
}

TEST_CASE("reported factor ratios at the collection angle") {
  auto factor = [](double ghz) {
    const OpticalGeometry g = geom_at(1.4, ghz);
    return phase_match_factor(delta_k_exact(g), g.cell_length);
  };
  CHECK(factor(-1.1) / factor(1.0) == doctest::Approx(1.1006536238626846).epsilon(1e-8));
  CHECK(factor(-1.1) / factor(1.1) == doctest::Approx(1.1290320871099430).epsilon(1e-8));
}

TEST_CASE("optimal angle") {
  SUBCASE("zero detuning stays on axis") {
    const PhaseMatchResult r = optimal_signal_angle(geom_at(0.0, 0.0));
    CHECK(r.optimal_angle == 0.0);
    CHECK(r.factor == doctest::Approx(1.0));
  }
  SUBCASE("negative detuning reaches a perfect root") {
    const PhaseMatchResult r = optimal_signal_angle(geom_at(0.0, -1.1));
    CHECK(r.optimal_angle == doctest::Approx(0.04726081926883540).epsilon(1e-9));
    CHECK(r.optimal_angle * 180.0 / kPi == doctest::Approx(2.7078).epsilon(1e-4));
    CHECK(r.factor > 1.0 - 1e-9);
    // small-angle closed form lands close by
    const OpticalGeometry g = geom_at(0.0, -1.1);
    const double closed = std::sqrt(-4.0 * g.pump_detuning /
                                    (g.omega_sp() * (1.0 - g.omega_sp() / g.omega_pd())));
    CHECK(closed == doctest::Approx(r.optimal_angle).epsilon(5e-4));
  }
  SUBCASE("positive detuning pinned to zero with factor below 1") {
    const PhaseMatchResult r = optimal_signal_angle(geom_at(0.0, 1.0));
    CHECK(r.optimal_angle == 0.0);
    CHECK(r.factor < 1.0);
  }
}

TEST_CASE("idler angle ratio") {
  const OpticalGeometry g = geom_at(1.4, 0.0);
  CHECK(idler_angle(0.0, g) == 0.0);
  const double theta = 1.4 * kPi / 180.0;
  const double ratio = idler_angle(theta, g) / theta;
  CHECK(ratio == doctest::Approx(776.0 / 780.0).epsilon(1e-12));
  CHECK(1.0 - ratio == doctest::Approx(0.005128205).epsilon(1e-6));
  CHECK(idler_angle(2.0 * theta, g) == doctest::Approx(2.0 * idler_angle(theta, g)));
}

TEST_CASE("scan consistency and determinism") {
  OpticalGeometry g;
  const std::vector<double> thetas{0.0, 0.01, 0.0244};
  const std::vector<double> detunings{-kTwoPi * 1.1e9, kTwoPi * 1.0e9};

  const auto rows = scan_phase_matching(thetas, detunings, g);
  REQUIRE(rows.size() == 6);
  for (const ScanRow& row : rows) {
    OpticalGeometry p = g;
    p.signal_angle = row.theta;
    p.pump_detuning = row.detuning;
    CHECK(row.factor == phase_match_factor(delta_k_exact(p), p.cell_length));
  }

  // reordering the detuning list permutes but never changes per-row values
  const auto swapped = scan_phase_matching(thetas, {detunings[1], detunings[0]}, g);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    CHECK(rows[t].factor == swapped[thetas.size() + t].factor);
    CHECK(rows[thetas.size() + t].factor == swapped[t].factor);
  }

  CHECK_THROWS_AS(scan_phase_matching({}, detunings, g), std::invalid_argument);
  CHECK_THROWS_AS(scan_phase_matching(thetas, {}, g), std::invalid_argument);
}

TEST_CASE("properties over random geometry") {
  const CounterRng rng(20230815);
  for (std::uint64_t i = 0; i < 500; ++i) {
    const double theta = rng.uniform(0, i, 0) * 0.08;          // up to ~4.6 deg
    const double dp = (rng.uniform(0, i, 1) - 0.5) * kTwoPi * 6e9;  // +-3 GHz
    OpticalGeometry g;
    g.signal_angle = theta;
    g.pump_detuning = dp;

    // factor is even in delta_k and bounded by one
    const double dk = delta_k_exact(g);
    const double f = phase_match_factor(dk, g.cell_length);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(phase_match_factor(-dk, g.cell_length) == doctest::Approx(f).epsilon(1e-14));

    // positive detuning never phase-matches
    if (dp > 0.0) {
      CHECK(delta_k_small_angle(g) > 0.0);
      CHECK(f < 1.0);
    }
    // negative detuning always admits a root
    if (dp < 0.0) {
      const PhaseMatchResult r = optimal_signal_angle(g);
      CHECK(std::abs(r.delta_k) < 1e-6);
      CHECK(r.factor > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("geometry validation") {
  OpticalGeometry g;
  g.lambda_pd = 790e-9;  // violates lambda_sp > lambda_pd
  CHECK_THROWS_AS(delta_k_exact(g), std::invalid_argument);
  OpticalGeometry h;
  h.cell_length = 0.0;
  CHECK_THROWS_AS(delta_k_exact(h), std::invalid_argument);
  OpticalGeometry a;
  a.signal_angle = -0.1;
  CHECK_THROWS_AS(delta_k_exact(a), std::invalid_argument);
}
