#ifndef BP_TEST_ORACLES_HPP
#define BP_TEST_ORACLES_HPP

// Brute-force counters used as independent oracles. Everything here is
// deliberately quadratic/cubic and kept free of the sliding-window code
// paths under test.

#include <cstdint>
#include <vector>

#include "correlate.hpp"
#include "tagstream.hpp"

namespace bp::oracle {

// O(N^2) pair counting into tau bins, tau = t_signal - t_idler.
inline std::vector<std::uint64_t> pair_histogram(
    const std::vector<std::uint64_t>& idler, const std::vector<std::uint64_t>& signal,
    std::uint64_t bin_width_ps, std::int64_t tau_min_ps, std::size_t n_bins) {
  std::vector<std::uint64_t> counts(n_bins, 0);
  const std::int64_t span =
      static_cast<std::int64_t>(n_bins) * static_cast<std::int64_t>(bin_width_ps);
  for (std::uint64_t ti : idler)
    for (std::uint64_t ts : signal) {
      const std::int64_t tau =
          static_cast<std::int64_t>(ts) - static_cast<std::int64_t>(ti);
      if (tau < tau_min_ps || tau >= tau_min_ps + span) continue;
      ++counts[static_cast<std::size_t>((tau - tau_min_ps) /
                                        static_cast<std::int64_t>(bin_width_ps))];
    }
  return counts;
}

inline bool in_window(std::uint64_t herald, std::uint64_t tag, std::int64_t offset,
                      std::uint64_t width) {
  const std::int64_t lo = static_cast<std::int64_t>(herald) + offset;
  const std::int64_t t = static_cast<std::int64_t>(tag);
  return t >= lo && t < lo + static_cast<std::int64_t>(width);
}

// Idlers heralding at least one in-window signal, by scanning every pair.
inline std::uint64_t matched_idlers(const std::vector<std::uint64_t>& idler,
                                    const std::vector<std::uint64_t>& signal,
                                    std::int64_t offset, std::uint64_t width) {
  std::uint64_t matched = 0;
  for (std::uint64_t ti : idler)
    for (std::uint64_t ts : signal)
      if (in_window(ti, ts, offset, width)) {
        ++matched;
        break;
      }
  return matched;
}

// Exhaustive three-fold coincidence counts for the conditioned g2.
struct TripleCounts {
  std::uint64_t n_it = 0, n_ir = 0, n_itr = 0;
};
inline TripleCounts triple_counts(const std::vector<std::uint64_t>& idler,
                                  const std::vector<std::uint64_t>& arm_t,
                                  const std::vector<std::uint64_t>& arm_r,
                                  std::int64_t offset, std::uint64_t width) {
  TripleCounts c;
  for (std::uint64_t ti : idler) {
    bool hit_t = false, hit_r = false;
    for (std::uint64_t ts : arm_t)
      if (in_window(ti, ts, offset, width)) {
        hit_t = true;
        break;
      }
    for (std::uint64_t ts : arm_r)
      if (in_window(ti, ts, offset, width)) {
        hit_r = true;
        break;
      }
    c.n_it += hit_t;
    c.n_ir += hit_r;
    c.n_itr += hit_t && hit_r;
  }
  return c;
}

// HOM binning by herald time difference, every (A,B) herald pair scanned.
inline std::vector<std::uint64_t> hom_counts(
    const std::vector<std::uint64_t>& idler_a, const std::vector<std::uint64_t>& idler_b,
    const std::vector<std::uint64_t>& out1, const std::vector<std::uint64_t>& out2,
    std::int64_t offset, std::uint64_t width, std::uint64_t delay_bin_ps,
    std::int64_t n_side) {
  const std::int64_t bw = static_cast<std::int64_t>(delay_bin_ps);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(2 * n_side + 1), 0);
  auto any_in = [&](const std::vector<std::uint64_t>& tags, std::uint64_t ta,
                    std::uint64_t tb) {
    for (std::uint64_t t : tags)
      if (in_window(ta, t, offset, width) || in_window(tb, t, offset, width))
        return true;
    return false;
  };
  for (std::uint64_t ta : idler_a)
    for (std::uint64_t tb : idler_b) {
      const std::int64_t dt =
          static_cast<std::int64_t>(tb) - static_cast<std::int64_t>(ta);
      const std::int64_t mag = dt >= 0 ? dt : -dt;
      const std::int64_t bin =
          n_side + ((2 * mag + bw) / (2 * bw)) * (dt >= 0 ? 1 : -1);
      if (bin < 0 || bin >= static_cast<std::int64_t>(counts.size())) continue;
      if (any_in(out1, ta, tb) && any_in(out2, ta, tb))
        ++counts[static_cast<std::size_t>(bin)];
    }
  return counts;
}

}  // namespace bp::oracle

#endif
