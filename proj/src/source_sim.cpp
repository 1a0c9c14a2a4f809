#include "source_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "constants.hpp"
#include "rng.hpp"

namespace bp {

namespace {

// RNG stream ids
constexpr std::uint64_t kPairStream = 1;
constexpr std::uint64_t kSignalNoiseStream = 2;
constexpr std::uint64_t kIdlerNoiseStream = 3;
// per-pair slots
constexpr std::uint64_t kSlotTime = 0;
constexpr std::uint64_t kSlotDelay = 1;
constexpr std::uint64_t kSlotIdlerKeep = 2;
constexpr std::uint64_t kSlotSignalKeep = 3;
constexpr std::uint64_t kSlotIdlerJitter = 4;   // +5
constexpr std::uint64_t kSlotSignalJitter = 6;  // +7
// beam-splitter streams
constexpr std::uint64_t kBsPairStream = 10;
constexpr std::uint64_t kBsLoneStream = 11;

// Signals within this horizon of a partner are treated as overlapping at the
// beam splitter; beyond it the overlap is numerically zero anyway.
double pairing_horizon(const SourceConfig& a, const SourceConfig& b) {
  return 50.0 * std::max(a.mode.decay_time(), b.mode.decay_time());
}

struct PairEvent {
  double creation;   // s, pair creation = idler emission time
  double emission;   // s, signal emission time (creation + delay)
  bool idler_kept;
  bool signal_kept;
  double idler_jitter;   // sigma units
  double signal_jitter;
};

std::vector<PairEvent> draw_pairs(const SourceConfig& cfg) {
  const CounterRng rng(cfg.seed);
  const DelaySampler sampler(cfg.mode);
  const std::uint64_t n =
      rng.poisson(cfg.pair_rate * cfg.duration, kPairStream, ~0ULL, 0);
  std::vector<PairEvent> events(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    PairEvent& e = events[k];
    e.creation = rng.uniform(kPairStream, k, kSlotTime) * cfg.duration;
    e.emission = e.creation + sampler.invert(rng.uniform(kPairStream, k, kSlotDelay));
    e.idler_kept = rng.bernoulli(cfg.idler_transmission, kPairStream, k, kSlotIdlerKeep);
    e.signal_kept = rng.bernoulli(cfg.signal_transmission, kPairStream, k, kSlotSignalKeep);
    e.idler_jitter = rng.gaussian(kPairStream, k, kSlotIdlerJitter);
    e.signal_jitter = rng.gaussian(kPairStream, k, kSlotSignalJitter);
  }
  std::sort(events.begin(), events.end(),
            [](const PairEvent& a, const PairEvent& b) { return a.creation < b.creation; });
  return events;
}

struct NoiseTag {
  double t;
  double jitter;  // sigma units
  double route;   // uniform for splitter use
};

std::vector<NoiseTag> draw_noise(const SourceConfig& cfg, double rate,
                                 std::uint64_t stream) {
  const CounterRng rng(cfg.seed);
  const std::uint64_t n = rng.poisson(rate * cfg.duration, stream, ~0ULL, 0);
  std::vector<NoiseTag> tags(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    tags[k].t = rng.uniform(stream, k, 0) * cfg.duration;
    tags[k].jitter = rng.gaussian(stream, k, 1);
    tags[k].route = rng.uniform(stream, k, 3);
  }
  return tags;
}

// Sorts, rounds to ps, drops out-of-range tags and applies dead time.
void finalize_channel(std::vector<double>& times, std::uint8_t channel,
                      double dead_time, double duration,
                      std::vector<TimeTag>& out) {
  std::sort(times.begin(), times.end());
  const double duration_ps = duration * 1e12;
  const std::int64_t dead_ps = std::llround(dead_time * 1e12);
  std::int64_t last_kept = std::numeric_limits<std::int64_t>::min() / 2;
  for (double t : times) {
    const double tps = t * 1e12;
    if (tps < 0.0 || tps > duration_ps) continue;
    const std::int64_t stamp = std::llround(tps);
    if (dead_ps > 0 && stamp - last_kept < dead_ps) continue;
    last_kept = stamp;
    out.push_back({channel, static_cast<std::uint64_t>(stamp)});
  }
}

void check_budget(double expected_tags) {
  if (expected_tags > 1e9)
    throw ResourceLimitError(
        "simulate: expected tag count exceeds the 1e9 budget");
}

}  // namespace

void SourceConfig::validate() const {
  if (!(pair_rate >= 0.0) || !(signal_noise_rate >= 0.0) || !(idler_noise_rate >= 0.0))
    throw std::invalid_argument("source config: rates must be >= 0");
  if (!(signal_transmission >= 0.0) || signal_transmission > 1.0 ||
      !(idler_transmission >= 0.0) || idler_transmission > 1.0)
    throw std::invalid_argument("source config: transmissions must be in [0,1]");
  if (!(jitter_fwhm >= 0.0) || !(dead_time >= 0.0))
    throw std::invalid_argument("source config: jitter and dead time must be >= 0");
  if (!(duration > 0.0))
    throw std::invalid_argument("source config: duration must be positive");
}

TagStream simulate_pairs(const SourceConfig& config, std::uint8_t idler_channel,
                         std::uint8_t signal_channel) {
  config.validate();
  check_budget((2.0 * config.pair_rate + config.signal_noise_rate +
                config.idler_noise_rate) * config.duration);
  const double sigma = config.jitter_fwhm * kFwhmToSigma;

  std::vector<double> idler_times, signal_times;
  for (const PairEvent& e : draw_pairs(config)) {
    if (e.idler_kept) idler_times.push_back(e.creation + sigma * e.idler_jitter);
    if (e.signal_kept) signal_times.push_back(e.emission + sigma * e.signal_jitter);
  }
  for (const NoiseTag& n : draw_noise(config, config.idler_noise_rate, kIdlerNoiseStream))
    idler_times.push_back(n.t + sigma * n.jitter);
  for (const NoiseTag& n : draw_noise(config, config.signal_noise_rate, kSignalNoiseStream))
    signal_times.push_back(n.t + sigma * n.jitter);

  std::vector<TimeTag> tags;
  tags.reserve(idler_times.size() + signal_times.size());
  finalize_channel(idler_times, idler_channel, config.dead_time, config.duration, tags);
  finalize_channel(signal_times, signal_channel, config.dead_time, config.duration, tags);
  return TagStream(std::move(tags));
}

TagStream simulate_heralded_autocorr(const SourceConfig& config,
                                     std::uint64_t splitter_seed) {
  config.validate();
  check_budget((2.0 * config.pair_rate + config.signal_noise_rate +
                config.idler_noise_rate) * config.duration);
  const double sigma = config.jitter_fwhm * kFwhmToSigma;
  const CounterRng splitter(splitter_seed);

  std::vector<double> idler_times, t_times, r_times;
  std::uint64_t ordinal = 0;
  for (const PairEvent& e : draw_pairs(config)) {
    if (e.idler_kept) idler_times.push_back(e.creation + sigma * e.idler_jitter);
    if (e.signal_kept) {
      auto& arm = splitter.bernoulli(0.5, 0, ordinal, 0) ? t_times : r_times;
      arm.push_back(e.emission + sigma * e.signal_jitter);
    }
    ++ordinal;
  }
  for (const NoiseTag& n : draw_noise(config, config.idler_noise_rate, kIdlerNoiseStream))
    idler_times.push_back(n.t + sigma * n.jitter);
  for (const NoiseTag& n : draw_noise(config, config.signal_noise_rate, kSignalNoiseStream)) {
    auto& arm = n.route <= 0.5 ? t_times : r_times;
    arm.push_back(n.t + sigma * n.jitter);
  }

  std::vector<TimeTag> tags;
  finalize_channel(idler_times, channels::kIdlerA, config.dead_time, config.duration, tags);
  finalize_channel(t_times, channels::kSplitT, config.dead_time, config.duration, tags);
  finalize_channel(r_times, channels::kSplitR, config.dead_time, config.duration, tags);
  return TagStream(std::move(tags));
}

TagStream simulate_hom_experiment(const SourceConfig& config_a,
                                  const SourceConfig& config_b,
                                  double indistinguishability,
                                  std::uint64_t beamsplitter_seed) {
  config_a.validate();
  config_b.validate();
  if (!(indistinguishability >= 0.0) || indistinguishability > 1.0)
    throw std::invalid_argument("simulate_hom: indistinguishability must be in [0,1]");
  check_budget((2.0 * (config_a.pair_rate + config_b.pair_rate) +
                config_a.signal_noise_rate + config_a.idler_noise_rate +
                config_b.signal_noise_rate + config_b.idler_noise_rate) *
               std::max(config_a.duration, config_b.duration));

  const double sigma_a = config_a.jitter_fwhm * kFwhmToSigma;
  const double sigma_b = config_b.jitter_fwhm * kFwhmToSigma;
  const CounterRng bs(beamsplitter_seed);

  const std::vector<PairEvent> ev_a = draw_pairs(config_a);
  // Decorrelate source B even when both configs carry the same seed.
  SourceConfig config_b_rng = config_b;
  config_b_rng.seed ^= 0xb10c0de500000001ULL;
  const std::vector<PairEvent> ev_b = draw_pairs(config_b_rng);

  // Match A and B signals that are mutual nearest neighbours in creation
  // time (within the horizon). Greedy first-come matching would let a far
  // earlier photon claim the partner of a nearly coincident pair, which
  // spuriously fills in the interference dip.
  const double horizon = pairing_horizon(config_a, config_b);
  std::vector<std::int64_t> partner_of_a(ev_a.size(), -1);
  std::vector<char> b_used(ev_b.size(), 0);
  if (!ev_a.empty() && !ev_b.empty()) {
    auto nearest = [](const std::vector<PairEvent>& from,
                      const std::vector<PairEvent>& in) {
      std::vector<std::size_t> idx(from.size());
      std::size_t j = 0;
      for (std::size_t i = 0; i < from.size(); ++i) {
        const double t = from[i].creation;
        while (j + 1 < in.size() &&
               std::abs(in[j + 1].creation - t) <= std::abs(in[j].creation - t))
          ++j;
        idx[i] = j;
      }
      return idx;
    };
    const std::vector<std::size_t> nearest_b = nearest(ev_a, ev_b);
    const std::vector<std::size_t> nearest_a = nearest(ev_b, ev_a);
    for (std::size_t i = 0; i < ev_a.size(); ++i) {
      const std::size_t k = nearest_b[i];
      if (nearest_a[k] == i &&
          std::abs(ev_b[k].creation - ev_a[i].creation) <= horizon) {
        partner_of_a[i] = static_cast<std::int64_t>(k);
        b_used[k] = 1;
      }
    }
  }

  std::vector<double> idler_a, idler_b, out1, out2;
  for (const PairEvent& e : ev_a)
    if (e.idler_kept) idler_a.push_back(e.creation + sigma_a * e.idler_jitter);
  for (const PairEvent& e : ev_b)
    if (e.idler_kept) idler_b.push_back(e.creation + sigma_b * e.idler_jitter);

  auto detect_signal = [&](const PairEvent& e, double sigma, bool to_out1) {
    if (!e.signal_kept) return;
    (to_out1 ? out1 : out2).push_back(e.emission + sigma * e.signal_jitter);
  };

  std::uint64_t pair_ordinal = 0;
  std::uint64_t lone_ordinal = 0;
  for (std::size_t i = 0; i < ev_a.size(); ++i) {
    if (partner_of_a[i] < 0) {
      detect_signal(ev_a[i], sigma_a, bs.bernoulli(0.5, kBsLoneStream, lone_ordinal++, 0));
      continue;
    }
    const PairEvent& a = ev_a[i];
    const PairEvent& b = ev_b[static_cast<std::size_t>(partner_of_a[i])];
    const double dt = a.creation - b.creation;
    const double o = indistinguishability * mode_overlap(config_a.mode, config_b.mode, dt);
    const double p_split = 0.5 * (1.0 - o * o);
    const bool split = bs.bernoulli(p_split, kBsPairStream, pair_ordinal, 0);
    const bool a_to_out1 = bs.bernoulli(0.5, kBsPairStream, pair_ordinal, 1);
    ++pair_ordinal;
    if (split) {
      detect_signal(a, sigma_a, a_to_out1);
      detect_signal(b, sigma_b, !a_to_out1);
    } else {
      detect_signal(a, sigma_a, a_to_out1);
      detect_signal(b, sigma_b, a_to_out1);
    }
  }
  for (std::size_t k = 0; k < ev_b.size(); ++k)
    if (!b_used[k])
      detect_signal(ev_b[k], sigma_b, bs.bernoulli(0.5, kBsLoneStream, lone_ordinal++, 0));

  for (const NoiseTag& n : draw_noise(config_a, config_a.idler_noise_rate, kIdlerNoiseStream))
    idler_a.push_back(n.t + sigma_a * n.jitter);
  for (const NoiseTag& n : draw_noise(config_b, config_b.idler_noise_rate, kIdlerNoiseStream + 4))
    idler_b.push_back(n.t + sigma_b * n.jitter);
  for (const NoiseTag& n : draw_noise(config_a, config_a.signal_noise_rate, kSignalNoiseStream))
    (n.route <= 0.5 ? out1 : out2).push_back(n.t + sigma_a * n.jitter);
  for (const NoiseTag& n : draw_noise(config_b, config_b.signal_noise_rate, kSignalNoiseStream + 4))
    (n.route <= 0.5 ? out1 : out2).push_back(n.t + sigma_b * n.jitter);

  std::vector<TimeTag> tags;
  finalize_channel(idler_a, channels::kIdlerA, config_a.dead_time, config_a.duration, tags);
  finalize_channel(idler_b, channels::kIdlerB, config_b.dead_time, config_b.duration, tags);
  const double dur = std::max(config_a.duration, config_b.duration);
  const double dead = std::max(config_a.dead_time, config_b.dead_time);
  finalize_channel(out1, channels::kSplitT, dead, dur, tags);
  finalize_channel(out2, channels::kSplitR, dead, dur, tags);
  return TagStream(std::move(tags));
}

}  // namespace bp
