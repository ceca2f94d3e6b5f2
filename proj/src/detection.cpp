#include "bellgate/detection.hpp"

#include <algorithm>
#include <cmath>

#include "bellgate/error.hpp"

namespace bellgate {

DetectorConfig bench_detectors() {
  // Dark-corrected no-rotation rates: singles 32594/s and 19729/s, coincidences 388.92/s.
  // With S_A = R eta_A, S_B = R eta_B and C = R eta_A eta_B: eta_A = C / S_B, eta_B = C / S_A.
  DetectorConfig d;
  d.efficiency_alice = 388.92 / 19729.0;
  d.efficiency_bob = 388.92 / 32594.0;
  d.dark_rate_alice = 1300.0;
  d.dark_rate_bob = 600.0;
  d.coincidence_window = 20e-9;
  return d;
}

void validate_detectors(const DetectorConfig& det) {
  auto eff = [](double e, const char* arm) {
    if (!(e > 0.0 && e <= 1.0)) throw validation_error(std::string(arm) + " efficiency must lie in (0, 1]");
  };
  eff(det.efficiency_alice, "alice");
  eff(det.efficiency_bob, "bob");
  if (!(det.dark_rate_alice >= 0.0) || !(det.dark_rate_bob >= 0.0))
    throw validation_error("dark rates must be non-negative");
  if (!(det.coincidence_window > 0.0)) throw validation_error("coincidence window must be positive");
}

void append_poisson_times(std::vector<double>& out, double rate, double start, double end, Rng& rng) {
  if (!(rate > 0.0)) return;
  for (double t = start + rng.exponential(rate); t < end; t += rng.exponential(rate)) out.push_back(t);
}

DetectionStreams detect(std::span<const ArrivalEvent> arrivals, const DetectorConfig& det, double duration,
                        std::uint64_t seed) {
  validate_detectors(det);
  Rng photon_rng(derive_seed(seed, {1}));
  Rng dark_alice(derive_seed(seed, {2}));
  Rng dark_bob(derive_seed(seed, {3}));

  DetectionStreams s;
  for (const auto& a : arrivals) {
    if (a.arm == Arm::alice) {
      if (photon_rng.bernoulli(det.efficiency_alice)) s.alice.push_back(a.arrival_time);
    } else {
      if (photon_rng.bernoulli(det.efficiency_bob)) s.bob.push_back(a.arrival_time);
    }
  }
  append_poisson_times(s.alice, det.dark_rate_alice, 0.0, duration, dark_alice);
  append_poisson_times(s.bob, det.dark_rate_bob, 0.0, duration, dark_bob);
  std::sort(s.alice.begin(), s.alice.end());
  std::sort(s.bob.begin(), s.bob.end());
  return s;
}

std::uint64_t match_coincidences(std::span<const double> alice, std::span<const double> bob, double window) {
  if (!std::is_sorted(alice.begin(), alice.end()) || !std::is_sorted(bob.begin(), bob.end()))
    throw validation_error("click streams must be time-sorted");
  std::uint64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < alice.size() && j < bob.size()) {
    const double d = alice[i] - bob[j];
    if (std::abs(d) < window) {
      ++n;
      ++i;
      ++j;
    } else if (d < 0.0) {
      ++i;
    } else {
      ++j;
    }
  }
  return n;
}

}  // namespace bellgate
