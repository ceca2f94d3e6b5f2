#pragma once

// Avalanche photodiodes (efficiency, dark counts) and the coincidence matcher.

#include <cstdint>
#include <span>
#include <vector>

#include "bellgate/transport_gating.hpp"

namespace bellgate {

struct DetectorConfig {
  double efficiency_alice = 1.0;
  double efficiency_bob = 1.0;
  double dark_rate_alice = 0.0;     ///< counts/s
  double dark_rate_bob = 0.0;       ///< counts/s
  double coincidence_window = 20e-9;  ///< |t_A - t_B| < window [s]
};

/// Rates of the APDs on the bench: 1300/s and 600/s dark counts, 20 ns window.
/// Efficiencies follow from the no-rotation singles/coincidence ratios.
DetectorConfig bench_detectors();

void validate_detectors(const DetectorConfig& det);

/// Singles and coincidences accumulated over `duration` seconds.
struct CountRecord {
  double singles_alice = 0.0;
  double singles_bob = 0.0;
  double coincidences = 0.0;
  double duration = 1.0;

  /// Same record expressed per second.
  CountRecord rates() const {
    return {singles_alice / duration, singles_bob / duration, coincidences / duration, 1.0};
  }
};

struct DetectionStreams {
  std::vector<double> alice;  ///< sorted click times
  std::vector<double> bob;
};

/// Each arrival is detected with its arm's efficiency; independent Poisson dark
/// clicks on [0, duration) are merged in. Output per arm is sorted.
DetectionStreams detect(std::span<const ArrivalEvent> arrivals, const DetectorConfig& det, double duration,
                        std::uint64_t seed);

/// Poisson click times at `rate` over [start, end), appended to `out`.
void append_poisson_times(std::vector<double>& out, double rate, double start, double end, Rng& rng);

/// Greedy earliest-first one-to-one matching of two sorted click streams.
/// Throws a validation Error if either stream is unsorted.
std::uint64_t match_coincidences(std::span<const double> alice, std::span<const double> bob, double window);

}  // namespace bellgate
