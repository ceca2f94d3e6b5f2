#pragma once

// Closed-form timing analysis of a hypothesized detector-to-source influence.
//
// The influence leaves the slit when the gate opens (t = 0) and reaches the
// source after t1 = L / v. The source emits "informed" photons while the line of
// sight is open, over [t1, t1 + T_on]. Those photons need L / v_photon to come
// back, so they reach the slit over [t1 + L/v_photon, t1 + L/v_photon + T_on],
// and are detected only where that interval meets an open gate window
// [k P, k P + T_on].

#include <optional>
#include <vector>

#include "bellgate/apparatus.hpp"
#include "bellgate/source_models.hpp"

namespace bellgate {

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

struct CausalityReport {
  InfluenceSpeed influence_speed = InfluenceSpeed::instantaneous();
  double influence_arrival_at_source = 0.0;  ///< t1 [s]
  TimeWindow informed_emission_window;
  TimeWindow informed_arrival_window_at_slit;
  std::optional<long long> earliest_open_overlap;  ///< first gate window index with overlap
  double pass_fraction = 0.0;     ///< overlap length / T_on, in [0, 1]
  double isolation_margin = 0.0;  ///< arrival start - T_on; positive means isolated from window 0
};

CausalityReport influence_window_analysis(const GateGeometry& geom, double fiber_length, InfluenceSpeed speed,
                                          double photon_speed);

/// Open speed interval (lower, upper) for which informed photons meet gate
/// window k. `upper` is +inf when even an instantaneous influence qualifies.
struct ResonanceInterval {
  long long window = 0;
  double lower = 0.0;
  double center = 0.0;  ///< speed that lands the informed window exactly on window k
  double upper = 0.0;
};

/// Resonances for windows 1..max_windows. Window 0 is the emitting window and is
/// covered by influence_window_analysis directly.
std::vector<ResonanceInterval> resonant_influence_speeds(const GateGeometry& geom, double fiber_length,
                                                         double photon_speed, long long max_windows);

}  // namespace bellgate
