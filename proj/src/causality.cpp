#include "bellgate/causality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellgate/error.hpp"

namespace bellgate {

CausalityReport influence_window_analysis(const GateGeometry& geom, double fiber_length, InfluenceSpeed speed,
                                          double photon_speed) {
  if (!(photon_speed > 0.0)) throw validation_error("photon speed must be positive");
  if (!(fiber_length >= 0.0)) throw validation_error("fiber length must be non-negative");
  const double t_on = geom.aperture_time;
  const double period = geom.gate_period;

  CausalityReport rep;
  rep.influence_speed = speed;
  rep.influence_arrival_at_source = speed.travel_time(fiber_length);
  const double t1 = rep.influence_arrival_at_source;
  const double back = fiber_length / photon_speed;
  rep.informed_emission_window = {t1, t1 + t_on};
  rep.informed_arrival_window_at_slit = {t1 + back, t1 + back + t_on};
  rep.isolation_margin = rep.informed_arrival_window_at_slit.start - t_on;

  const auto [s, e] = rep.informed_arrival_window_at_slit;
  double overlap = 0.0;
  const auto k_lo = std::max<long long>(0, static_cast<long long>(std::floor(s / period)) - 1);
  const auto k_hi = static_cast<long long>(std::floor(e / period)) + 1;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double open = static_cast<double>(k) * period;
    const double ov = std::min(e, open + t_on) - std::max(s, open);
    if (ov > 0.0) {
      overlap += ov;
      if (!rep.earliest_open_overlap) rep.earliest_open_overlap = k;
    }
  }
  rep.pass_fraction = t_on > 0.0 ? std::clamp(overlap / t_on, 0.0, 1.0) : 0.0;
  return rep;
}

std::vector<ResonanceInterval> resonant_influence_speeds(const GateGeometry& geom, double fiber_length,
                                                         double photon_speed, long long max_windows) {
  if (max_windows < 1) throw validation_error("max_windows must be at least 1");
  if (!(photon_speed > 0.0)) throw validation_error("photon speed must be positive");
  std::vector<ResonanceInterval> out;
  if (!(fiber_length > 0.0)) return out;

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double t_on = geom.aperture_time;
  const double back = fiber_length / photon_speed;
  for (long long k = 1; k <= max_windows; ++k) {
    const double open = static_cast<double>(k) * geom.gate_period;
    // Positive overlap with window k  <=>  |t1 + back - open| < T_on, with t1 = L / v > 0.
    const double t1_max = open + t_on - back;
    const double t1_min = open - t_on - back;
    if (t1_max <= 0.0) continue;
    ResonanceInterval r;
    r.window = k;
    r.lower = fiber_length / t1_max;
    r.upper = t1_min > 0.0 ? fiber_length / t1_min : inf;
    r.center = open - back > 0.0 ? fiber_length / (open - back) : inf;
    out.push_back(r);
  }
  return out;
}

}  // namespace bellgate
