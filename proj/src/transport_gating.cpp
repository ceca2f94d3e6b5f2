#include "bellgate/transport_gating.hpp"

#include <cmath>

#include "bellgate/error.hpp"

namespace bellgate {

GateState GateState::from(const GateGeometry& geom, double phase_offset) {
  if (!(phase_offset >= 0.0 && phase_offset < geom.gate_period))
    throw validation_error("gate phase offset must lie in [0, gate period)");
  if (!(geom.aperture_time < geom.gate_period)) throw validation_error("aperture time must be shorter than gate period");
  return {geom.gate_period, geom.aperture_time, phase_offset};
}

std::pair<ArrivalEvent, ArrivalEvent> propagate(const PairEvent& pair, std::uint64_t pair_id,
                                                const GateGeometry& geometry) {
  const double t = pair.emission_time + geometry.fiber_delay;
  return {ArrivalEvent{Arm::alice, t, pair_id}, ArrivalEvent{Arm::bob, t, pair_id}};
}

bool gate_open(double t, const GateState& gate) {
  double r = std::fmod(t - gate.phase_offset, gate.gate_period);
  if (r < 0.0) r += gate.gate_period;
  return r < gate.aperture_time;
}

std::vector<ArrivalEvent> apply_gate(std::span<const ArrivalEvent> arrivals, const GateState& gate) {
  std::vector<ArrivalEvent> kept;
  for (const auto& a : arrivals)
    if (gate_open(a.arrival_time, gate)) kept.push_back(a);
  return kept;
}

}  // namespace bellgate
