#pragma once

// Fiber transport to the mirror and the shared rotating-mirror gate.

#include <cstdint>
#include <span>
#include <vector>

#include "bellgate/apparatus.hpp"
#include "bellgate/source_models.hpp"

namespace bellgate {

enum class Arm : std::uint8_t { alice, bob };

/// Periodic top-hat gate: open on [phase + k P, phase + k P + T_on).
struct GateState {
  double gate_period = 0.0;
  double aperture_time = 0.0;
  double phase_offset = 0.0;

  /// Throws unless 0 <= phase < period and T_on < period.
  static GateState from(const GateGeometry& geom, double phase_offset = 0.0);
};

struct ArrivalEvent {
  Arm arm = Arm::alice;
  double arrival_time = 0.0;
  std::uint64_t pair_id = 0;
};

/// Both photons of the pair reach their slits after the same fiber delay.
std::pair<ArrivalEvent, ArrivalEvent> propagate(const PairEvent& pair, std::uint64_t pair_id,
                                                const GateGeometry& geometry);

bool gate_open(double t, const GateState& gate);

/// Keeps the arrivals that find the gate open. Both arms share one mirror
/// phase, so pairs survive or vanish together.
std::vector<ArrivalEvent> apply_gate(std::span<const ArrivalEvent> arrivals, const GateState& gate);

}  // namespace bellgate
