#pragma once

// Literal serial pipeline, kept as the reference the fast kernel is tested
// against: every emitted pair is sampled, measured, propagated, gated and
// offered to the detectors. Memory and time grow with pair_rate * duration.

#include <optional>

#include "bellgate/experiment.hpp"

namespace bellgate {

/// sample_emissions -> joint_outcome -> propagate -> apply_gate (if rotation)
/// -> detect -> match_coincidences. Only arrivals inside [0, duration) are kept.
SettingCounts reference_setting(const SimulationContext& ctx, const std::optional<Setting>& setting,
                                std::uint64_t seed);

}  // namespace bellgate
