#include "bellgate/reference.hpp"

#include <vector>

namespace bellgate {

SettingCounts reference_setting(const SimulationContext& ctx, const std::optional<Setting>& setting,
                                std::uint64_t seed) {
  std::vector<ArrivalEvent> arrivals;
  if (ctx.pair_rate > 0.0) {
    const auto pairs = sample_emissions(ctx.pair_rate, ctx.duration, derive_seed(seed, {11}), ctx.model, &ctx.timing);
    Rng outcome_rng(derive_seed(seed, {12}));
    arrivals.reserve(2 * pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      JointOutcome o{true, true};
      if (setting) o = joint_outcome(ctx.model, setting->alice_angle, setting->bob_angle, pairs[i].hidden, outcome_rng);
      const auto [a, b] = propagate(pairs[i], i, ctx.geometry);
      if (o.alice_pass && a.arrival_time < ctx.duration) arrivals.push_back(a);
      if (o.bob_pass && b.arrival_time < ctx.duration) arrivals.push_back(b);
    }
    if (ctx.rotation) arrivals = apply_gate(arrivals, ctx.gate);
  }
  const auto clicks = detect(arrivals, ctx.detector, ctx.duration, derive_seed(seed, {13}));

  SettingCounts out;
  out.setting = setting;
  out.singles_alice = clicks.alice.size();
  out.singles_bob = clicks.bob.size();
  out.coincidences = match_coincidences(clicks.alice, clicks.bob, ctx.detector.coincidence_window);
  out.duration = ctx.duration;
  return out;
}

}  // namespace bellgate
