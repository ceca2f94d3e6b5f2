#include "bellgate/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {

constexpr std::uint64_t no_polarizer_tag = 0x6e6f2d706f6c6172ULL;

/// Emits slit-arrival times of a Poisson process of `rate` restricted to the
/// open gate windows within [0, duration): the process is generated on the
/// concatenated open time and mapped back.
template <class Sink>
void open_gate_poisson(double rate, double duration, const GateState& gate, Rng& rng, Sink&& sink) {
  const double t_on = gate.aperture_time;
  // Start one window early so a window straddling t = 0 is covered.
  const double first_open = gate.phase_offset - (gate.phase_offset > 0.0 ? gate.gate_period : 0.0);
  double u = rng.exponential(rate);
  for (;;) {
    const double m = std::floor(u / t_on);
    const double t = first_open + m * gate.gate_period + (u - m * t_on);
    if (t >= duration) break;
    if (t >= 0.0) sink(t);
    u += rng.exponential(rate);
  }
}

template <class Sink>
void plain_poisson(double rate, double duration, Rng& rng, Sink&& sink) {
  for (double t = rng.exponential(rate); t < duration; t += rng.exponential(rate)) sink(t);
}

}  // namespace

std::vector<Setting> chsh_grid_settings() {
  std::vector<Setting> s;
  for (double a : alice_grid)
    for (double b : bob_grid) s.push_back({a, b});
  return s;
}

void validate_plan(const RunPlan& plan) {
  validate_config(plan.apparatus);
  validate_detectors(plan.detector);
  validate_model(plan.model);
  if (!(plan.pair_rate >= 0.0) || !std::isfinite(plan.pair_rate)) throw validation_error("pair rate must be non-negative");
  if (!(plan.integration_time_per_setting > 0.0)) throw validation_error("integration time must be positive");
  if (plan.settings.empty()) throw validation_error("run plan needs at least one setting");
  const auto geom = gate_geometry(plan.apparatus);
  GateState::from(geom, plan.phase_offset);
}

SimulationContext SimulationContext::from(const RunPlan& plan) {
  validate_plan(plan);
  SimulationContext c;
  c.geometry = gate_geometry(plan.apparatus);
  c.gate = GateState::from(c.geometry, plan.phase_offset);
  c.timing = InfluenceTiming::from(c.geometry, plan.apparatus.fiber_length, plan.phase_offset);
  c.detector = plan.detector;
  c.model = plan.model;
  c.pair_rate = plan.pair_rate;
  c.duration = plan.integration_time_per_setting;
  c.rotation = plan.rotation;
  return c;
}

std::uint64_t setting_seed(std::uint64_t master_seed, const std::optional<Setting>& setting) {
  if (!setting) return derive_seed(master_seed, {no_polarizer_tag});
  return derive_seed(master_seed, {bits_of(setting->alice_angle), bits_of(setting->bob_angle)});
}

SettingCounts simulate_setting(const SimulationContext& ctx, const std::optional<Setting>& setting,
                               std::uint64_t seed) {
  const DetectorConfig& det = ctx.detector;
  Rng pair_rng(derive_seed(seed, {1}));
  Rng dark_alice_rng(derive_seed(seed, {2}));
  Rng dark_bob_rng(derive_seed(seed, {3}));

  std::vector<double> alice, bob;

  if (ctx.pair_rate > 0.0) {
    // A pair matters only if at least one of its photons would be registered by a
    // detector it reaches; efficiency draws are independent of polarization.
    const double ea = det.efficiency_alice;
    const double eb = det.efficiency_bob;
    const double q = 1.0 - (1.0 - ea) * (1.0 - eb);
    const double p_alice_only = ea * (1.0 - eb) / q;
    const double p_bob_only = (1.0 - ea) * eb / q;
    const double rate = ctx.pair_rate * q;
    const double expected = rate * ctx.duration * (ctx.rotation ? ctx.geometry.duty_cycle : 1.0);
    alice.reserve(static_cast<std::size_t>(expected * ea / q) + 64);
    bob.reserve(static_cast<std::size_t>(expected * eb / q) + 64);

    auto on_arrival = [&](double t) {
      const double r = pair_rng.uniform();
      const bool ready_alice = r >= p_bob_only;
      const bool ready_bob = r < p_bob_only || r >= p_bob_only + p_alice_only;
      const HiddenState hidden = draw_hidden_state(ctx.model, t - ctx.geometry.fiber_delay, &ctx.timing, pair_rng);
      JointOutcome o{true, true};
      if (setting) o = joint_outcome(ctx.model, setting->alice_angle, setting->bob_angle, hidden, pair_rng);
      if (ready_alice && o.alice_pass) alice.push_back(t);
      if (ready_bob && o.bob_pass) bob.push_back(t);
    };
    if (ctx.rotation)
      open_gate_poisson(rate, ctx.duration, ctx.gate, pair_rng, on_arrival);
    else
      plain_poisson(rate, ctx.duration, pair_rng, on_arrival);
  }

  auto add_dark = [&](std::vector<double>& clicks, double dark_rate, Rng& rng) {
    std::vector<double> dark;
    append_poisson_times(dark, dark_rate, 0.0, ctx.duration, rng);
    std::vector<double> merged;
    merged.reserve(clicks.size() + dark.size());
    std::merge(clicks.begin(), clicks.end(), dark.begin(), dark.end(), std::back_inserter(merged));
    clicks = std::move(merged);
  };
  add_dark(alice, det.dark_rate_alice, dark_alice_rng);
  add_dark(bob, det.dark_rate_bob, dark_bob_rng);

  SettingCounts out;
  out.setting = setting;
  out.singles_alice = alice.size();
  out.singles_bob = bob.size();
  out.coincidences = match_coincidences(alice, bob, det.coincidence_window);
  out.duration = ctx.duration;
  return out;
}

std::vector<SettingCounts> run_settings(const RunPlan& plan, Execution exec) {
  const SimulationContext ctx = SimulationContext::from(plan);
  const auto n = static_cast<long long>(plan.settings.size());
  std::vector<SettingCounts> out(plan.settings.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
      const auto& s = plan.settings[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = simulate_setting(ctx, s, setting_seed(plan.master_seed, s));
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      const auto& s = plan.settings[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = simulate_setting(ctx, s, setting_seed(plan.master_seed, s));
    }
  }
  return out;
}

CountTable16 assemble_table(const std::vector<SettingCounts>& cells, double coincidence_window,
                            AccidentalConvention convention) {
  CountTable16 t;
  std::array<std::array<bool, 4>, 4> filled{};
  for (const auto& c : cells) {
    if (!c.setting) continue;
    const auto ai = t.alice_index(c.setting->alice_angle);
    const auto bi = t.bob_index(c.setting->bob_angle);
    if (filled[ai][bi]) throw validation_error("duplicate setting in count table");
    filled[ai][bi] = true;
    t.counts[ai][bi] = c.coincidences;
    const double r1 = static_cast<double>(c.singles_alice) / c.duration;
    const double r2 = static_cast<double>(c.singles_bob) / c.duration;
    t.accidentals[ai][bi] = accidental_rate(r1, r2, coincidence_window, convention) * c.duration;
    t.integration_time = c.duration;
  }
  for (const auto& row : filled)
    for (bool f : row)
      if (!f) throw validation_error("run plan settings do not cover the 16-cell grid");
  return t;
}

ChshRun run_chsh_experiment(const RunPlan& plan, Execution exec) {
  ChshRun run;
  run.cells = run_settings(plan, exec);
  run.table = assemble_table(run.cells, plan.detector.coincidence_window, plan.accidental_convention);
  run.result = chsh_S(run.table, {}, plan.variance);
  return run;
}

std::vector<ChshResult> run_chsh_replicates(const RunPlan& plan, int replicates, Execution exec) {
  if (replicates < 1) throw validation_error("replicates must be at least 1");
  validate_plan(plan);
  std::vector<ChshResult> out(static_cast<std::size_t>(replicates));
  auto one = [&](int i) {
    RunPlan p = plan;
    p.master_seed = derive_seed(plan.master_seed, {static_cast<std::uint64_t>(i)});
    out[static_cast<std::size_t>(i)] = run_chsh_experiment(p, Execution::serial).result;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < replicates; ++i) one(i);
  } else {
    for (int i = 0; i < replicates; ++i) one(i);
  }
  return out;
}

DegradationRun run_degradation_experiment(const RunPlan& plan, double duration, Execution exec) {
  if (!(duration > 0.0)) throw validation_error("degradation run duration must be positive");
  RunPlan p = plan;
  p.integration_time_per_setting = duration;

  RunPlan dark_plan = p;
  dark_plan.pair_rate = 0.0;
  dark_plan.rotation = false;
  RunPlan off_plan = p;
  off_plan.rotation = false;
  RunPlan on_plan = p;
  on_plan.rotation = true;

  // Distinct seeds per run; each is still derived from the master seed only.
  const std::array<const RunPlan*, 3> plans = {&dark_plan, &off_plan, &on_plan};
  std::array<SettingCounts, 3> res;
  auto one = [&](int i) {
    const auto ctx = SimulationContext::from(*plans[static_cast<std::size_t>(i)]);
    const auto seed = derive_seed(setting_seed(p.master_seed, std::nullopt), {static_cast<std::uint64_t>(i)});
    res[static_cast<std::size_t>(i)] = simulate_setting(ctx, std::nullopt, seed);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < 3; ++i) one(i);
  } else {
    for (int i = 0; i < 3; ++i) one(i);
  }

  DegradationRun run{res[0], res[1], res[2], {}};
  run.report = degradation_ratio(run.with_rotation.record(), run.without_rotation.record(), run.dark.record());
  return run;
}

Calibration calibrate_from_counts(const CountRecord& record, const CountRecord& dark) {
  const CountRecord c = dark_subtract(record, dark);
  if (!(c.coincidences > 0.0)) throw numerical_error("calibration needs a positive dark-subtracted coincidence rate");
  if (!(c.singles_alice > 0.0) || !(c.singles_bob > 0.0))
    throw numerical_error("calibration needs positive dark-subtracted singles rates");
  Calibration cal;
  cal.efficiency_alice = c.coincidences / c.singles_bob;
  cal.efficiency_bob = c.coincidences / c.singles_alice;
  cal.pair_rate = c.singles_alice * c.singles_bob / c.coincidences;
  if (cal.efficiency_alice > 1.0 || cal.efficiency_bob > 1.0)
    throw numerical_error("calibration gives an efficiency above 1: coincidences exceed singles");
  return cal;
}

}  // namespace bellgate
