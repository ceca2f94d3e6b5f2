#pragma once

// End-to-end simulated runs: the 16-setting CHSH table and the polarizer-free
// rotation on/off degradation measurement.

#include <cstdint>
#include <optional>
#include <vector>

#include "bellgate/analysis.hpp"
#include "bellgate/apparatus.hpp"
#include "bellgate/detection.hpp"
#include "bellgate/source_models.hpp"
#include "bellgate/transport_gating.hpp"

namespace bellgate {

struct Setting {
  double alice_angle = 0.0;
  double bob_angle = 0.0;
  bool operator==(const Setting&) const = default;
};

/// The 16 polarizer settings of the CHSH grid, Alice-major.
std::vector<Setting> chsh_grid_settings();

struct RunPlan {
  ApparatusConfig apparatus;
  DetectorConfig detector;
  CorrelationModel model;
  double pair_rate = 1.0e6;               ///< emitted pairs per second
  double integration_time_per_setting = 60.0;
  bool rotation = true;
  double phase_offset = 0.0;              ///< first gate opening [s]
  std::vector<Setting> settings = chsh_grid_settings();
  std::uint64_t master_seed = 1;
  AccidentalConvention accidental_convention = AccidentalConvention::double_window;
  VarianceModel variance = VarianceModel::corrected;
};

void validate_plan(const RunPlan& plan);

enum class Execution { serial, parallel };

/// Raw counts for one setting (or the polarizer-free configuration).
struct SettingCounts {
  std::optional<Setting> setting;  ///< empty when no polarizers are in the path
  std::uint64_t singles_alice = 0;
  std::uint64_t singles_bob = 0;
  std::uint64_t coincidences = 0;
  double duration = 0.0;

  CountRecord record() const {
    return {static_cast<double>(singles_alice), static_cast<double>(singles_bob), static_cast<double>(coincidences),
            duration};
  }
  bool operator==(const SettingCounts&) const = default;
};

/// Everything a single setting simulation needs, derived once from a plan.
struct SimulationContext {
  GateGeometry geometry;
  GateState gate;
  InfluenceTiming timing;
  DetectorConfig detector;
  CorrelationModel model;
  double pair_rate = 0.0;
  double duration = 0.0;
  bool rotation = true;

  static SimulationContext from(const RunPlan& plan);
};

/// Seed of one setting, keyed by the angle pair rather than its position in
/// the plan, so cells are reproducible on their own and in any order.
std::uint64_t setting_seed(std::uint64_t master_seed, const std::optional<Setting>& setting);

/// Fast kernel for one setting over slit-arrival times [0, duration).
///
/// Exact in distribution with the literal pipeline (see reference.hpp):
/// pairs that cannot click at either detector are thinned out of the Poisson
/// stream up front, and with rotation on only open-gate time is sampled.
SettingCounts simulate_setting(const SimulationContext& ctx, const std::optional<Setting>& setting,
                               std::uint64_t seed);

/// Runs every setting in `plan.settings`; results follow the plan's order.
std::vector<SettingCounts> run_settings(const RunPlan& plan, Execution exec = Execution::parallel);

/// Fills a CountTable16 from counts covering the full grid, estimating
/// accidentals from each cell's singles.
CountTable16 assemble_table(const std::vector<SettingCounts>& cells, double coincidence_window,
                            AccidentalConvention convention);

struct ChshRun {
  std::vector<SettingCounts> cells;
  CountTable16 table;
  ChshResult result;
};

/// The plan's settings must cover the 16-cell grid.
ChshRun run_chsh_experiment(const RunPlan& plan, Execution exec = Execution::parallel);

/// Independent repetitions of the same plan with master seeds derived from
/// `plan.master_seed` and the replicate index.
std::vector<ChshResult> run_chsh_replicates(const RunPlan& plan, int replicates, Execution exec = Execution::parallel);

struct DegradationRun {
  SettingCounts dark;
  SettingCounts without_rotation;
  SettingCounts with_rotation;
  DegradationReport report;
};

/// Polarizer-free singles and coincidences: detectors alone, source with the
/// mirror stopped, source with the mirror spinning. Each run lasts `duration`.
DegradationRun run_degradation_experiment(const RunPlan& plan, double duration, Execution exec = Execution::parallel);

struct Calibration {
  double pair_rate = 0.0;
  double efficiency_alice = 0.0;
  double efficiency_bob = 0.0;
};

/// Inverts S_A = R eta_A, S_B = R eta_B, C = R eta_A eta_B on dark-subtracted rates.
Calibration calibrate_from_counts(const CountRecord& record, const CountRecord& dark);

}  // namespace bellgate
