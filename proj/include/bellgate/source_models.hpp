#pragma once

// Pair emission and joint polarizer outcomes under pluggable correlation models.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bellgate/apparatus.hpp"
#include "bellgate/rng.hpp"

namespace bellgate {

/// Correlation kernel of the entangled state. `mirrored` fits the measured
/// counts of the gated bench and is the default.
enum class SignConvention { plus, minus, mirrored };

struct QuantumState {
  SignConvention sign_convention = SignConvention::mirrored;
  double visibility = 1.0;
};

/// Shared hidden polarization theta; each arm passes independently with
/// Malus probability cos^2(theta - setting).
struct MalusLhv {};

/// Deterministic: an arm passes iff cos 2(theta - setting) > 0.
struct ThresholdLhv {};

/// Propagation speed of a hypothesized detector-to-source influence.
class InfluenceSpeed {
 public:
  static InfluenceSpeed instantaneous() { return InfluenceSpeed(); }
  /// Throws a validation Error unless the speed is finite and positive.
  static InfluenceSpeed finite(double meters_per_second);

  bool is_instantaneous() const { return !speed_.has_value(); }
  /// +inf for the instantaneous case.
  double value() const { return speed_.value_or(std::numeric_limits<double>::infinity()); }
  /// Time to cover `distance`; zero when instantaneous.
  double travel_time(double distance) const { return speed_ ? distance / *speed_ : 0.0; }

 private:
  InfluenceSpeed() = default;
  explicit InfluenceSpeed(double v) : speed_(v) {}
  std::optional<double> speed_;
};

struct CorrelationModel;

/// Pairs emitted while the source is "informed" by the detectors (the influence
/// reached it through an open gate) follow `informed`; all others `uninformed`.
struct TravelingInfluence {
  std::shared_ptr<const CorrelationModel> informed;
  std::shared_ptr<const CorrelationModel> uninformed;
  InfluenceSpeed influence_speed = InfluenceSpeed::instantaneous();
};

struct CorrelationModel {
  std::variant<QuantumState, MalusLhv, ThresholdLhv, TravelingInfluence> kind;
};

/// Throws a validation Error for out-of-range visibility, missing or nested
/// traveling-influence sub-models.
void validate_model(const CorrelationModel& model);

std::string model_name(const CorrelationModel& model);

/// Per-pair hidden variables. `theta` is used by the LHV models; `informed`
/// only by TravelingInfluence.
struct HiddenState {
  double theta = 0.0;  ///< radians in [0, pi)
  bool informed = false;
};

struct PairEvent {
  double emission_time = 0.0;  ///< seconds since run start
  HiddenState hidden;
};

/// Timing a TravelingInfluence model needs to decide whether an emission was
/// informed: the source is informed during [k*P + t1, k*P + T_on + t1] with t1
/// the influence travel time from slit to source and P the gate period.
struct InfluenceTiming {
  double gate_period = 0.0;
  double aperture_time = 0.0;
  double phase_offset = 0.0;
  double fiber_length = 0.0;

  static InfluenceTiming from(const GateGeometry& geom, double fiber_length, double phase_offset = 0.0) {
    return {geom.gate_period, geom.aperture_time, phase_offset, fiber_length};
  }
  bool informed_at(double emission_time, const InfluenceSpeed& speed) const;
};

/// Draws the hidden state for one pair emitted at `emission_time`.
/// `timing` is only consulted for TravelingInfluence and may be null otherwise.
HiddenState draw_hidden_state(const CorrelationModel& model, double emission_time,
                              const InfluenceTiming* timing, Rng& rng);

/// Homogeneous Poisson emission times over [0, duration) with hidden states.
/// Deterministic for a fixed seed. Throws on non-positive rate or negative duration.
std::vector<PairEvent> sample_emissions(double rate, double duration, std::uint64_t seed,
                                        const CorrelationModel& model = {},
                                        const InfluenceTiming* timing = nullptr);

struct JointOutcome {
  bool alice_pass = false;
  bool bob_pass = false;
};

/// Samples the transmitted-port outcome at both polarizers (angles in degrees).
JointOutcome joint_outcome(const CorrelationModel& model, double alice_angle, double bob_angle,
                           const HiddenState& hidden, Rng& rng);

/// Exact probability that both arms pass, given the model (not TravelingInfluence).
double joint_pass_probability(const CorrelationModel& model, double alice_angle, double bob_angle);

/// Exact correlation E = P(agree) - P(disagree) as seen by the 16-count
/// two-channel estimator. Throws for TravelingInfluence (time dependent).
double correlation_theory(const CorrelationModel& model, double alice_angle, double bob_angle);

/// The signed kernel K(alpha, beta) of a QuantumState convention.
double quantum_kernel(SignConvention conv, double alice_angle, double bob_angle);

}  // namespace bellgate
