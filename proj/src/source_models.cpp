#include "bellgate/source_models.hpp"

#include <cmath>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {

constexpr double deg = pi / 180.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool threshold_pass(double theta, double setting_deg) { return std::cos(2.0 * (theta - setting_deg * deg)) > 0.0; }

double malus(double theta, double setting_deg) {
  const double c = std::cos(theta - setting_deg * deg);
  return c * c;
}

}  // namespace

InfluenceSpeed InfluenceSpeed::finite(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw validation_error("influence speed must be positive and finite");
  return InfluenceSpeed(v);
}

void validate_model(const CorrelationModel& model) {
  std::visit(overloaded{
                 [](const QuantumState& q) {
                   if (!(q.visibility >= 0.0 && q.visibility <= 1.0))
                     throw validation_error("visibility must lie in [0, 1]");
                 },
                 [](const MalusLhv&) {},
                 [](const ThresholdLhv&) {},
                 [](const TravelingInfluence& t) {
                   if (!t.informed || !t.uninformed)
                     throw validation_error("traveling influence needs informed and uninformed models");
                   for (const auto* sub : {t.informed.get(), t.uninformed.get()}) {
                     if (std::holds_alternative<TravelingInfluence>(sub->kind))
                       throw validation_error("traveling influence models cannot be nested");
                     validate_model(*sub);
                   }
                 },
             },
             model.kind);
}

std::string model_name(const CorrelationModel& model) {
  return std::visit(overloaded{
                        [](const QuantumState&) { return std::string("quantum"); },
                        [](const MalusLhv&) { return std::string("malus_lhv"); },
                        [](const ThresholdLhv&) { return std::string("threshold_lhv"); },
                        [](const TravelingInfluence&) { return std::string("traveling_influence"); },
                    },
                    model.kind);
}

bool InfluenceTiming::informed_at(double emission_time, const InfluenceSpeed& speed) const {
  const double t1 = speed.travel_time(fiber_length);
  double r = std::fmod(emission_time - t1 - phase_offset, gate_period);
  if (r < 0.0) r += gate_period;
  return r <= aperture_time;
}

HiddenState draw_hidden_state(const CorrelationModel& model, double emission_time,
                              const InfluenceTiming* timing, Rng& rng) {
  HiddenState h;
  h.theta = pi * rng.uniform();
  if (const auto* t = std::get_if<TravelingInfluence>(&model.kind)) {
    if (timing == nullptr) throw validation_error("traveling influence model needs gate timing");
    h.informed = timing->informed_at(emission_time, t->influence_speed);
  }
  return h;
}

std::vector<PairEvent> sample_emissions(double rate, double duration, std::uint64_t seed,
                                        const CorrelationModel& model, const InfluenceTiming* timing) {
  if (!(rate > 0.0)) throw validation_error("emission rate must be positive");
  if (!(duration >= 0.0)) throw validation_error("duration must be non-negative");
  Rng rng(seed);
  std::vector<PairEvent> out;
  out.reserve(static_cast<std::size_t>(rate * duration * 1.01) + 16);
  double t = rng.exponential(rate);
  while (t < duration) {
    out.push_back({t, draw_hidden_state(model, t, timing, rng)});
    t += rng.exponential(rate);
  }
  return out;
}

double quantum_kernel(SignConvention conv, double alice_angle, double bob_angle) {
  switch (conv) {
    case SignConvention::plus:
      return std::cos(2.0 * (alice_angle - bob_angle) * deg);
    case SignConvention::minus:
      return -std::cos(2.0 * (alice_angle - bob_angle) * deg);
    case SignConvention::mirrored:
      return std::cos(2.0 * (alice_angle + bob_angle) * deg);
  }
  return 0.0;
}

JointOutcome joint_outcome(const CorrelationModel& model, double alice_angle, double bob_angle,
                           const HiddenState& hidden, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const QuantumState& q) {
            // Alice's marginal is 1/2; Bob conditioned on Alice gives P(pass,pass) = (1 + V K) / 4.
            const double vk = q.visibility * quantum_kernel(q.sign_convention, alice_angle, bob_angle);
            JointOutcome o;
            o.alice_pass = rng.bernoulli(0.5);
            o.bob_pass = rng.bernoulli(o.alice_pass ? 0.5 * (1.0 + vk) : 0.5 * (1.0 - vk));
            return o;
          },
          [&](const MalusLhv&) {
            JointOutcome o;
            o.alice_pass = rng.bernoulli(malus(hidden.theta, alice_angle));
            o.bob_pass = rng.bernoulli(malus(hidden.theta, bob_angle));
            return o;
          },
          [&](const ThresholdLhv&) {
            return JointOutcome{threshold_pass(hidden.theta, alice_angle), threshold_pass(hidden.theta, bob_angle)};
          },
          [&](const TravelingInfluence& t) {
            const auto& sub = hidden.informed ? *t.informed : *t.uninformed;
            return joint_outcome(sub, alice_angle, bob_angle, hidden, rng);
          },
      },
      model.kind);
}

double correlation_theory(const CorrelationModel& model, double alice_angle, double bob_angle) {
  return std::visit(overloaded{
                        [&](const QuantumState& q) {
                          return q.visibility * quantum_kernel(q.sign_convention, alice_angle, bob_angle);
                        },
                        [&](const MalusLhv&) { return 0.5 * std::cos(2.0 * (alice_angle - bob_angle) * deg); },
                        [&](const ThresholdLhv&) {
                          double d = std::fmod(std::abs(alice_angle - bob_angle) * deg, pi);
                          if (d > pi / 2.0) d = pi - d;
                          return 1.0 - 4.0 * d / pi;
                        },
                        [&](const TravelingInfluence&) -> double {
                          throw validation_error("traveling influence has no time-independent correlation");
                        },
                    },
                    model.kind);
}

double joint_pass_probability(const CorrelationModel& model, double alice_angle, double bob_angle) {
  // Every supported model has uniform 1/2 marginals and complementary +90 deg ports.
  return 0.25 * (1.0 + correlation_theory(model, alice_angle, bob_angle));
}

}  // namespace bellgate
