#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bellgate/error.hpp"
#include "bellgate/transport_gating.hpp"

using namespace bellgate;

namespace {

const GateGeometry bench = gate_geometry(bench_apparatus());

}  // namespace

TEST_CASE("propagate adds the same fiber delay to both arms") {
  const auto [a, b] = propagate(PairEvent{0.0, {}}, 7, bench);
  CHECK(a.arrival_time == doctest::Approx(6.671114e-7).epsilon(1e-6));
  CHECK(b.arrival_time == a.arrival_time);
  CHECK(a.pair_id == 7);
  CHECK(b.pair_id == 7);
  CHECK(a.arm == Arm::alice);
  CHECK(b.arm == Arm::bob);

  auto zero = bench_apparatus();
  zero.fiber_length = 0.0;
  const auto g0 = gate_geometry(zero);
  CHECK(propagate(PairEvent{1.25, {}}, 0, g0).first.arrival_time == 1.25);

  const auto p1 = propagate(PairEvent{0.3, {}}, 1, bench).first.arrival_time;
  const auto p2 = propagate(PairEvent{0.3 + 5e-6, {}}, 2, bench).first.arrival_time;
  CHECK(p2 - p1 == doctest::Approx(5e-6).epsilon(1e-9));
}

TEST_CASE("gate windows") {
  const auto gate = GateState::from(bench);
  CHECK(gate_open(2e-7, gate));
  CHECK_FALSE(gate_open(1e-6, gate));
  CHECK(gate_open(bench.gate_period + 1e-8, gate));
  CHECK(gate_open(0.0, gate));
  CHECK_FALSE(gate_open(bench.aperture_time, gate));  // half-open window

  const auto shifted = GateState::from(bench, 1e-5);
  CHECK_FALSE(gate_open(2e-7, shifted));
  CHECK(gate_open(1e-5 + 2e-7, shifted));
  // Before the first opening the previous period's window applies.
  CHECK(gate_open(1e-5 - bench.gate_period + 2e-7 + bench.gate_period, shifted));

  CHECK_THROWS_AS(GateState::from(bench, bench.gate_period), Error);
  CHECK_THROWS_AS(GateState::from(bench, -1e-9), Error);
  GateGeometry full = bench;
  full.aperture_time = full.gate_period;
  CHECK_THROWS_AS(GateState::from(full), Error);
}

TEST_CASE("retained fraction of uniform arrivals converges to the duty cycle") {
  const auto gate = GateState::from(bench);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const std::size_t n = 2000000;
  std::vector<ArrivalEvent> arr(n);
  for (std::size_t i = 0; i < n; ++i) arr[i] = {Arm::alice, u(gen), i};
  const auto kept = apply_gate(arr, gate);
  const double f = double(kept.size()) / n;
  const double d = bench.duty_cycle;
  CHECK(std::abs(f - d) < 3.0 * std::sqrt(d * (1 - d) / n));
  CHECK(std::abs(f - 0.016) < 0.001);
}

TEST_CASE("an always-open gate keeps everything") {
  GateState always{1e-6, 1e-6, 0.0};  // bypasses GateState::from on purpose
  std::vector<ArrivalEvent> arr;
  for (int i = 0; i < 1000; ++i) arr.push_back({Arm::bob, i * 3.7e-7, std::uint64_t(i)});
  CHECK(apply_gate(arr, always).size() == arr.size());
}

TEST_CASE("property: pairs survive the gate atomically") {
  const auto gate = GateState::from(bench, 3e-6);
  const auto pairs = sample_emissions(2e5, 0.5, 77);
  std::vector<ArrivalEvent> arr;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = propagate(pairs[i], i, bench);
    arr.push_back(a);
    arr.push_back(b);
  }
  const auto kept = apply_gate(arr, gate);
  std::map<std::uint64_t, int> seen;
  for (const auto& a : kept) ++seen[a.pair_id];
  CHECK(!seen.empty());
  for (const auto& [id, n] : seen) REQUIRE(n == 2);
}
