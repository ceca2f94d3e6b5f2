#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "bellgate/analysis.hpp"
#include "bellgate/detection.hpp"
#include "bellgate/error.hpp"

using namespace bellgate;

namespace {

/// Maximum bipartite matching (Kuhn) between clicks closer than `window`.
std::size_t max_matching(const std::vector<double>& a, const std::vector<double>& b, double window) {
  std::vector<int> owner(b.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& used) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || std::abs(a[i] - b[j]) >= window) continue;
      used[j] = true;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), used)) {
        owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> used(b.size(), false);
    if (augment(i, used)) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("detection efficiency thins arrivals binomially") {
  std::vector<ArrivalEvent> arr;
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) {
    arr.push_back({Arm::alice, i * 1e-6, i});
    arr.push_back({Arm::bob, i * 1e-6, i});
  }
  DetectorConfig det;
  det.efficiency_alice = 0.0119;
  det.efficiency_bob = 0.0197;
  const auto s = detect(arr, det, 1.0, 4);
  CHECK(std::abs(double(s.alice.size()) - 11900.0) < 5.0 * std::sqrt(n * 0.0119 * (1 - 0.0119)));
  CHECK(std::abs(double(s.bob.size()) - 19700.0) < 5.0 * std::sqrt(n * 0.0197 * (1 - 0.0197)));
}

TEST_CASE("a perfect detector passes arrivals through") {
  std::vector<ArrivalEvent> arr = {{Arm::alice, 0.3, 0}, {Arm::bob, 0.3, 0}, {Arm::alice, 0.1, 1}, {Arm::bob, 0.1, 1}};
  DetectorConfig det;  // efficiency 1, no dark counts
  const auto s = detect(arr, det, 1.0, 1);
  CHECK(s.alice == std::vector<double>{0.1, 0.3});
  CHECK(s.bob == std::vector<double>{0.1, 0.3});
}

TEST_CASE("dark counts alone are Poisson at the configured rate") {
  DetectorConfig det;
  det.dark_rate_alice = 1300.0;
  det.dark_rate_bob = 600.0;
  const auto s = detect({}, det, 1.0, 12);
  CHECK(std::abs(double(s.alice.size()) - 1300.0) < 5.0 * std::sqrt(1300.0));
  CHECK(std::abs(double(s.bob.size()) - 600.0) < 5.0 * std::sqrt(600.0));
  CHECK(std::is_sorted(s.alice.begin(), s.alice.end()));

  // Stationarity: twice the duration, twice the counts.
  double one = 0, two = 0;
  for (int i = 0; i < 50; ++i) {
    one += double(detect({}, det, 1.0, 100 + i).alice.size());
    two += double(detect({}, det, 2.0, 200 + i).alice.size());
  }
  CHECK(std::abs(two / one - 2.0) < 4.0 * std::sqrt(2.0 * 2.0 / one + 2.0 / one));
}

TEST_CASE("coincidence matcher basics") {
  const std::vector<double> a = {0.0};
  CHECK(match_coincidences(a, std::vector<double>{15e-9}, 20e-9) == 1);
  CHECK(match_coincidences(a, std::vector<double>{25e-9}, 20e-9) == 0);
  CHECK(match_coincidences(a, std::vector<double>{-15e-9}, 20e-9) == 1);
  // One-to-one: a single Bob click cannot pair with two Alice clicks.
  CHECK(match_coincidences(std::vector<double>{0.0, 1e-9}, std::vector<double>{5e-9}, 20e-9) == 1);
  CHECK(match_coincidences({}, std::vector<double>{1.0}, 20e-9) == 0);
  CHECK_THROWS_AS(match_coincidences(std::vector<double>{2.0, 1.0}, std::vector<double>{1.0}, 20e-9), Error);
  CHECK_THROWS_AS(match_coincidences(std::vector<double>{1.0}, std::vector<double>{3.0, 1.0}, 20e-9), Error);
}

TEST_CASE("property: greedy matching equals maximum matching and never exceeds the singles") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> len(0, 25);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    std::vector<double> a(len(gen)), b(len(gen));
    for (auto& x : a) x = t(gen);
    for (auto& x : b) x = t(gen);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double w = 0.01 + 0.1 * t(gen);
    const auto greedy = match_coincidences(a, b, w);
    REQUIRE(greedy == max_matching(a, b, w));
    REQUIRE(greedy <= std::min(a.size(), b.size()));
  }
}

TEST_CASE("independent streams: accidental rate follows the two-sided window convention") {
  // With-rotation singles of the bench, 500 one-minute runs.
  const double r1 = 2301.0, r2 = 1098.0, w = 20e-9, minute = 60.0;
  const int runs = 500;
  std::uint64_t total = 0;
  for (int i = 0; i < runs; ++i) {
    Rng ra(derive_seed(9, {std::uint64_t(i), 1})), rb(derive_seed(9, {std::uint64_t(i), 2}));
    std::vector<double> a, b;
    append_poisson_times(a, r1, 0.0, minute, ra);
    append_poisson_times(b, r2, 0.0, minute, rb);
    total += match_coincidences(a, b, w);
  }
  const double per_minute = double(total) / runs;
  const double expect_double = accidental_rate(r1, r2, w, AccidentalConvention::double_window) * minute;
  const double expect_single = accidental_rate(r1, r2, w, AccidentalConvention::single) * minute;
  CHECK(expect_double == doctest::Approx(6.06).epsilon(0.01));
  CHECK(expect_single == doctest::Approx(3.03).epsilon(0.01));
  const double sigma = std::sqrt(expect_double / runs);
  CHECK(std::abs(per_minute - expect_double) < 4.0 * sigma);
  CHECK(std::abs(per_minute - expect_single) > 10.0 * sigma);
}

TEST_CASE("detector validation") {
  DetectorConfig d;
  d.efficiency_alice = 0.0;
  CHECK_THROWS_AS(validate_detectors(d), Error);
  d = DetectorConfig{};
  d.dark_rate_bob = -1.0;
  CHECK_THROWS_AS(validate_detectors(d), Error);
  d = DetectorConfig{};
  d.coincidence_window = 0.0;
  CHECK_THROWS_AS(validate_detectors(d), Error);
  CHECK_NOTHROW(validate_detectors(bench_detectors()));
  CHECK(bench_detectors().efficiency_alice == doctest::Approx(0.0197).epsilon(0.005));
  CHECK(bench_detectors().efficiency_bob == doctest::Approx(0.0119).epsilon(0.005));
}
