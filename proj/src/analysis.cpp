#include "bellgate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {

std::size_t index_on(const std::array<double, 4>& axis, double angle, const char* name) {
  for (std::size_t i = 0; i < axis.size(); ++i)
    if (std::abs(axis[i] - angle) < 1e-9) return i;
  std::ostringstream os;
  os << name << " angle " << angle << " is not on the table grid";
  throw validation_error(os.str());
}

}  // namespace

std::size_t CountTable16::alice_index(double angle) const { return index_on(alice_angles, angle, "alice"); }
std::size_t CountTable16::bob_index(double angle) const { return index_on(bob_angles, angle, "bob"); }

double CountTable16::corrected(double alice_angle, double bob_angle) const {
  return std::max(0.0, static_cast<double>(count(alice_angle, bob_angle)) - accidental(alice_angle, bob_angle));
}

void validate_table(const CountTable16& table) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(table.alice_angles[i] - alice_grid[i]) > 1e-9 || std::abs(table.bob_angles[i] - bob_grid[i]) > 1e-9)
      throw validation_error("count table angle grid does not match {0,45,90,135} x {22.5,67.5,112.5,157.5}");
  }
  for (const auto& row : table.accidentals)
    for (double a : row)
      if (!(a >= 0.0) || !std::isfinite(a)) throw validation_error("accidental estimates must be non-negative");
}

CountRecord dark_subtract(const CountRecord& raw, const CountRecord& dark) {
  const CountRecord r = raw.rates();
  const CountRecord d = dark.rates();
  return {std::max(0.0, r.singles_alice - d.singles_alice), std::max(0.0, r.singles_bob - d.singles_bob),
          std::max(0.0, r.coincidences - d.coincidences), 1.0};
}

DegradationReport degradation_ratio(const CountRecord& with_rotation, const CountRecord& without_rotation,
                                    const CountRecord& dark) {
  const CountRecord num = dark_subtract(with_rotation, dark);
  const CountRecord den = dark_subtract(without_rotation, dark);

  // Poisson: a count n over T seconds gives a rate with variance n / T^2.
  auto rate_var = [](double count, double duration) { return count / (duration * duration); };
  const std::array<double, 3> n = {num.singles_alice, num.singles_bob, num.coincidences};
  const std::array<double, 3> d = {den.singles_alice, den.singles_bob, den.coincidences};
  const std::array<double, 3> w_counts = {with_rotation.singles_alice, with_rotation.singles_bob,
                                          with_rotation.coincidences};
  const std::array<double, 3> o_counts = {without_rotation.singles_alice, without_rotation.singles_bob,
                                          without_rotation.coincidences};
  const std::array<double, 3> k_counts = {dark.singles_alice, dark.singles_bob, dark.coincidences};
  static constexpr const char* column[] = {"singles_alice", "singles_bob", "coincidences"};

  DegradationReport rep;
  for (std::size_t i = 0; i < 3; ++i) {
    if (d[i] <= 0.0)
      throw numerical_error(std::string("degradation ratio: ") + column[i] + " is zero after dark subtraction");
    const double var_k = rate_var(k_counts[i], dark.duration);
    const double var_n = rate_var(w_counts[i], with_rotation.duration) + var_k;
    const double var_d = rate_var(o_counts[i], without_rotation.duration) + var_k;
    rep.ratio[i] = n[i] / d[i];
    rep.sigma[i] = std::sqrt(var_n / (d[i] * d[i]) + n[i] * n[i] * var_d / (d[i] * d[i] * d[i] * d[i]));
  }
  return rep;
}

double accidental_rate(double r1, double r2, double window, AccidentalConvention convention) {
  const double base = r1 * r2 * window;
  return convention == AccidentalConvention::double_window ? 2.0 * base : base;
}

CorrelationEstimate correlation_E(const std::array<double, 4>& c, const std::array<double, 4>& var) {
  for (double x : c)
    if (!(x >= 0.0)) throw validation_error("correlation counts must be non-negative");
  const double agree = c[0] + c[1];
  const double disagree = c[2] + c[3];
  const double total = agree + disagree;
  if (total <= 0.0) throw numerical_error("correlation undefined: all four counts are zero");

  // dE/dc = +2 disagree / N^2 for agreeing ports, -2 agree / N^2 for the others.
  const double g_agree = 2.0 * disagree / (total * total);
  const double g_disagree = -2.0 * agree / (total * total);
  const double v = g_agree * g_agree * (var[0] + var[1]) + g_disagree * g_disagree * (var[2] + var[3]);
  return {(agree - disagree) / total, std::sqrt(v)};
}

CorrelationEstimate correlation_E(double c_ab, double c_perp_perp, double c_a_bperp, double c_aperp_b) {
  const std::array<double, 4> c = {c_ab, c_perp_perp, c_a_bperp, c_aperp_b};
  return correlation_E(c, c);
}

ChshResult chsh_S(const CountTable16& table, const ChshSettings& s, VarianceModel variance) {
  validate_table(table);

  auto estimate = [&](double a, double b) {
    const std::array<std::pair<double, double>, 4> cells = {
        {{a, b}, {a + 90.0, b + 90.0}, {a, b + 90.0}, {a + 90.0, b}}};
    std::array<double, 4> c{}, v{};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto [x, y] = cells[i];
      c[i] = table.corrected(x, y);
      v[i] = variance == VarianceModel::corrected ? c[i]
                                                  : static_cast<double>(table.count(x, y)) + table.accidental(x, y);
    }
    return correlation_E(c, v);
  };

  ChshResult r;
  r.correlations = {estimate(s.a, s.b), estimate(s.a, s.b_prime), estimate(s.a_prime, s.b),
                    estimate(s.a_prime, s.b_prime)};
  const auto& e = r.correlations;
  r.S = std::abs(e[0].value - e[1].value) + std::abs(e[2].value + e[3].value);
  double v = 0.0;
  for (const auto& x : e) v += x.sigma * x.sigma;
  r.S_sigma = std::sqrt(v);
  return r;
}

}  // namespace bellgate
