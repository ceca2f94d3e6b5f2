#pragma once

// Count arithmetic: dark subtraction, degradation ratios, accidentals and the
// 16-count two-channel CHSH estimator with Poisson error propagation.

#include <array>
#include <cstdint>

#include "bellgate/detection.hpp"

namespace bellgate {

inline constexpr std::array<double, 4> alice_grid = {0.0, 45.0, 90.0, 135.0};
inline constexpr std::array<double, 4> bob_grid = {22.5, 67.5, 112.5, 157.5};

/// Coincidence counts over the 4x4 polarizer grid, one integration per cell.
struct CountTable16 {
  std::array<double, 4> alice_angles = alice_grid;
  std::array<double, 4> bob_angles = bob_grid;
  std::array<std::array<std::uint64_t, 4>, 4> counts{};   ///< [alice][bob]
  std::array<std::array<double, 4>, 4> accidentals{};     ///< [alice][bob]
  double integration_time = 60.0;                         ///< seconds per cell

  /// Index of an angle on the Alice (Bob) axis; throws if absent.
  std::size_t alice_index(double angle) const;
  std::size_t bob_index(double angle) const;

  std::uint64_t count(double alice_angle, double bob_angle) const {
    return counts[alice_index(alice_angle)][bob_index(bob_angle)];
  }
  double accidental(double alice_angle, double bob_angle) const {
    return accidentals[alice_index(alice_angle)][bob_index(bob_angle)];
  }
  /// Accidental-subtracted count, floored at zero.
  double corrected(double alice_angle, double bob_angle) const;
};

/// Throws a validation Error unless the grid is exactly {0,45,90,135} x {22.5,67.5,112.5,157.5}
/// and accidentals are non-negative.
void validate_table(const CountTable16& table);

/// Element-wise rate difference (per second), floored at zero.
CountRecord dark_subtract(const CountRecord& raw, const CountRecord& dark);

struct DegradationReport {
  /// singles_alice, singles_bob, coincidences
  std::array<double, 3> ratio{};
  std::array<double, 3> sigma{};
};

/// Signal with rotation over signal without, after dark subtraction. Sigmas
/// propagate Poisson variance count/duration^2 of every raw record.
DegradationReport degradation_ratio(const CountRecord& with_rotation, const CountRecord& without_rotation,
                                    const CountRecord& dark);

/// `single`: r1 r2 tau. `double_window`: r1 r2 2 tau, the exact rate for a
/// matcher accepting |t_A - t_B| < tau.
enum class AccidentalConvention { single, double_window };

double accidental_rate(double r1, double r2, double window, AccidentalConvention convention);

struct CorrelationEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// E = (c_ab + c_a'b' - c_ab' - c_a'b) / sum, where primes are the +90 deg
/// ports. Variance of each count defaults to the count itself.
CorrelationEstimate correlation_E(double c_ab, double c_perp_perp, double c_a_bperp, double c_aperp_b);
CorrelationEstimate correlation_E(const std::array<double, 4>& counts, const std::array<double, 4>& variances);

/// How the variance of a corrected count is estimated.
enum class VarianceModel {
  corrected,              ///< var = count - accidental
  raw_plus_accidental,    ///< var = count + accidental (conservative)
};

struct ChshSettings {
  double a = 0.0;
  double a_prime = 45.0;
  double b = 22.5;
  double b_prime = 67.5;
};

struct ChshResult {
  /// (a,b), (a,b'), (a',b), (a',b')
  std::array<CorrelationEstimate, 4> correlations{};
  double S = 0.0;
  double S_sigma = 0.0;
};

ChshResult chsh_S(const CountTable16& table, const ChshSettings& settings = {},
                  VarianceModel variance = VarianceModel::corrected);

}  // namespace bellgate
