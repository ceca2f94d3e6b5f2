#pragma once

// Bench configuration and the closed-form geometry of the rotating-mirror gate.

namespace bellgate {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double vacuum_light_speed_default = 2.998e8;
/// Typical group index of silica single-mode fiber near 800 nm.
inline constexpr double silica_group_index = 1.468;

struct ApparatusConfig {
  double aperture_width = 1e-3;   ///< slit width A [m]
  double mirror_radius = 0.34;    ///< slit-to-mirror distance R [m]
  double rotation_rate = 1000.0;  ///< mirror revolutions per second [Hz]
  int facet_count = 34;           ///< facets on the polygon mirror
  double fiber_length = 200.0;    ///< source-to-mirror fiber per arm [m]
  double fiber_group_index = 1.0; ///< 1.0 reproduces vacuum-speed arithmetic
  double vacuum_light_speed = vacuum_light_speed_default;  ///< [m/s]

  /// Light speed inside the transport fiber.
  double fiber_light_speed() const { return vacuum_light_speed / fiber_group_index; }
};

/// The bench as built: 34-facet mirror at 1 kHz, 1 mm slits 0.34 m away, 200 m fibers.
inline ApparatusConfig bench_apparatus() { return ApparatusConfig{}; }

/// Derived gate timing, computed once from a validated config.
struct GateGeometry {
  double aperture_time;                ///< T_on [s]
  double duty_cycle;                   ///< open fraction of each period
  double gate_period;                  ///< time between facet sweeps [s]
  double fiber_delay;                  ///< source-to-slit transit per arm [s]
  double flight_distance_during_gate;  ///< in-fiber distance covered during T_on [m]
};

/// Throws a validation Error naming the first violated invariant.
const ApparatusConfig& validate_config(const ApparatusConfig& cfg);

// The two formulas below do not validate; callers pass validated configs
// (boundary cases such as a full-duty gate are evaluated directly in tests).

/// A / (2 pi R w)
double aperture_time(const ApparatusConfig& cfg);

/// A N / (2 pi R)
double duty_cycle(const ApparatusConfig& cfg);

/// Validates, then evaluates every derived quantity.
GateGeometry gate_geometry(const ApparatusConfig& cfg);

}  // namespace bellgate
