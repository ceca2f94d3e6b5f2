#include "bellgate/apparatus.hpp"

#include <cmath>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw validation_error(std::string(name) + " must be positive");
}

}  // namespace

const ApparatusConfig& validate_config(const ApparatusConfig& cfg) {
  require_positive(cfg.aperture_width, "aperture");
  require_positive(cfg.mirror_radius, "mirror radius");
  require_positive(cfg.rotation_rate, "rotation rate");
  if (cfg.facet_count < 1) throw validation_error("facet count must be at least 1");
  // Zero-length fiber is allowed as a degenerate (non-isolating) geometry.
  if (!(cfg.fiber_length >= 0.0) || !std::isfinite(cfg.fiber_length))
    throw validation_error("fiber length must be non-negative");
  if (!(cfg.fiber_group_index >= 1.0) || !std::isfinite(cfg.fiber_group_index))
    throw validation_error("fiber group index must be at least 1");
  require_positive(cfg.vacuum_light_speed, "vacuum light speed");

  const double facet_sweep = 2.0 * pi * cfg.mirror_radius / cfg.facet_count;
  if (!(cfg.aperture_width < facet_sweep)) throw validation_error("aperture exceeds facet sweep");
  return cfg;
}

double aperture_time(const ApparatusConfig& cfg) {
  return cfg.aperture_width / (2.0 * pi * cfg.mirror_radius * cfg.rotation_rate);
}

double duty_cycle(const ApparatusConfig& cfg) {
  return cfg.aperture_width * cfg.facet_count / (2.0 * pi * cfg.mirror_radius);
}

GateGeometry gate_geometry(const ApparatusConfig& cfg) {
  validate_config(cfg);
  GateGeometry g{};
  g.aperture_time = aperture_time(cfg);
  g.duty_cycle = duty_cycle(cfg);
  g.gate_period = 1.0 / (cfg.rotation_rate * cfg.facet_count);
  g.fiber_delay = cfg.fiber_length / cfg.fiber_light_speed();
  g.flight_distance_during_gate = cfg.fiber_light_speed() * g.aperture_time;
  return g;
}

}  // namespace bellgate
