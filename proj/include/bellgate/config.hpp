#pragma once

// Run configuration file (JSON, SI units). Sections mirror the modules:
//
//   {
//     "apparatus": { "aperture_width": 1e-3, "mirror_radius": 0.34, ... },
//     "detector":  { "efficiency_alice": 0.0197, ..., "accidental_convention": "double" },
//     "model":     { "name": "quantum", "sign_convention": "mirrored", "visibility": 1.0 },
//     "run":       { "pair_rate": 1.653e6, "integration_time": 60, "rotation": true, ... }
//   }
//
// Every section and key is optional (defaults are the bench values); unknown
// keys are rejected. Command-line overrides use dotted keys, e.g.
// "apparatus.aperture_width=2e-3".

#include <string>
#include <vector>

#include <json.hpp>

#include "bellgate/experiment.hpp"

namespace bellgate {

struct SimulationConfig {
  RunPlan plan;
  double degradation_time = 60.0;  ///< seconds per rotation on/off run; 0 skips it
};

/// Bench defaults: apparatus as built, detectors calibrated from the
/// no-rotation singles and coincidences, mirrored-kernel quantum source.
SimulationConfig default_config();

/// Reads a config file; a missing file is an io Error ("config not found").
nlohmann::json load_config_json(const std::string& path);

/// Applies one "dotted.key=value" override. The value is parsed as JSON when
/// possible ("2e-3", "true", "\"x\"") and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates keys and values; throws a validation Error naming the offending key.
SimulationConfig parse_config(const nlohmann::json& doc);

CorrelationModel parse_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const CorrelationModel& model);

/// Full echo of the effective configuration (every key, defaults included).
nlohmann::json config_to_json(const SimulationConfig& cfg);

/// "instant", "c" (vacuum light speed), "0.5c", or a positive number in m/s.
InfluenceSpeed parse_speed(const std::string& text, double light_speed);

}  // namespace bellgate
