#include "bellgate/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "bellgate/error.hpp"

namespace bellgate {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw validation_error("config section '" + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) throw validation_error("unknown config key '" + section + (section.empty() ? "" : ".") + key + "'");
}

template <class T>
void read(const json& obj, const std::string& section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw validation_error("config key '" + section + "." + key + "' has the wrong type");
  }
}

double read_number(const json& obj, const std::string& section, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw validation_error("config key '" + section + "." + key + "' must be a number");
  return v.get<double>();
}

SignConvention parse_convention(const std::string& s) {
  if (s == "plus") return SignConvention::plus;
  if (s == "minus") return SignConvention::minus;
  if (s == "mirrored") return SignConvention::mirrored;
  throw validation_error("model.sign_convention must be plus, minus or mirrored");
}

const char* convention_name(SignConvention c) {
  switch (c) {
    case SignConvention::plus:
      return "plus";
    case SignConvention::minus:
      return "minus";
    case SignConvention::mirrored:
      return "mirrored";
  }
  return "mirrored";
}

CorrelationModel parse_model_at(const json& doc, const std::string& section, bool allow_influence) {
  if (!doc.is_object()) throw validation_error("config section '" + section + "' must be an object");
  std::string name = "quantum";
  read(doc, section, "name", name);
  CorrelationModel m;
  if (name == "quantum") {
    reject_unknown(doc, section, {"name", "sign_convention", "visibility"});
    QuantumState q;
    std::string conv = "mirrored";
    read(doc, section, "sign_convention", conv);
    q.sign_convention = parse_convention(conv);
    q.visibility = read_number(doc, section, "visibility", 1.0);
    m.kind = q;
  } else if (name == "malus_lhv") {
    reject_unknown(doc, section, {"name"});
    m.kind = MalusLhv{};
  } else if (name == "threshold_lhv") {
    reject_unknown(doc, section, {"name"});
    m.kind = ThresholdLhv{};
  } else if (name == "traveling_influence" && allow_influence) {
    reject_unknown(doc, section, {"name", "influence_speed", "informed", "uninformed"});
    TravelingInfluence t;
    if (doc.contains("influence_speed")) {
      const auto& v = doc.at("influence_speed");
      if (v.is_string() && v.get<std::string>() == "instant")
        t.influence_speed = InfluenceSpeed::instantaneous();
      else if (v.is_number())
        t.influence_speed = InfluenceSpeed::finite(v.get<double>());
      else
        throw validation_error("config key '" + section + ".influence_speed' must be \"instant\" or a number");
    }
    t.informed = std::make_shared<CorrelationModel>(
        parse_model_at(doc.value("informed", json::object()), section + ".informed", false));
    t.uninformed = std::make_shared<CorrelationModel>(parse_model_at(
        doc.value("uninformed", json{{"name", "malus_lhv"}}), section + ".uninformed", false));
    m.kind = t;
  } else {
    throw validation_error("unknown model name '" + name + "' in '" + section + "'");
  }
  validate_model(m);
  return m;
}

}  // namespace

SimulationConfig default_config() {
  SimulationConfig c;
  c.plan.apparatus = bench_apparatus();
  c.plan.detector = bench_detectors();
  c.plan.model.kind = QuantumState{};
  c.plan.pair_rate = 32594.0 * 19729.0 / 388.92;
  c.plan.integration_time_per_setting = 60.0;
  c.plan.rotation = true;
  c.plan.master_seed = 1;
  return c;
}

json load_config_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("config not found: '" + path + "'");
  try {
    return json::parse(f, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw validation_error("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw validation_error("override must look like key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw validation_error("malformed override key '" + key + "'");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

CorrelationModel parse_model(const json& doc) { return parse_model_at(doc, "model", true); }

json model_to_json(const CorrelationModel& model) {
  json j;
  j["name"] = model_name(model);
  if (const auto* q = std::get_if<QuantumState>(&model.kind)) {
    j["sign_convention"] = convention_name(q->sign_convention);
    j["visibility"] = q->visibility;
  } else if (const auto* t = std::get_if<TravelingInfluence>(&model.kind)) {
    if (t->influence_speed.is_instantaneous())
      j["influence_speed"] = "instant";
    else
      j["influence_speed"] = t->influence_speed.value();
    j["informed"] = model_to_json(*t->informed);
    j["uninformed"] = model_to_json(*t->uninformed);
  }
  return j;
}

SimulationConfig parse_config(const json& doc) {
  SimulationConfig cfg = default_config();
  reject_unknown(doc, "", {"apparatus", "detector", "model", "run"});

  if (doc.contains("apparatus")) {
    const auto& a = doc.at("apparatus");
    reject_unknown(a, "apparatus",
                   {"aperture_width", "mirror_radius", "rotation_rate", "facet_count", "fiber_length",
                    "fiber_group_index", "vacuum_light_speed"});
    auto& ap = cfg.plan.apparatus;
    ap.aperture_width = read_number(a, "apparatus", "aperture_width", ap.aperture_width);
    ap.mirror_radius = read_number(a, "apparatus", "mirror_radius", ap.mirror_radius);
    ap.rotation_rate = read_number(a, "apparatus", "rotation_rate", ap.rotation_rate);
    if (a.contains("facet_count")) {
      if (!a.at("facet_count").is_number_integer()) throw validation_error("apparatus.facet_count must be an integer");
      ap.facet_count = a.at("facet_count").get<int>();
    }
    ap.fiber_length = read_number(a, "apparatus", "fiber_length", ap.fiber_length);
    ap.fiber_group_index = read_number(a, "apparatus", "fiber_group_index", ap.fiber_group_index);
    ap.vacuum_light_speed = read_number(a, "apparatus", "vacuum_light_speed", ap.vacuum_light_speed);
  }

  if (doc.contains("detector")) {
    const auto& d = doc.at("detector");
    reject_unknown(d, "detector",
                   {"efficiency_alice", "efficiency_bob", "dark_rate_alice", "dark_rate_bob", "coincidence_window",
                    "accidental_convention"});
    auto& det = cfg.plan.detector;
    det.efficiency_alice = read_number(d, "detector", "efficiency_alice", det.efficiency_alice);
    det.efficiency_bob = read_number(d, "detector", "efficiency_bob", det.efficiency_bob);
    det.dark_rate_alice = read_number(d, "detector", "dark_rate_alice", det.dark_rate_alice);
    det.dark_rate_bob = read_number(d, "detector", "dark_rate_bob", det.dark_rate_bob);
    det.coincidence_window = read_number(d, "detector", "coincidence_window", det.coincidence_window);
    std::string conv = "double";
    read(d, "detector", "accidental_convention", conv);
    if (conv == "single")
      cfg.plan.accidental_convention = AccidentalConvention::single;
    else if (conv == "double")
      cfg.plan.accidental_convention = AccidentalConvention::double_window;
    else
      throw validation_error("detector.accidental_convention must be single or double");
  }

  if (doc.contains("model")) cfg.plan.model = parse_model(doc.at("model"));

  if (doc.contains("run")) {
    const auto& r = doc.at("run");
    reject_unknown(r, "run",
                   {"pair_rate", "integration_time", "rotation", "master_seed", "phase_offset", "variance",
                    "degradation_time"});
    auto& p = cfg.plan;
    p.pair_rate = read_number(r, "run", "pair_rate", p.pair_rate);
    p.integration_time_per_setting = read_number(r, "run", "integration_time", p.integration_time_per_setting);
    read(r, "run", "rotation", p.rotation);
    if (r.contains("master_seed")) {
      if (!r.at("master_seed").is_number_unsigned()) throw validation_error("run.master_seed must be a non-negative integer");
      p.master_seed = r.at("master_seed").get<std::uint64_t>();
    }
    p.phase_offset = read_number(r, "run", "phase_offset", p.phase_offset);
    std::string variance = "corrected";
    read(r, "run", "variance", variance);
    if (variance == "corrected")
      p.variance = VarianceModel::corrected;
    else if (variance == "raw_plus_accidental")
      p.variance = VarianceModel::raw_plus_accidental;
    else
      throw validation_error("run.variance must be corrected or raw_plus_accidental");
    cfg.degradation_time = read_number(r, "run", "degradation_time", cfg.degradation_time);
    if (!(cfg.degradation_time >= 0.0)) throw validation_error("run.degradation_time must be non-negative");
  }

  validate_plan(cfg.plan);
  return cfg;
}

json config_to_json(const SimulationConfig& cfg) {
  const auto& p = cfg.plan;
  json j;
  j["apparatus"] = {{"aperture_width", p.apparatus.aperture_width},
                    {"mirror_radius", p.apparatus.mirror_radius},
                    {"rotation_rate", p.apparatus.rotation_rate},
                    {"facet_count", p.apparatus.facet_count},
                    {"fiber_length", p.apparatus.fiber_length},
                    {"fiber_group_index", p.apparatus.fiber_group_index},
                    {"vacuum_light_speed", p.apparatus.vacuum_light_speed}};
  j["detector"] = {{"efficiency_alice", p.detector.efficiency_alice},
                   {"efficiency_bob", p.detector.efficiency_bob},
                   {"dark_rate_alice", p.detector.dark_rate_alice},
                   {"dark_rate_bob", p.detector.dark_rate_bob},
                   {"coincidence_window", p.detector.coincidence_window},
                   {"accidental_convention",
                    p.accidental_convention == AccidentalConvention::single ? "single" : "double"}};
  j["model"] = model_to_json(p.model);
  j["run"] = {{"pair_rate", p.pair_rate},
              {"integration_time", p.integration_time_per_setting},
              {"rotation", p.rotation},
              {"master_seed", p.master_seed},
              {"phase_offset", p.phase_offset},
              {"variance", p.variance == VarianceModel::corrected ? "corrected" : "raw_plus_accidental"},
              {"degradation_time", cfg.degradation_time}};
  return j;
}

InfluenceSpeed parse_speed(const std::string& text, double light_speed) {
  if (text == "instant" || text == "instantaneous" || text == "inf") return InfluenceSpeed::instantaneous();
  std::string body = text;
  double scale = 1.0;
  if (!body.empty() && body.back() == 'c') {
    body.pop_back();
    scale = light_speed;
    if (body.empty()) body = "1";
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(body, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != body.size() || !(v > 0.0) || !std::isfinite(v))
    throw validation_error("invalid speed '" + text + "': use instant, c, <factor>c or a positive number in m/s");
  return InfluenceSpeed::finite(v * scale);
}

}  // namespace bellgate
