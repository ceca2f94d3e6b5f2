#include <doctest.h>

#include "bellgate/config.hpp"
#include "bellgate/error.hpp"

using namespace bellgate;
using nlohmann::json;

namespace {

const std::string config_dir = BELLGATE_CONFIG_DIR;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::numerical;
}

}  // namespace

TEST_CASE("empty document gives the bench defaults") {
  const auto cfg = parse_config(json::object());
  const auto def = default_config();
  CHECK(cfg.plan.apparatus.aperture_width == 1e-3);
  CHECK(cfg.plan.apparatus.facet_count == 34);
  CHECK(cfg.plan.pair_rate == doctest::Approx(32594.0 * 19729.0 / 388.92));
  CHECK(cfg.plan.pair_rate == def.plan.pair_rate);
  CHECK(cfg.plan.accidental_convention == AccidentalConvention::double_window);
  CHECK(model_name(cfg.plan.model) == "quantum");
  CHECK(cfg.plan.settings.size() == 16);
  CHECK(config_to_json(cfg) == config_to_json(def));
}

TEST_CASE("shipped configs parse") {
  const auto bench = parse_config(load_config_json(config_dir + "/bench.json"));
  CHECK(std::get<QuantumState>(bench.plan.model.kind).visibility == 0.82);
  CHECK(bench.plan.rotation);
  CHECK(bench.plan.master_seed == 20260101);

  const auto malus = parse_config(load_config_json(config_dir + "/malus_lhv.json"));
  CHECK(std::holds_alternative<MalusLhv>(malus.plan.model.kind));

  const auto ti = parse_config(load_config_json(config_dir + "/traveling_influence.json"));
  const auto& t = std::get<TravelingInfluence>(ti.plan.model.kind);
  CHECK(t.influence_speed.is_instantaneous());
  CHECK(std::holds_alternative<QuantumState>(t.informed->kind));
  CHECK(std::holds_alternative<MalusLhv>(t.uninformed->kind));
}

TEST_CASE("config echo round-trips") {
  for (const char* name : {"bench.json", "malus_lhv.json", "traveling_influence.json"}) {
    const auto cfg = parse_config(load_config_json(config_dir + "/" + name));
    const auto echo = config_to_json(cfg);
    CHECK(config_to_json(parse_config(echo)) == echo);
  }
}

TEST_CASE("dotted overrides") {
  json doc = json::object();
  apply_override(doc, "apparatus.aperture_width=2e-3");
  apply_override(doc, "run.rotation=false");
  apply_override(doc, "model.name=malus_lhv");
  apply_override(doc, "detector.accidental_convention=single");
  const auto cfg = parse_config(doc);
  CHECK(cfg.plan.apparatus.aperture_width == 2e-3);
  CHECK_FALSE(cfg.plan.rotation);
  CHECK(std::holds_alternative<MalusLhv>(cfg.plan.model.kind));
  CHECK(cfg.plan.accidental_convention == AccidentalConvention::single);
  CHECK(gate_geometry(cfg.plan.apparatus).aperture_time == doctest::Approx(2 * 4.681027738e-7).epsilon(1e-9));

  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), Error);
  CHECK_THROWS_AS(apply_override(doc, "=3"), Error);
  CHECK_THROWS_AS(apply_override(doc, "run..pair_rate=3"), Error);
}

TEST_CASE("invalid configs are validation errors naming the key") {
  auto bad = [](const json& doc) { return kind_of([&] { parse_config(doc); }); };
  CHECK(bad({{"apparatus", {{"aperture_widht", 1e-3}}}}) == ErrorKind::validation);
  CHECK(bad({{"extra", 1}}) == ErrorKind::validation);
  CHECK(bad({{"apparatus", {{"aperture_width", -1.0}}}}) == ErrorKind::validation);
  CHECK(bad({{"apparatus", {{"aperture_width", "wide"}}}}) == ErrorKind::validation);
  CHECK(bad({{"apparatus", {{"facet_count", 3.5}}}}) == ErrorKind::validation);
  CHECK(bad({{"detector", {{"efficiency_bob", 1.5}}}}) == ErrorKind::validation);
  CHECK(bad({{"detector", {{"accidental_convention", "triple"}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "pilot_wave"}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "quantum"}, {"visibility", 1.5}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "quantum"}, {"sign_convention", "sideways"}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "malus_lhv"}, {"visibility", 0.5}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "traveling_influence"}, {"influence_speed", -3}}}}) == ErrorKind::validation);
  CHECK(bad({{"model", {{"name", "traveling_influence"}, {"informed", {{"name", "traveling_influence"}}}}}}) ==
        ErrorKind::validation);
  CHECK(bad({{"run", {{"integration_time", 0}}}}) == ErrorKind::validation);
  CHECK(bad({{"run", {{"master_seed", -4}}}}) == ErrorKind::validation);
  CHECK(bad({{"run", {{"variance", "loose"}}}}) == ErrorKind::validation);
  CHECK(bad({{"run", {{"degradation_time", -1}}}}) == ErrorKind::validation);

  try {
    parse_config({{"apparatus", {{"aperture_widht", 1e-3}}}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("apparatus.aperture_widht") != std::string::npos);
  }
}

TEST_CASE("missing and malformed files") {
  CHECK(kind_of([] { load_config_json(config_dir + "/absent.json"); }) == ErrorKind::io);
  CHECK(kind_of([] { load_config_json(BELLGATE_DATA_DIR "/table2.csv"); }) == ErrorKind::validation);
}

TEST_CASE("traveling influence defaults and speeds") {
  const auto m = parse_model({{"name", "traveling_influence"}, {"influence_speed", 7e6}});
  const auto& t = std::get<TravelingInfluence>(m.kind);
  CHECK(t.influence_speed.value() == 7e6);
  CHECK(std::holds_alternative<MalusLhv>(t.uninformed->kind));
  CHECK(model_to_json(m)["influence_speed"] == 7e6);
}

TEST_CASE("speed strings") {
  const double c = 2.998e8;
  CHECK(parse_speed("instant", c).is_instantaneous());
  CHECK(parse_speed("inf", c).is_instantaneous());
  CHECK(parse_speed("c", c).value() == c);
  CHECK(parse_speed("0.5c", c).value() == doctest::Approx(0.5 * c));
  CHECK(parse_speed("6.96e6", c).value() == 6.96e6);
  for (const char* s : {"", "fast", "-3", "0", "3x", "nan", "0c"}) {
    INFO(s);
    CHECK(kind_of([&] { parse_speed(s, c); }) == ErrorKind::validation);
  }
}
