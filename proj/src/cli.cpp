#include "bellgate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bellgate/analysis.hpp"
#include "bellgate/apparatus.hpp"
#include "bellgate/causality.hpp"
#include "bellgate/config.hpp"
#include "bellgate/error.hpp"
#include "bellgate/experiment.hpp"
#include "bellgate/table_io.hpp"

namespace bellgate {

using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

SimulationConfig resolve_config(const CommonOptions& o, std::optional<std::uint64_t> seed = std::nullopt,
                                const std::string& rotation = {}) {
  json doc = o.config_path.empty() ? json::object() : load_config_json(o.config_path);
  for (const auto& s : o.overrides) apply_override(doc, s);
  if (seed) apply_override(doc, "run.master_seed=" + std::to_string(*seed));
  if (!rotation.empty()) apply_override(doc, std::string("run.rotation=") + (rotation == "on" ? "true" : "false"));
  return parse_config(doc);
}

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void write_line(std::ostream& out, const std::string& key, const std::string& value) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-32s %s\n", key.c_str(), value.c_str());
  out << buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot write '" + path.string() + "'");
  return f;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw io_error("cannot create output directory '" + p.string() + "': " + ec.message());
  return p;
}

// ---------------------------------------------------------------- geometry

int cmd_geometry(const CommonOptions& o, bool as_json, std::ostream& out) {
  const auto cfg = resolve_config(o);
  const auto g = gate_geometry(cfg.plan.apparatus);
  if (as_json) {
    out << json{{"aperture_time", g.aperture_time},
                {"duty_cycle", g.duty_cycle},
                {"gate_period", g.gate_period},
                {"fiber_delay", g.fiber_delay},
                {"flight_distance_during_gate", g.flight_distance_during_gate}}
               .dump(2)
        << '\n';
    return exit_ok;
  }
  write_line(out, "aperture_time (T_on)", fmt("%.4g s", g.aperture_time));
  write_line(out, "duty_cycle (D_th)", fmt("%.4g", g.duty_cycle));
  write_line(out, "gate_period", fmt("%.4g s", g.gate_period));
  write_line(out, "fiber_delay", fmt("%.4g s", g.fiber_delay));
  write_line(out, "flight_distance_during_gate", fmt("%.4g m", g.flight_distance_during_gate));
  write_line(out, "fiber_delay > aperture_time", g.fiber_delay > g.aperture_time ? "yes" : "no");
  return exit_ok;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string table;
  std::string accidentals;
  std::string records;
  double record_duration = 1.0;
  std::string variance = "corrected";
  std::string out_dir;
  std::string format = "text";
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  if (o.table.empty() && o.records.empty()) throw validation_error("analyze needs a count table or --records");

  if (!o.records.empty()) {
    const auto rows = load_records(o.records, o.record_duration);
    const auto rep = degradation_ratio(find_record(rows, "with_rotation"), find_record(rows, "no_rotation"),
                                       find_record(rows, "dark"));
    static constexpr const char* names[] = {"singles_alice", "singles_bob", "coincidences"};
    if (o.format == "csv") {
      write_records(out, rows, &rep);
    } else {
      for (std::size_t i = 0; i < 3; ++i)
        write_line(out, std::string("degradation ") + names[i],
                   fmt("%.4f", rep.ratio[i]) + " +/- " + fmt("%.4f", rep.sigma[i]));
    }
    if (!o.out_dir.empty()) {
      auto f = open_output(prepare_out_dir(o.out_dir) / "table1.csv");
      write_records(f, rows, &rep);
    }
    if (o.table.empty()) return exit_ok;
  }

  const CountTable16 table = o.accidentals.empty() ? load_count_table(o.table) : load_count_table(o.table, o.accidentals);
  VarianceModel vm = VarianceModel::corrected;
  if (o.variance == "raw_plus_accidental")
    vm = VarianceModel::raw_plus_accidental;
  else if (o.variance != "corrected")
    throw validation_error("--variance must be corrected or raw_plus_accidental");
  const auto res = chsh_S(table, {}, vm);
  if (!std::isfinite(res.S) || !std::isfinite(res.S_sigma)) throw numerical_error("CHSH estimate is not finite");

  if (o.format == "csv")
    write_chsh_csv(out, res);
  else
    write_chsh_text(out, res);
  if (!o.out_dir.empty()) {
    const auto dir = prepare_out_dir(o.out_dir);
    auto c = open_output(dir / "chsh.csv");
    write_chsh_csv(c, res);
    auto t = open_output(dir / "chsh.txt");
    write_chsh_text(t, res);
  }
  return exit_ok;
}

// ---------------------------------------------------------------- simulate

json chsh_json(const ChshRun& run) {
  json corr = json::array();
  const ChshSettings s;
  const std::array<std::pair<double, double>, 4> at = {{{s.a, s.b}, {s.a, s.b_prime}, {s.a_prime, s.b}, {s.a_prime, s.b_prime}}};
  for (std::size_t i = 0; i < 4; ++i)
    corr.push_back({{"alice_angle", at[i].first},
                    {"bob_angle", at[i].second},
                    {"E", run.result.correlations[i].value},
                    {"sigma", run.result.correlations[i].sigma}});
  json cells = json::array();
  for (const auto& c : run.cells)
    cells.push_back({{"alice_angle", c.setting->alice_angle},
                     {"bob_angle", c.setting->bob_angle},
                     {"singles_alice", c.singles_alice},
                     {"singles_bob", c.singles_bob},
                     {"coincidences", c.coincidences},
                     {"accidentals", run.table.accidental(c.setting->alice_angle, c.setting->bob_angle)}});
  return {{"correlations", corr}, {"S", run.result.S}, {"S_sigma", run.result.S_sigma}, {"cells", cells}};
}

std::vector<LabeledRecord> degradation_rows(const DegradationRun& d) {
  return {{"dark", d.dark.record()}, {"no_rotation", d.without_rotation.record()}, {"with_rotation", d.with_rotation.record()}};
}

int cmd_simulate(const CommonOptions& o, std::optional<std::uint64_t> seed, const std::string& rotation,
                 const std::string& out_dir, std::ostream& out) {
  const auto cfg = resolve_config(o, seed, rotation);
  const auto dir = prepare_out_dir(out_dir);

  const auto run = run_chsh_experiment(cfg.plan);
  if (!std::isfinite(run.result.S)) throw numerical_error("simulated CHSH estimate is not finite");
  {
    auto f = open_output(dir / "counts.csv");
    write_count_table(f, run.table);
    auto c = open_output(dir / "chsh.csv");
    write_chsh_csv(c, run.result);
  }

  json doc;
  doc["config"] = config_to_json(cfg);
  doc["seed"] = cfg.plan.master_seed;
  doc["chsh"] = chsh_json(run);

  std::optional<DegradationRun> deg;
  if (cfg.degradation_time > 0.0) {
    deg = run_degradation_experiment(cfg.plan, cfg.degradation_time);
    auto f = open_output(dir / "table1.csv");
    write_records(f, degradation_rows(*deg), &deg->report);
    const auto g = gate_geometry(cfg.plan.apparatus);
    doc["degradation"] = {{"duration", cfg.degradation_time},
                          {"ratio", deg->report.ratio},
                          {"sigma", deg->report.sigma},
                          {"duty_cycle", g.duty_cycle},
                          {"counts",
                           {{"dark", {deg->dark.singles_alice, deg->dark.singles_bob, deg->dark.coincidences}},
                            {"no_rotation",
                             {deg->without_rotation.singles_alice, deg->without_rotation.singles_bob,
                              deg->without_rotation.coincidences}},
                            {"with_rotation",
                             {deg->with_rotation.singles_alice, deg->with_rotation.singles_bob,
                              deg->with_rotation.coincidences}}}}};
  }
  {
    auto f = open_output(dir / "results.json");
    f << doc.dump(2) << '\n';
  }

  out << "model " << model_name(cfg.plan.model) << ", rotation " << (cfg.plan.rotation ? "on" : "off") << ", seed "
      << cfg.plan.master_seed << '\n';
  write_chsh_text(out, run.result);
  if (deg) {
    static constexpr const char* names[] = {"singles_alice", "singles_bob", "coincidences"};
    for (std::size_t i = 0; i < 3; ++i)
      write_line(out, std::string("degradation ") + names[i],
                 fmt("%.4f", deg->report.ratio[i]) + " +/- " + fmt("%.4f", deg->report.sigma[i]));
  }
  out << "wrote " << (dir / "results.json").string() << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------- causality

json report_json(const CausalityReport& r) {
  json j;
  j["influence_speed"] = r.influence_speed.is_instantaneous() ? json("instant") : json(r.influence_speed.value());
  j["influence_arrival_at_source"] = r.influence_arrival_at_source;
  j["informed_emission_window"] = {r.informed_emission_window.start, r.informed_emission_window.end};
  j["informed_arrival_window_at_slit"] = {r.informed_arrival_window_at_slit.start, r.informed_arrival_window_at_slit.end};
  j["earliest_open_overlap"] = r.earliest_open_overlap ? json(*r.earliest_open_overlap) : json(nullptr);
  j["pass_fraction"] = r.pass_fraction;
  j["isolation_margin"] = r.isolation_margin;
  return j;
}

void print_report(std::ostream& out, const CausalityReport& r) {
  write_line(out, "influence_speed",
             r.influence_speed.is_instantaneous() ? "instant" : fmt("%.10g m/s", r.influence_speed.value()));
  write_line(out, "influence_arrival_at_source", fmt("%.4g s", r.influence_arrival_at_source));
  write_line(out, "informed_emission_window",
             "[" + fmt("%.4g", r.informed_emission_window.start) + ", " + fmt("%.4g", r.informed_emission_window.end) + "] s");
  write_line(out, "informed_arrival_window_at_slit",
             "[" + fmt("%.4g", r.informed_arrival_window_at_slit.start) + ", " +
                 fmt("%.4g", r.informed_arrival_window_at_slit.end) + "] s");
  write_line(out, "earliest_open_overlap",
             r.earliest_open_overlap ? std::to_string(*r.earliest_open_overlap) : std::string("none"));
  write_line(out, "pass_fraction", fmt("%.6g", r.pass_fraction));
  write_line(out, "isolation_margin", fmt("%.4g s", r.isolation_margin));
  write_line(out, "verdict", r.pass_fraction > 0.0 ? "informed photons can pass the gate" : "isolated");
}

struct CausalityOptions {
  std::string speed = "instant";
  bool sweep = false;
  long long max_windows = 5;
  bool as_json = false;
};

int cmd_causality(const CommonOptions& o, const CausalityOptions& c, std::ostream& out) {
  const auto cfg = resolve_config(o);
  const auto& ap = cfg.plan.apparatus;
  const auto g = gate_geometry(ap);
  const double photon_speed = ap.fiber_light_speed();

  if (!c.sweep) {
    const auto rep = influence_window_analysis(g, ap.fiber_length, parse_speed(c.speed, ap.vacuum_light_speed), photon_speed);
    if (c.as_json)
      out << report_json(rep).dump(2) << '\n';
    else
      print_report(out, rep);
    return exit_ok;
  }

  const auto res = resonant_influence_speeds(g, ap.fiber_length, photon_speed, c.max_windows);
  if (c.as_json) {
    json arr = json::array();
    for (const auto& r : res)
      arr.push_back({{"window", r.window},
                     {"lower", r.lower},
                     {"center", r.center},
                     {"upper", std::isfinite(r.upper) ? json(r.upper) : json("inf")}});
    out << json{{"resonances", arr}}.dump(2) << '\n';
    return exit_ok;
  }
  out << "resonant influence speeds (gate windows 1.." << c.max_windows << "):\n";
  if (res.empty()) out << "  none\n";
  for (const auto& r : res) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "  window %-5lld %.6e < v < %s m/s   center %.10g m/s\n", r.window, r.lower,
                  std::isfinite(r.upper) ? fmt("%.6e", r.upper).c_str() : "inf", r.center);
    out << buf;
  }
  const auto instant = influence_window_analysis(g, ap.fiber_length, InfluenceSpeed::instantaneous(), photon_speed);
  write_line(out, "instantaneous pass_fraction", fmt("%.6g", instant.pass_fraction));
  return exit_ok;
}

int exit_code_for(ErrorKind k) { return static_cast<int>(k); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gated two-channel Bell-CHSH simulator and analysis toolkit", "bellgate"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Cap on parallel worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Run config (JSON)");
    sub->add_option("--set", common.overrides, "Override a config key: section.key=value")->allow_extra_args(false);
  };

  auto* geometry = app.add_subcommand("geometry", "Gate timing derived from the apparatus");
  add_common(geometry);
  bool geometry_json = false;
  geometry->add_flag("--json", geometry_json, "Print JSON");

  auto* analyze = app.add_subcommand("analyze", "CHSH estimate from a measured 16-cell count table");
  AnalyzeOptions ao;
  analyze->add_option("table", ao.table, "Count table CSV ('count-accidental' cells)");
  analyze->add_option("--accidentals", ao.accidentals, "Separate accidentals CSV (two-file variant)");
  analyze->add_option("--records", ao.records, "Singles/coincidence records CSV (dark, no_rotation, with_rotation)");
  analyze->add_option("--record-duration", ao.record_duration, "Seconds behind each record row")->check(CLI::PositiveNumber);
  analyze->add_option("--variance", ao.variance, "corrected | raw_plus_accidental");
  analyze->add_option("--out", ao.out_dir, "Directory for report files");
  analyze->add_option("--format", ao.format, "text | csv")->check(CLI::IsMember({"text", "csv"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the 16 settings and the degradation measurement");
  add_common(simulate);
  std::optional<std::uint64_t> seed;
  std::string rotation;
  std::string sim_out = ".";
  simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--rotation", rotation, "on | off")->check(CLI::IsMember({"on", "off"}));
  simulate->add_option("--out", sim_out, "Output directory");

  auto* causality = app.add_subcommand("causality", "Can a traveling detector-to-source influence pass the gate?");
  add_common(causality);
  CausalityOptions co;
  causality->add_option("--speed", co.speed, "instant, c, <factor>c or m/s");
  causality->add_flag("--sweep", co.sweep, "List resonant influence speeds");
  causality->add_option("--max-windows", co.max_windows, "Gate windows examined by --sweep")->check(CLI::PositiveNumber);
  causality->add_flag("--json", co.as_json, "Print JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#endif

  try {
    if (*geometry) return cmd_geometry(common, geometry_json, out);
    if (*analyze) return cmd_analyze(ao, out);
    if (*simulate) return cmd_simulate(common, seed, rotation, sim_out, out);
    if (*causality) return cmd_causality(common, co, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
  return exit_config;
}

}  // namespace bellgate
