#include "bellgate/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw validation_error("malformed " + what + ": '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw validation_error("malformed count: '" + s + "'");
  return std::stoull(s);
}

/// Non-empty, non-comment lines.
std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

using CellGrid = std::array<std::array<std::string, 4>, 4>;  // [alice][bob]

/// Reads the 5-line grid and checks both angle axes.
CellGrid read_grid(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.size() != 5) throw validation_error("count table must have a header row and 4 data rows");
  const auto header = split(lines[0], ',');
  if (header.size() != 5 || header[0] != "bob_angle")
    throw validation_error("count table header must be 'bob_angle,0,45,90,135'");
  for (std::size_t i = 0; i < 4; ++i)
    if (std::abs(parse_double(header[i + 1], "alice angle") - alice_grid[i]) > 1e-9)
      throw validation_error("count table alice angles must be 0,45,90,135");

  CellGrid grid;
  for (std::size_t r = 0; r < 4; ++r) {
    const auto row = split(lines[r + 1], ',');
    if (row.size() != 5) throw validation_error("count table row " + std::to_string(r + 1) + " must have 5 fields");
    if (std::abs(parse_double(row[0], "bob angle") - bob_grid[r]) > 1e-9)
      throw validation_error("count table bob angles must be 22.5,67.5,112.5,157.5");
    for (std::size_t c = 0; c < 4; ++c) grid[c][r] = row[c + 1];
  }
  return grid;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open '" + path + "'");
  return f;
}

std::string normalize_label(std::string s) {
  s = trim(s);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return c == ' ' ? '_' : std::tolower(c); });
  if (s == "dark_counts") s = "dark";
  return s;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

CountTable16 parse_count_table(std::istream& in) {
  const auto grid = read_grid(in);
  CountTable16 t;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const std::string& cell = grid[a][b];
      // Counts are unsigned integers, so the first '-' separates the accidental.
      const auto dash = cell.find('-');
      t.counts[a][b] = parse_count(trim(cell.substr(0, dash)));
      t.accidentals[a][b] = dash == std::string::npos ? 0.0 : parse_double(trim(cell.substr(dash + 1)), "accidental");
    }
  }
  validate_table(t);
  return t;
}

CountTable16 parse_count_table(std::istream& counts, std::istream& accidentals) {
  const auto cg = read_grid(counts);
  const auto ag = read_grid(accidentals);
  CountTable16 t;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      t.counts[a][b] = parse_count(cg[a][b]);
      t.accidentals[a][b] = parse_double(ag[a][b], "accidental");
    }
  }
  validate_table(t);
  return t;
}

CountTable16 load_count_table(const std::string& path) {
  auto f = open_input(path);
  return parse_count_table(f);
}

CountTable16 load_count_table(const std::string& counts_path, const std::string& accidentals_path) {
  auto c = open_input(counts_path);
  auto a = open_input(accidentals_path);
  return parse_count_table(c, a);
}

void write_count_table(std::ostream& out, const CountTable16& table) {
  out << "bob_angle";
  for (double a : table.alice_angles) out << ',' << format_number(a);
  out << '\n';
  for (std::size_t b = 0; b < 4; ++b) {
    out << format_number(table.bob_angles[b]);
    for (std::size_t a = 0; a < 4; ++a)
      out << ',' << table.counts[a][b] << '-' << format_number(table.accidentals[a][b]);
    out << '\n';
  }
}

std::vector<LabeledRecord> parse_records(std::istream& in, double duration) {
  if (!(duration > 0.0)) throw validation_error("record duration must be positive");
  const auto lines = read_lines(in);
  if (lines.empty() || split(lines[0], ',').at(0) != "label")
    throw validation_error("record file must start with 'label,singles_alice_per_s,singles_bob_per_s,coincidences_per_s'");
  std::vector<LabeledRecord> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 4) throw validation_error("record row " + std::to_string(i) + " must have 4 fields");
    const double sa = parse_double(f[1], "singles rate");
    const double sb = parse_double(f[2], "singles rate");
    const double c = parse_double(f[3], "coincidence rate");
    if (sa < 0 || sb < 0 || c < 0) throw validation_error("rates must be non-negative");
    rows.push_back({normalize_label(f[0]), CountRecord{sa * duration, sb * duration, c * duration, duration}});
  }
  return rows;
}

std::vector<LabeledRecord> load_records(const std::string& path, double duration) {
  auto f = open_input(path);
  return parse_records(f, duration);
}

const CountRecord& find_record(const std::vector<LabeledRecord>& rows, const std::string& label) {
  const auto key = normalize_label(label);
  for (const auto& r : rows)
    if (r.label == key) return r.record;
  throw validation_error("record '" + label + "' not found");
}

void write_records(std::ostream& out, const std::vector<LabeledRecord>& rows, const DegradationReport* degradation) {
  out << "label,singles_alice_per_s,singles_bob_per_s,coincidences_per_s\n";
  for (const auto& r : rows) {
    const auto x = r.record.rates();
    out << r.label << ',' << format_number(x.singles_alice) << ',' << format_number(x.singles_bob) << ','
        << format_number(x.coincidences) << '\n';
  }
  if (degradation) {
    out << "degradation," << format_number(degradation->ratio[0]) << ',' << format_number(degradation->ratio[1]) << ','
        << format_number(degradation->ratio[2]) << '\n';
    out << "degradation_sigma," << format_number(degradation->sigma[0]) << ','
        << format_number(degradation->sigma[1]) << ',' << format_number(degradation->sigma[2]) << '\n';
  }
}

namespace {

std::array<std::string, 4> correlation_labels(const ChshSettings& s) {
  auto pair = [](double a, double b) { return "E(" + format_number(a) + "," + format_number(b) + ")"; };
  return {pair(s.a, s.b), pair(s.a, s.b_prime), pair(s.a_prime, s.b), pair(s.a_prime, s.b_prime)};
}

}  // namespace

void write_chsh_csv(std::ostream& out, const ChshResult& r, const ChshSettings& s) {
  const auto labels = correlation_labels(s);
  out << "quantity,value,sigma\n";
  for (std::size_t i = 0; i < 4; ++i)
    out << '"' << labels[i] << "\"," << format_number(r.correlations[i].value) << ','
        << format_number(r.correlations[i].sigma) << '\n';
  out << "S," << format_number(r.S) << ',' << format_number(r.S_sigma) << '\n';
}

void write_chsh_text(std::ostream& out, const ChshResult& r, const ChshSettings& s) {
  const auto labels = correlation_labels(s);
  char buf[128];
  for (std::size_t i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%-14s = %+.4f +/- %.4f\n", labels[i].c_str(), r.correlations[i].value,
                  r.correlations[i].sigma);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-14s = %.4f +/- %.4f\n", "S", r.S, r.S_sigma);
  out << buf;
  if (r.S_sigma > 0.0) {
    std::snprintf(buf, sizeof buf, "(S - 2) / sigma = %+.2f\n", (r.S - 2.0) / r.S_sigma);
    out << buf;
  }
}

}  // namespace bellgate
