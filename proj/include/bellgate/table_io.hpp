#pragma once

// CSV formats for count tables, singles/coincidence records and CHSH reports.
//
// Count table (one file):
//   bob_angle,0,45,90,135
//   22.5,226-5,85-4,42-4,184-4
//   ...
// Each cell is "count-accidental"; a bare "count" means zero accidentals.
// The two-file variant has the same layout with plain numbers in each file.
//
// Singles/coincidence records:
//   label,singles_alice_per_s,singles_bob_per_s,coincidences_per_s
//   dark,1300,600,0.08

#include <iosfwd>
#include <string>
#include <vector>

#include "bellgate/analysis.hpp"

namespace bellgate {

CountTable16 parse_count_table(std::istream& in);
CountTable16 parse_count_table(std::istream& counts, std::istream& accidentals);

/// File variants; a missing file is an io Error.
CountTable16 load_count_table(const std::string& path);
CountTable16 load_count_table(const std::string& counts_path, const std::string& accidentals_path);

void write_count_table(std::ostream& out, const CountTable16& table);

struct LabeledRecord {
  std::string label;
  CountRecord record;
};

/// Rows are rates per second; `duration` is attached to every record so
/// Poisson uncertainties can be propagated.
std::vector<LabeledRecord> parse_records(std::istream& in, double duration = 1.0);
std::vector<LabeledRecord> load_records(const std::string& path, double duration = 1.0);
const CountRecord& find_record(const std::vector<LabeledRecord>& rows, const std::string& label);

/// Dark / no-rotation / with-rotation rate layout. Appends a "degradation" row when `degradation` is given.
void write_records(std::ostream& out, const std::vector<LabeledRecord>& rows,
                   const DegradationReport* degradation = nullptr);

void write_chsh_csv(std::ostream& out, const ChshResult& result, const ChshSettings& settings = {});
void write_chsh_text(std::ostream& out, const ChshResult& result, const ChshSettings& settings = {});

/// printf-style "%.10g"; used for every numeric field so outputs are byte-stable.
std::string format_number(double x);

}  // namespace bellgate
