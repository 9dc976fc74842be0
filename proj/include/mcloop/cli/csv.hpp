#pragma once

// RFC 4180 tables with locale-independent numbers printed at 17 significant
// digits, so that a value read back compares equal to the one written.

#include <filesystem>
#include <string>
#include <vector>

#include "mcloop/analysis.hpp"

namespace mcloop::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double x);
std::string to_csv(const CsvTable& table);
// Throws Error(ConfigError) on a malformed table.
CsvTable parse_csv(const std::string& text);

// omega_rad_s, re, im, gain_db, phase_rad.
CsvTable gain_curve_table(const GainCurve& curve);

// Writes through a temporary file in the same directory and renames it into
// place, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace mcloop::cli
