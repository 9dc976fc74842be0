#include "mcloop/cli/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "mcloop/errors.hpp"

namespace mcloop::cli {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                               std::chars_format::general, 17);
  return std::string(buf.data(), r.ptr);
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, "csv: empty input");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::ConfigError, "csv: row width differs from header");
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      double x = 0.0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (r.ec != std::errc() || r.ptr != cell.data() + cell.size()) {
        throw Error(ErrorKind::ConfigError, "csv: not a number: '" + cell + "'");
      }
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable gain_curve_table(const GainCurve& curve) {
  CsvTable t;
  t.header = {"omega_rad_s", "re", "im", "gain_db", "phase_rad"};
  t.rows.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    t.rows.push_back({curve.omegas[i], curve.values[i].real(), curve.values[i].imag(),
                      curve.gain_db[i], curve.phase_rad[i]});
  }
  return t;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

}  // namespace mcloop::cli
