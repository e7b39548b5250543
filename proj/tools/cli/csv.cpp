#include "cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "pairab/errors.hpp"

namespace pairab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void malformed(const std::string& origin, std::size_t row,
                            const std::string& column, const std::string& what) {
  throw Error(Errc::MalformedRow, origin + " row " + std::to_string(row) + ", column " +
                                      column + ": " + what);
}

std::optional<double> parse_outcome(const std::string& field, const std::string& origin,
                                    std::size_t row, const std::string& column) {
  if (field.empty() || field == "NA") return std::nullopt;
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    malformed(origin, row, column, "'" + field + "' is not a number");
  }
  if (used != field.size())
    malformed(origin, row, column, "'" + field + "' is not a number");
  return value;
}

int parse_design(const std::string& field, const std::string& origin, std::size_t row,
                 const std::string& column) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    malformed(origin, row, column, "'" + field + "' is not a design level");
  }
  if (used != field.size() || (value != -1.0 && value != 1.0))
    malformed(origin, row, column, "'" + field + "' must be -1 or +1");
  return static_cast<int>(value);
}

}  // namespace

std::vector<UnitRecord> parse_csv_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::MissingHeader, origin + " is empty");
  if (trim(line) != "unit_id,y1,x1,y2,x2")
    throw Error(Errc::MissingHeader,
                origin + ": expected header 'unit_id,y1,x1,y2,x2', got '" + trim(line) + "'");

  std::vector<UnitRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 5)
      malformed(origin, row, "-", "expected 5 fields, got " + std::to_string(f.size()));
    UnitRecord r;
    r.unit_id = f[0];
    r.y1 = parse_outcome(f[1], origin, row, "y1");
    r.x1 = parse_design(f[2], origin, row, "x1");
    r.y2 = parse_outcome(f[3], origin, row, "y2");
    r.x2 = parse_design(f[4], origin, row, "x2");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<UnitRecord> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), path);
}

std::string dataset_to_csv(const PairedDataset& ds) {
  std::string out = "unit_id,y1,x1,y2,x2\n";
  char num[64];
  for (Index i = 0; i < ds.size(); ++i) {
    out += ds.unit_id(i);
    out += ',';
    if (ds.has_y1(i)) {
      std::snprintf(num, sizeof num, "%.17g", ds.y1()[i]);
      out += num;
    } else {
      out += "NA";
    }
    out += ',';
    out += ds.x1()[i] > 0 ? "1" : "-1";
    out += ',';
    if (ds.has_y2(i)) {
      std::snprintf(num, sizeof num, "%.17g", ds.y2()[i]);
      out += num;
    } else {
      out += "NA";
    }
    out += ',';
    out += ds.x2()[i] > 0 ? "1" : "-1";
    out += '\n';
  }
  return out;
}

}  // namespace pairab::cli
