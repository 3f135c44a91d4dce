#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "superres/cli.hpp"

namespace superres::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::general, 17);
  return std::string(buffer.data(), result.ptr);
}

namespace {

std::string csv_cell(const Json& cell) {
  if (cell.is_number_float()) return format_number(cell.get<double>());
  if (cell.is_number_integer() || cell.is_number_unsigned()) return cell.dump();
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_null()) return "";
  return cell.dump();
}

}  // namespace

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    out << (i ? "," : "") << data.columns[i];
  }
  out << '\n';
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void write_json(const Dataset& data, const RunConfig& config, std::ostream& out) {
  Json doc;
  doc["config"] = to_json(config);
  auto records = Json::array();
  for (const auto& row : data.rows) {
    Json record = Json::object();
    for (std::size_t i = 0; i < row.size() && i < data.columns.size(); ++i) {
      record[data.columns[i]] = row[i];
    }
    records.push_back(std::move(record));
  }
  doc["records"] = std::move(records);
  doc["summary"] = data.summary;
  out << doc.dump(2) << '\n';
}

}  // namespace superres::cli
