#include <ostream>

#include "sirmeta/cli.hpp"
#include "sirmeta/error.hpp"

namespace sirmeta::cli {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvReport::CsvReport(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvReport::add_row(std::vector<std::string> row) {
  if (row.size() != columns_.size()) throw InputError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvReport::add_metadata(std::string key, std::string value) {
  for (char& c : value) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  metadata_.emplace_back(std::move(key), std::move(value));
}

void CsvReport::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  for (const auto& [k, v] : metadata_) out << "# " << k << '=' << v << '\n';
}

}  // namespace sirmeta::cli
