#pragma once

// CSV plumbing (RFC-4180-style quoting, header row) and round-trip-exact
// number formatting shared by the file writers.

#include <cstdint>
#include <string>
#include <vector>

namespace fpso::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
std::string format_int(std::int64_t value);

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fpso::io
