#pragma once

#include <string>
#include <vector>

namespace jostfit {

// Shortest text that round-trips the double exactly.
std::string fmt_double(double x);
double parse_double(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace jostfit
