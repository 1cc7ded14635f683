#pragma once

#include <string>
#include <vector>

namespace toporad {

/// All numeric text output uses 9 significant digits so golden files are
/// stable across runs.
constexpr int kOutputDigits = 9;

std::string g9(double value);
std::string g9(long value);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

/// Strict numeric parsing; throws IoError with the context on garbage.
double parse_double(const std::string& token, const std::string& context);
long parse_long(const std::string& token, const std::string& context);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace toporad
