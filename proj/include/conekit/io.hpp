#pragma once

#include <string>
#include <vector>

namespace conekit {

inline constexpr const char* kCsvSchemaLine = "# conekit-schema v1";

// 12 significant digits; inf / -inf / nan spelled out
std::string fmt(double v);

// header comment, column line, then rows joined by commas
std::string csv_table(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows);

}  // namespace conekit
