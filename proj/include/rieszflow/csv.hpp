#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rieszflow {

/// "%.17g": lossless decimal form of a double.
std::string format_double(double v);

/// Header line plus one line per row, comma separated, values via format_double.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rieszflow
