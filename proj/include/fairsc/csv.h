#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairsc {

// %.12g-style rendering that ignores the process locale.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

std::string csv_row(const std::vector<std::string>& fields);

}  // namespace fairsc
