#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drlids {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// Strict full-string parse; rejects trailing garbage and empty input.
std::optional<double> parse_double(std::string_view s);

/// Splits one CSV line on commas, honoring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape_csv_field(std::string_view field);

std::string_view trim(std::string_view s);

}  // namespace drlids
