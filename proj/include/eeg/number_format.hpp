#pragma once

#include <string>
#include <string_view>

namespace eeg {

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole field; false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& value);

}  // namespace eeg
