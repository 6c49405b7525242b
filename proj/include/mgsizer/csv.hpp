#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mgsizer::csv {

// Shortest round-trip decimal representation.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(std::string_view field);

}  // namespace mgsizer::csv
