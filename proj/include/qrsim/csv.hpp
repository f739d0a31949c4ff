#pragma once

#include <string>
#include <vector>

namespace qrsim {

/// Shortest representation that parses back to the identical double (%.17g).
std::string csv_num(double v);

std::string csv_join(const std::vector<std::string>& cells);

/// Splits one line on commas. Fields here never contain commas or quotes, so
/// no escaping dialect is involved.
std::vector<std::string> csv_split(const std::string& line);

}  // namespace qrsim
