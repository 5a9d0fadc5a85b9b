#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enthom::csv {

// All numeric output is written with 12 significant digits.
std::string format(double v);

std::vector<std::string> split_line(const std::string& line);

// std::stod with location info in the error message.
double parse_double(const std::string& token, std::size_t line_no);

// Reads every non-empty line, split on commas. Carriage returns are
// stripped so files from other platforms parse the same way.
std::vector<std::vector<std::string>> read_table(std::istream& is);

}  // namespace enthom::csv
