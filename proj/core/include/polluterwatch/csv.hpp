#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pw::csv {

// RFC-4180-ish: fields containing comma, quote or newline are quoted;
// embedded quotes doubled.
std::string escape(std::string_view field);

// Splits one line into fields, honouring quotes. Unterminated quotes are
// tolerated (field runs to end of line).
std::vector<std::string> split_line(std::string_view line);

std::string join(const std::vector<std::string>& fields);

}  // namespace pw::csv
