#pragma once

#include <string>
#include <string_view>

namespace mcrank {

// Shortest decimal form that round-trips to the same double ("inf" for
// infinity).
std::string format_double(double value);

// RFC 4180 field quoting: wraps in double quotes when the field holds a comma,
// quote, CR or LF, doubling embedded quotes.
std::string csv_field(std::string_view field);

}  // namespace mcrank
