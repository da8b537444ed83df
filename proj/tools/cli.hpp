#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace qfc::cli {

/// Parses "512ps", "200ns", "1.5us", "2ms", "1s" or a bare number of picoseconds.
/// Throws std::invalid_argument on malformed text or a non-integer picosecond count.
std::int64_t parse_duration_ps(std::string_view text);

/// Entry point of the qfcsim tool. Returns 0 on success, 2 on usage or configuration
/// errors and 1 on runtime errors, each with a one-line diagnostic on `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfc::cli
