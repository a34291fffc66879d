#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rrb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

/// Runs one command line. Machine output goes to `out` (or files),
/// diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "lo:hi:n" -> n evenly spaced values, both ends included.
std::vector<double> parse_range(const std::string& spec);
/// "1,2,4" -> {1, 2, 4}
std::vector<int> parse_lengths(const std::string& spec);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace rrb::cli
