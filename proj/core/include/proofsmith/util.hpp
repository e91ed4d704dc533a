#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace proofsmith {

/// FNV-1a, 64-bit. Stable across platforms and runs.
std::uint64_t fnv1a64(const std::string& data);

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string hash_hex(const std::string& data);

std::string read_file(const std::string& path);  // throws std::runtime_error
void write_file(const std::string& path, const std::string& content);

std::string trim(const std::string& s);
std::vector<std::string> split_lines(const std::string& s);

/// Whitespace runs collapsed to single spaces, ends trimmed.
std::string collapse_ws(const std::string& s);

/// "%.2f"-style formatting without locale surprises.
std::string format_double(double v, int decimals);

}  // namespace proofsmith
