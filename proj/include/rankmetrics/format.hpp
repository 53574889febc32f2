#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rankmetrics {

// Shortest decimal that round-trips, '.' separator regardless of locale.
std::string format_double(double value);

// Locale-independent strict parse; the whole field must be consumed.
std::optional<double> parse_double(std::string_view text);

// FNV-1a, stable across platforms (std::hash is not).
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t value);

bool is_iso_date(std::string_view text);

}  // namespace rankmetrics
