#include "rankmetrics/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "rankmetrics/error.hpp"

namespace rankmetrics {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::EmptyAfterDrop: return "EmptyAfterDrop";
    case ErrorCode::MixedDatasets: return "MixedDatasets";
    case ErrorCode::DegenerateSystems: return "DegenerateSystems";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NoFeatures: return "NoFeatures";
    case ErrorCode::TargetNotHuman: return "TargetNotHuman";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::NoOtherHumans: return "NoOtherHumans";
    case ErrorCode::MissingReleaseDate: return "MissingReleaseDate";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::NumericalFailure, "cannot format number");
  return std::string(buffer.data(), end);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which some exporters emit.
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ptr != text.data() + text.size()) return std::nullopt;
  if (ec == std::errc::result_out_of_range) {
    // Underflow flushes to zero, overflow surfaces as a non-finite score.
    const auto exp = text.find_first_of("eE");
    const bool underflow = exp != std::string_view::npos && exp + 1 < text.size() && text[exp + 1] == '-';
    const double sign = text.front() == '-' ? -1.0 : 1.0;
    return underflow ? 0.0 * sign : HUGE_VAL * sign;
  }
  if (ec != std::errc()) return std::nullopt;
  return value;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

bool is_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  const int month = (text[5] - '0') * 10 + (text[6] - '0');
  const int day = (text[8] - '0') * 10 + (text[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace rankmetrics
