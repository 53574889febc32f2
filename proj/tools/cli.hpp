#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rankmetrics::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path profiles;
  std::filesystem::path out = ".";
  std::optional<std::string> dataset;
  bool strict = true;
  std::string level = "system";
  double threshold = 0.8;
  bool standardize = false;
  double resolution = 1.0;
  std::uint64_t seed = 0;
  std::size_t folds = 5;
  std::vector<double> alphas;
  std::string regressor = "gbt";
  double lasso_alpha = 1e-3;
  std::size_t rounds = 200;
  std::size_t depth = 3;
  double learning_rate = 0.1;
  std::string mode = "raw";
  std::vector<std::string> targets;
  std::size_t samples = 10000;
  std::size_t max_voters = 7;
  std::size_t max_items = 6;
  // synth
  std::size_t systems = 10;
  std::size_t utterances = 100;
  std::size_t humans = 5;
  std::size_t automatics = 8;

  // Canonical "key=value" listing of everything that affects outputs (the
  // output directory excluded).
  std::string canonical() const;
  std::string hash() const;
};

std::string_view version();

// Runs one subcommand. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankmetrics::cli
