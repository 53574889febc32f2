#include "rankmetrics/synthetic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rankmetrics/error.hpp"
#include "rankmetrics/random.hpp"

namespace rankmetrics {

ScoreTensor generate_synthetic(const SyntheticConfig& config) {
  if (config.systems < 2 || config.utterances < 1 || config.humans + config.automatics < 1) {
    throw Error(ErrorCode::InvalidArgument, "synthetic data needs 2+ systems, 1+ utterances and 1+ metrics");
  }
  if (config.rho < -1.0 || config.rho > 1.0) throw Error(ErrorCode::InvalidArgument, "rho must lie in [-1, 1]");

  Rng rng(config.seed);
  const std::size_t n = config.systems;
  const std::size_t k = config.utterances;
  std::vector<double> system_effect(n);
  std::vector<double> utterance_effect(k);
  for (auto& v : system_effect) v = config.system_sd * rng.normal();
  for (auto& v : utterance_effect) v = config.utterance_sd * rng.normal();
  std::vector<double> quality(n * k);
  std::vector<double> distorted(n * k);
  const double spread = std::sqrt(1.0 - config.rho * config.rho);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t u = 0; u < k; ++u) {
      const double q = system_effect[s] + utterance_effect[u] + rng.normal();
      quality[s * k + u] = q;
      distorted[s * k + u] = config.rho * q + spread * rng.normal();
    }
  }

  std::vector<MetricProfile> profiles;
  std::vector<double> scores;
  scores.reserve((config.humans + config.automatics) * n * k);
  for (std::size_t h = 0; h < config.humans; ++h) {
    profiles.push_back(MetricProfile{"H:human_" + std::to_string(h), MetricKind::Human, Orientation::HigherBetter,
                                     std::nullopt, std::nullopt});
    for (std::size_t c = 0; c < n * k; ++c) scores.push_back(quality[c] + config.sigma_human * rng.normal());
  }
  for (std::size_t a = 0; a < config.automatics; ++a) {
    MetricProfile p;
    p.id = "auto_" + std::to_string(a);
    p.kind = MetricKind::Automatic;
    p.orientation = config.lower_better_every > 0 && (a + 1) % config.lower_better_every == 0
                        ? Orientation::LowerBetter
                        : Orientation::HigherBetter;
    p.release_date = std::to_string(2002 + a) + "-01-01";
    p.family = "family_" + std::to_string(a / 2);
    profiles.push_back(std::move(p));
    // Stored oriented, so the direction flag only matters once dumped.
    for (std::size_t c = 0; c < n * k; ++c) scores.push_back(distorted[c] + config.sigma_auto * rng.normal());
  }

  std::vector<std::string> systems;
  std::vector<std::string> utterances;
  // Zero-padded so lexicographic order matches numeric order.
  auto label = [](const char* prefix, std::size_t i) {
    std::string digits = std::to_string(i);
    return std::string(prefix) + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
  };
  for (std::size_t s = 0; s < n; ++s) systems.push_back(label("sys_", s));
  for (std::size_t u = 0; u < k; ++u) utterances.push_back(label("utt_", u));
  return ScoreTensor("synthetic", std::move(profiles), std::move(systems), std::move(utterances), std::move(scores));
}

}  // namespace rankmetrics
