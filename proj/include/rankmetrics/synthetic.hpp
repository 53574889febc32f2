#pragma once

#include <cstdint>

#include "rankmetrics/scoreset.hpp"

namespace rankmetrics {

// Latent-factor score generator. Every (system, utterance) cell has a true
// quality q = system effect + utterance effect + cell noise. Human metrics
// observe q with noise sigma_human. Automatic metrics observe a distorted
// factor d = rho * q + sqrt(1 - rho^2) * w, where w is shared by all
// automatic metrics but independent of q, plus noise sigma_auto.
struct SyntheticConfig {
  std::size_t systems = 10;
  std::size_t utterances = 100;
  std::size_t humans = 5;
  std::size_t automatics = 8;
  double sigma_human = 0.3;
  double sigma_auto = 0.45;
  double rho = 0.5;
  double system_sd = 0.3;
  double utterance_sd = 0.5;
  // Every n-th automatic metric is declared lower-is-better (0 disables).
  std::size_t lower_better_every = 4;
  std::uint64_t seed = 0;
};

// Human metrics are named "H:human_<i>", automatic ones "auto_<i>", the
// latter with release dates one year apart starting 2002-01-01 and, for
// consecutive pairs, a shared family tag "family_<i/2>".
ScoreTensor generate_synthetic(const SyntheticConfig& config);

}  // namespace rankmetrics
