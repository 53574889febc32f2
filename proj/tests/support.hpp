#pragma once

// Reference implementations used as oracles. They are deliberately naive and
// share no code with the library beyond its data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rankmetrics/kemeny.hpp"
#include "rankmetrics/random.hpp"
#include "rankmetrics/ranking.hpp"
#include "rankmetrics/scoreset.hpp"

namespace testing_support {

using namespace rankmetrics;

inline std::int64_t brute_kendall(const std::vector<double>& a, const std::vector<double>& b) {
  std::int64_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] - a[j]) * (b[i] - b[j]) < 0) ++count;
    }
  }
  return count;
}

inline RankVector rv(std::vector<double> ranks) { return RankVector{std::move(ranks)}; }

inline std::vector<int> random_permutation(Rng& rng, std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  rng.shuffle(std::span<int>(p));
  return p;
}

inline RankVector as_ranks(const std::vector<int>& p) { return RankVector{std::vector<double>(p.begin(), p.end())}; }

// Every permutation in lexicographic order; returns the first optimum.
inline std::pair<std::vector<int>, std::int64_t> factorial_kemeny(const std::vector<std::vector<int>>& members) {
  const std::size_t n = members.front().size();
  std::vector<int> candidate(n);
  std::iota(candidate.begin(), candidate.end(), 1);
  std::vector<int> best;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t cost = 0;
    for (const auto& m : members) {
      cost += brute_kendall(std::vector<double>(candidate.begin(), candidate.end()),
                            std::vector<double>(m.begin(), m.end()));
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = candidate;
    }
  } while (std::next_permutation(candidate.begin(), candidate.end()));
  return {best, best_cost};
}

inline std::vector<MetricProfile> profiles(const std::vector<std::string>& humans,
                                           const std::vector<std::string>& autos) {
  std::vector<MetricProfile> out;
  for (const auto& h : humans) out.push_back({h, MetricKind::Human, Orientation::HigherBetter, {}, {}});
  for (const auto& a : autos) out.push_back({a, MetricKind::Automatic, Orientation::HigherBetter, {}, {}});
  return out;
}

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    out.push_back(prefix + std::string(3 - std::min<std::size_t>(3, digits.size()), '0') + digits);
  }
  return out;
}

// Dense tensor from a cell function score(metric, system, utterance).
inline ScoreTensor make_tensor(std::vector<MetricProfile> metrics, std::size_t systems, std::size_t utterances,
                               const std::function<double(std::size_t, std::size_t, std::size_t)>& score) {
  std::vector<double> cells;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    for (std::size_t s = 0; s < systems; ++s) {
      for (std::size_t u = 0; u < utterances; ++u) cells.push_back(score(m, s, u));
    }
  }
  return ScoreTensor("desk", std::move(metrics), labels("s", systems), labels("u", utterances), std::move(cells));
}

}  // namespace testing_support
