#include <gtest/gtest.h>

#include <cmath>

#include "rankmetrics/complementarity.hpp"
#include "rankmetrics/error.hpp"
#include "support.hpp"

using namespace rankmetrics;
using testing_support::brute_kendall;
using testing_support::make_tensor;
using testing_support::profiles;

namespace {

// Oracle: per utterance, order systems by score and count strictly discordant
// pairs directly on the scores.
double oracle_pairwise(const ScoreTensor& t, std::size_t a, std::size_t b) {
  const std::size_t n = t.num_systems();
  double total = 0.0;
  for (std::size_t u = 0; u < t.num_utterances(); ++u) {
    std::vector<double> sa, sb;
    for (std::size_t s = 0; s < n; ++s) {
      sa.push_back(t.at(a, s, u));
      sb.push_back(t.at(b, s, u));
    }
    total += static_cast<double>(brute_kendall(sa, sb)) / (n * (n - 1) / 2.0);
  }
  return total / static_cast<double>(t.num_utterances());
}

ScoreTensor random_tensor(Rng& rng, std::size_t humans, std::size_t autos, std::size_t n, std::size_t k, bool ties) {
  std::vector<std::string> h, a;
  for (std::size_t i = 0; i < humans; ++i) h.push_back("H:h" + std::to_string(i));
  for (std::size_t i = 0; i < autos; ++i) a.push_back("a" + std::to_string(i));
  return make_tensor(profiles(h, a), n, k,
                     [&](auto, auto, auto) { return ties ? double(rng.uniform_index(3)) : rng.normal(); });
}

}  // namespace

TEST(Pairwise, Examples) {
  Rng rng(1);
  std::vector<double> base(4 * 6);
  for (auto& v : base) v = rng.normal();
  const auto t = make_tensor(profiles({}, {"m", "copy", "flip"}), 4, 6, [&](auto m, auto s, auto u) {
    return m == 2 ? -base[s * 6 + u] : base[s * 6 + u];
  });
  EXPECT_EQ(pairwise_complementarity(t, "m", "copy"), 0.0);
  EXPECT_EQ(pairwise_complementarity(t, "m", "m"), 0.0);
  EXPECT_EQ(pairwise_complementarity(t, "m", "flip"), 1.0);

  // Utterance 0: [1,2,3] vs [1,3,2]; utterance 1: [1,2,3] vs [3,2,1].
  const double a[3][2] = {{3, 3}, {2, 2}, {1, 1}};
  const double b[3][2] = {{3, 1}, {1, 2}, {2, 3}};
  const auto desk = make_tensor(profiles({}, {"a", "b"}), 3, 2,
                                [&](auto m, auto s, auto u) { return m == 0 ? a[s][u] : b[s][u]; });
  EXPECT_NEAR(pairwise_complementarity(desk, "a", "b"), 2.0 / 3.0, 1e-15);
}

TEST(Pairwise, Errors) {
  const auto one_system = make_tensor(profiles({}, {"a", "b"}), 1, 3, [](auto, auto, auto u) { return double(u); });
  try {
    pairwise_complementarity(one_system, "a", "b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSystems);
  }
  const auto t = make_tensor(profiles({}, {"a", "b"}), 2, 3, [](auto, auto s, auto u) { return double(s + u); });
  EXPECT_THROW(pairwise_complementarity(t, "a", "zzz"), Error);
}

TEST(Pairwise, FullyTiedUtteranceContributesZero) {
  // Utterance 0 all tied for metric a; utterance 1 reversed.
  const auto t = make_tensor(profiles({}, {"a", "b"}), 3, 2, [](auto m, auto s, auto u) {
    if (m == 0) return u == 0 ? 1.0 : -double(s);
    return double(s);
  });
  EXPECT_DOUBLE_EQ(pairwise_complementarity(t, "a", "b"), 0.5);
}

TEST(VsSet, Examples) {
  Rng rng(2);
  std::vector<double> base(3 * 5);
  for (auto& v : base) v = rng.normal();
  const auto t = make_tensor(profiles({}, {"m", "copy", "flip", "other"}), 3, 5, [&](auto m, auto s, auto u) {
    if (m == 3) return std::sin(7.0 * s + 3.0 * u);
    return m == 2 ? -base[s * 5 + u] : base[s * 5 + u];
  });
  EXPECT_EQ(complementarity_vs_set(t, "m", std::vector<std::string>{"copy"}), 0.0);
  EXPECT_EQ(complementarity_vs_set(t, "m", std::vector<std::string>{"copy", "flip"}), 0.5);
  const double expected = (oracle_pairwise(t, 0, 2) + oracle_pairwise(t, 0, 3)) / 2.0;
  EXPECT_NEAR(complementarity_vs_set(t, "m", std::vector<std::string>{"flip", "other"}), expected, 1e-15);

  try {
    complementarity_vs_set(t, "m", std::vector<std::string>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySet);
  }
  EXPECT_THROW(complementarity_vs_set(t, "m", std::vector<std::string>{"m", "copy"}), Error);
}

TEST(FullMatrix, HumansFirstAndMatchesIndependentCells) {
  Rng rng(3);
  const auto t = make_tensor(
      {{"z_auto", MetricKind::Automatic, Orientation::HigherBetter, {}, {}},
       {"H:b", MetricKind::Human, Orientation::HigherBetter, {}, {}},
       {"a_auto", MetricKind::Automatic, Orientation::HigherBetter, {}, {}},
       {"H:a", MetricKind::Human, Orientation::HigherBetter, {}, {}}},
      4, 8, [&](auto, auto, auto) { return double(rng.uniform_index(4)); });
  const auto c = complementarity_matrix(t);
  EXPECT_EQ(c.metric_ids, (std::vector<std::string>{"H:b", "H:a", "z_auto", "a_auto"}));
  EXPECT_EQ(c.kinds[1], MetricKind::Human);
  EXPECT_EQ(c.kinds[2], MetricKind::Automatic);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double expected = oracle_pairwise(t, t.metric_index(c.metric_ids[i]), t.metric_index(c.metric_ids[j]));
      EXPECT_NEAR(c(i, j), expected, 1e-15);
    }
  }
  EXPECT_EQ(c.index_of("z_auto"), 2u);
}

TEST(FullMatrix, TwoMetricsAndIdenticalMetrics) {
  const auto t = make_tensor(profiles({}, {"a", "b"}), 3, 2, [](auto m, auto s, auto u) {
    return m == 0 ? double(s) : double((s + u) % 3);
  });
  const auto c = complementarity_matrix(t);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c(0, 1), c(1, 0));
  EXPECT_EQ(c(0, 1), pairwise_complementarity(t, "a", "b"));

  const auto same = make_tensor(profiles({"H:x"}, {"a", "b"}), 3, 4, [](auto, auto s, auto u) { return double(s * u); });
  for (double v : complementarity_matrix(same).values) EXPECT_EQ(v, 0.0);
}

TEST(FullMatrix, StructuralPropertiesOnRandomTensors) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto t = random_tensor(rng, 1 + rng.uniform_index(3), 1 + rng.uniform_index(4), 2 + rng.uniform_index(5),
                                 1 + rng.uniform_index(20), trial % 2 == 0);
    const auto c = complementarity_matrix(t);
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(c(i, i), 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        EXPECT_EQ(c(i, j), c(j, i));
        EXPECT_GE(c(i, j), 0.0);
        EXPECT_LE(c(i, j), 1.0);
      }
    }
  }
}

TEST(GroupSummary, HandSetMatrix) {
  ComplementarityMatrix c;
  c.metric_ids = {"H:a", "H:b", "x", "y"};
  c.kinds = {MetricKind::Human, MetricKind::Human, MetricKind::Automatic, MetricKind::Automatic};
  c.values = {0.0, 0.1, 0.3, 0.3,  //
              0.1, 0.0, 0.4, 0.4,  //
              0.3, 0.4, 0.0, 0.2,  //
              0.3, 0.4, 0.2, 0.0};
  const auto g = group_summary(c);
  ASSERT_TRUE(g.human_human && g.auto_auto && g.cross);
  EXPECT_DOUBLE_EQ(g.human_human->mean, 0.1);
  EXPECT_FALSE(g.human_human->std_error.has_value());
  EXPECT_DOUBLE_EQ(g.auto_auto->mean, 0.2);
  EXPECT_NEAR(g.cross->mean, 0.35, 1e-15);
  // Sample sd of {.3,.3,.4,.4} is sqrt(1/300); SEM divides by 2.
  ASSERT_TRUE(g.cross->std_error.has_value());
  EXPECT_NEAR(*g.cross->std_error, std::sqrt(1.0 / 300.0) / 2.0, 1e-15);
  EXPECT_EQ(g.cross->pairs.size(), 4u);

  const auto by_profile = group_summary(c, profiles({"H:a", "H:b"}, {"x", "y"}));
  EXPECT_EQ(by_profile.cross->mean, g.cross->mean);
}

TEST(GroupSummary, SingleHumanHasNoHumanPairs) {
  ComplementarityMatrix c;
  c.metric_ids = {"H:a", "x", "y"};
  c.kinds = {MetricKind::Human, MetricKind::Automatic, MetricKind::Automatic};
  c.values = {0, 0.5, 0.5, 0.5, 0, 0.1, 0.5, 0.1, 0};
  const auto g = group_summary(c);
  EXPECT_FALSE(g.human_human.has_value());
  EXPECT_TRUE(g.auto_auto.has_value());
  EXPECT_TRUE(g.cross.has_value());
}
