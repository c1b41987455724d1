#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermocollide/spectra.hpp"

using namespace thermocollide;

namespace {

PopulationState random_state(std::mt19937_64& rng, std::size_t d) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(d);
  double z = 0.0;
  for (auto& v : p) z += (v = ex(rng));
  for (auto& v : p) v /= z;
  return PopulationState(p);
}

}  // namespace

TEST(PopulationState, RenormalizesSmallDrift) {
  PopulationState p({0.5, 0.5 + 5e-13});
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
}

TEST(PopulationState, RejectsLargeDrift) {
  EXPECT_THROW(PopulationState({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(PopulationState({1.1, -0.1}), std::invalid_argument);
  EXPECT_THROW(PopulationState(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(PopulationState({NAN, 1.0}), std::invalid_argument);
}

TEST(PopulationState, ClampsTinyNegatives) {
  PopulationState p({1.0 + 1e-13, -1e-13});
  EXPECT_EQ(p[1], 0.0);
}

TEST(Gibbs, InfiniteTemperatureIsUniform) {
  const auto p = gibbs_populations({0.0, 1.0, 4});
  for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(p[k], 0.25);
}

TEST(Gibbs, QubitAtLn2) {
  const auto p = gibbs_populations({std::numbers::ln2, 1.0, 2});
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(Gibbs, GroundStateLimit) {
  const auto p = gibbs_populations({50.0, 1.0, 3});
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_NEAR(p[1] / std::exp(-50.0), 1.0, 1e-12);
  EXPECT_NEAR(p[2] / std::exp(-100.0), 1.0, 1e-12);
}

TEST(Gibbs, ExtremeExponentStaysFinite) {
  const auto p = gibbs_populations({1e6, 1e6, 50});
  EXPECT_EQ(p[0], 1.0);
  for (std::size_t k = 1; k < 50; ++k) EXPECT_EQ(p[k], 0.0);
}

TEST(Gibbs, InvalidSpecRejected) {
  EXPECT_THROW(gibbs_populations({-1.0, 1.0, 2}), std::invalid_argument);
  EXPECT_THROW(gibbs_populations({1.0, 0.0, 2}), std::invalid_argument);
  EXPECT_THROW(gibbs_populations({1.0, 1.0, 1}), std::invalid_argument);
}

TEST(Gibbs, MonotoneInLevelAndEntropyGrowsWithDimension) {
  // Strict growth only while the new level is representable next to the sum.
  for (double bw : {0.01, 0.3, 1.0, 4.0}) {
    double prev_s = 0.0;
    for (std::size_t d = 2; d <= 30; ++d) {
      const auto p = gibbs_populations({bw, 1.0, d});
      for (std::size_t k = 1; k < d; ++k) EXPECT_LE(p[k], p[k - 1]);
      const double s = shannon_entropy(p);
      if (bw <= 1.0) {
        EXPECT_GT(s, prev_s);
      } else {
        EXPECT_GE(s, prev_s);
      }
      prev_s = s;
    }
  }
}

TEST(Gibbs, MatchesLongDoubleOracle) {
  for (double bw : {0.01, 0.5, 1.0, 7.0})
    for (std::size_t d : {2u, 5u, 20u}) {
      const auto p = gibbs_populations({bw, 1.0, d});
      const auto q = oracle::gibbs(bw, d);
      for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(p[k], static_cast<double>(q[k]), 1e-15);
    }
}

TEST(Entropy, Examples) {
  EXPECT_EQ(shannon_entropy(PopulationState({1.0, 0.0})), 0.0);
  EXPECT_NEAR(shannon_entropy(PopulationState::uniform(2)), std::numbers::ln2, 1e-15);
}

TEST(Entropy, LargeDimensionLimit) {
  // Gibbs entropy of an untruncated oscillator at beta omega = 1.
  const double e = std::numbers::e;
  const double limit = 1.0 / (e - 1.0) + std::log(e / (e - 1.0));
  EXPECT_NEAR(shannon_entropy(gibbs_populations({1.0, 1.0, 200})), limit, 1e-6);
}

TEST(RelativeEntropy, Examples) {
  const auto p = PopulationState::uniform(3);
  EXPECT_EQ(relative_entropy(p, p), 0.0);
  EXPECT_NEAR(relative_entropy(PopulationState({1.0, 0.0}), PopulationState::uniform(2)), std::numbers::ln2, 1e-15);
  const double expected = 0.5 * std::log(0.75) + 0.5 * std::log(1.5);
  EXPECT_NEAR(relative_entropy(PopulationState::uniform(2), PopulationState({2.0 / 3.0, 1.0 / 3.0})), expected, 1e-15);
  EXPECT_NEAR(expected, 0.058891, 1e-6);
}

TEST(RelativeEntropy, SupportViolationIsDistinct) {
  try {
    relative_entropy(PopulationState::uniform(2), PopulationState({1.0, 0.0}));
    FAIL() << "expected InfiniteDivergence";
  } catch (const InfiniteDivergence& e) {
    EXPECT_EQ(e.level(), 1u);
  }
  EXPECT_THROW(relative_entropy(PopulationState::uniform(2), PopulationState::uniform(3)), std::invalid_argument);
}

TEST(RelativeEntropy, KleinInequality) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 7);
    const auto p = random_state(rng, d), q = random_state(rng, d);
    const double dpq = relative_entropy(p, q);
    EXPECT_GE(dpq, 0.0);
    EXPECT_NEAR(dpq, static_cast<double>(oracle::relative_entropy(
                         std::vector<oracle::ld>(p.probs().begin(), p.probs().end()),
                         std::vector<oracle::ld>(q.probs().begin(), q.probs().end()))),
                1e-12);
    EXPECT_EQ(relative_entropy(p, p), 0.0);
  }
}

TEST(TraceDistance, Examples) {
  const auto p = PopulationState({0.7, 0.3});
  EXPECT_EQ(trace_distance(p, p), 0.0);
  EXPECT_EQ(trace_distance(PopulationState::basis(2, 0), PopulationState::basis(2, 1)), 1.0);
  EXPECT_NEAR(trace_distance(p, PopulationState::uniform(2)), 0.2, 1e-15);
  EXPECT_THROW(trace_distance(p, PopulationState::uniform(3)), std::invalid_argument);
}

TEST(ReebWolf, Examples) {
  EXPECT_EQ(reeb_wolf_lower_bound(0.0, 5), 0.0);
  EXPECT_NEAR(reeb_wolf_lower_bound(std::numbers::ln2, 2), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(reeb_wolf_lower_bound(0.1, 1), std::invalid_argument);
  EXPECT_EQ(reeb_wolf_lower_bound_log_dim(0.4, INFINITY), 0.0);
}

TEST(ReebWolf, HoldsOnRandomPairs) {
  std::mt19937_64 rng(2024);
  for (std::size_t d = 2; d <= 8; ++d)
    for (int i = 0; i < 1000; ++i) {
      const auto p = random_state(rng, d), q = random_state(rng, d);
      EXPECT_GE(relative_entropy(p, q), reeb_wolf_lower_bound(shannon_entropy(q) - shannon_entropy(p), d))
          << "d = " << d << ", sample " << i;
    }
}
