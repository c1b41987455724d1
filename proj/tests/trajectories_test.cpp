#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermocollide/trajectories.hpp"

using namespace thermocollide;

namespace {

// Reference engine: beta_hot = 1e-2, beta_cold = 1, omega_N = 10, Omega_M = 1, qubit.
EngineSpec reference(std::size_t n, std::size_t m) {
  EngineSpec s;
  s.n_hot = n;
  s.n_cold = m;
  return s;
}

Trajectory pmax_trajectory(std::size_t n, std::size_t m) {
  Trajectory t{std::vector<std::size_t>(n + 1, 0), std::vector<std::size_t>(m, 0)};
  t.j.back() = 1;
  return t;
}

double bin_sum(const EfficiencyDistribution& d) {
  double s = 0.0;
  for (const auto& b : d.bins) s += b.probability;
  return s;
}

}  // namespace

TEST(TrajectoryProbability, GroundTrajectoryIsAProduct) {
  const auto spec = reference(3, 2);
  const auto sched = frequency_schedule(spec);
  double expected = oracle::gibbs(spec.beta_cold * spec.omega_cold_last, 2)[0];
  for (double w : sched.hot) expected *= static_cast<double>(oracle::gibbs(spec.beta_hot * w, 2)[0]);
  for (double w : sched.cold) expected *= static_cast<double>(oracle::gibbs(spec.beta_cold * w, 2)[0]);
  const Trajectory ground{{0, 0, 0, 0}, {0, 0}};
  EXPECT_NEAR(trajectory_probability(ground, spec), expected, 1e-15);
}

TEST(TrajectoryProbability, SumsToOne) {
  for (std::size_t d : {2u, 3u}) {
    auto spec = reference(2, 2);
    spec.d_system = d;
    const TrajectoryModel model(spec);
    CompensatedSum total;
    for_each_trajectory(model, [&](auto, double p) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      total.add(p);
    });
    EXPECT_NEAR(total.value(), 1.0, 1e-12);
  }
}

TEST(TrajectoryProbability, RejectsMalformedTrajectories) {
  const auto spec = reference(2, 2);
  EXPECT_THROW(trajectory_probability({{0, 0}, {0, 0}}, spec), std::invalid_argument);
  EXPECT_THROW(trajectory_probability({{0, 0, 2}, {0, 0}}, spec), std::invalid_argument);
}

TEST(TrajectoryQuantities, ConstantTrajectoryIsInert) {
  auto spec = reference(3, 3);
  spec.d_system = 3;
  for (std::size_t level = 0; level < 3; ++level) {
    const Trajectory t{std::vector<std::size_t>(4, level), std::vector<std::size_t>(3, level)};
    const auto q = trajectory_quantities(t, spec);
    EXPECT_EQ(q.q_hot, 0.0);
    EXPECT_EQ(q.q_cold, 0.0);
    EXPECT_EQ(q.work, 0.0);
    EXPECT_FALSE(q.efficiency);
  }
}

TEST(TrajectoryQuantities, MostLikelyTrajectoryHeats) {
  const auto spec = reference(10, 10);
  const auto q = trajectory_quantities(pmax_trajectory(10, 10), spec);
  EXPECT_DOUBLE_EQ(q.q_hot, 10.0);
  EXPECT_NEAR(q.q_cold, frequency_schedule(spec).cold[0], 1e-15);
  ASSERT_TRUE(q.efficiency);
  EXPECT_NEAR(*q.efficiency, 0.981, 1e-12);
}

TEST(TrajectoryQuantities, DecompositionAndFirstLaw) {
  std::mt19937_64 rng(6);
  for (std::size_t d : {2u, 4u}) {
    auto spec = reference(10, 10);
    spec.d_system = d;
    std::uniform_int_distribution<std::size_t> level(0, d - 1);
    for (int i = 0; i < 500; ++i) {
      Trajectory t{std::vector<std::size_t>(11), std::vector<std::size_t>(10)};
      for (auto& v : t.j) v = level(rng);
      for (auto& v : t.k) v = level(rng);
      const auto q = trajectory_quantities(t, spec);
      const double scale = std::max(1.0, std::abs(q.q_hot));
      EXPECT_NEAR(q.delta_script_e / (10.0 * q.r_beta), q.q_hot, 1e-10 * scale);
      EXPECT_NEAR(q.delta_script_r / 10.0, q.q_cold, 1e-10 * std::max(1.0, std::abs(q.q_cold)));
      EXPECT_EQ(q.work, q.delta_e + q.q_hot - q.q_cold);
      long sigma = 0;
      for (std::size_t n = 0; n < 10; ++n) sigma += static_cast<long>(t.j[n]);
      EXPECT_EQ(q.sigma_hot, sigma);
    }
  }
}

TEST(TrajectoryQuantities, FilterModes) {
  const auto spec = reference(2, 2);
  // Starts excited and releases at omega_1 = 55: Q_E = -55.
  const Trajectory reversed{{1, 0, 0}, {0, 0}};
  const auto loose = trajectory_quantities(reversed, spec, FilterMode::nonzero_heat);
  const auto strict = trajectory_quantities(reversed, spec, FilterMode::strict_positive);
  EXPECT_DOUBLE_EQ(loose.q_hot, -55.0);
  EXPECT_TRUE(loose.efficiency);
  EXPECT_FALSE(strict.efficiency);
}

TEST(ExpectationConsistency, MatchesIdealCycle) {
  for (std::size_t n : {1u, 2u, 3u})
    for (std::size_t d : {2u, 3u}) {
      auto spec = reference(n, n);
      spec.d_system = d;
      const TrajectoryModel model(spec);
      CompensatedSum qe, qr, w, de;
      for_each_trajectory(model, [&](std::span<const std::size_t> dg, double p) {
        const auto q = model.quantities(dg, FilterMode::nonzero_heat);
        qe.add(p * q.q_hot);
        qr.add(p * q.q_cold);
        w.add(p * q.work);
        de.add(p * q.delta_e);
      });
      const auto ideal = analytic_cycle(spec);
      EXPECT_NEAR(qe.value(), ideal.avg_heat_hot, 1e-10);
      EXPECT_NEAR(qr.value(), ideal.avg_heat_cold, 1e-10);
      EXPECT_NEAR(w.value(), ideal.avg_work, 1e-10);
      EXPECT_NEAR(de.value(), 0.0, 1e-12);
    }
}

TEST(Enumeration, PeaksAtCarnotForTenEnsembles) {
  const auto spec = reference(10, 10);
  for (auto grouping : {GroupingMode::exact_rational, GroupingMode::floating})
    for (auto filter : {FilterMode::nonzero_heat, FilterMode::strict_positive}) {
      const auto d = enumerate_distribution(spec, {.filter = filter, .grouping = grouping});
      EXPECT_NEAR(d.most_likely_eta, 0.99, 1e-12);
      EXPECT_NEAR(d.total_probability, 1.0, 1e-12);
      EXPECT_NEAR(bin_sum(d), 1.0, 1e-10);
      EXPECT_EQ(d.trajectories, std::uint64_t{1} << 21);
      for (std::size_t i = 1; i < d.bins.size(); ++i) EXPECT_LT(d.bins[i - 1].eta, d.bins[i].eta);
      ASSERT_TRUE(d.most_likely_trajectory);
      EXPECT_EQ(*d.most_likely_trajectory, pmax_trajectory(10, 10));
      if (grouping == GroupingMode::exact_rational) {
        ASSERT_TRUE(d.most_likely_eta_exact);
        EXPECT_EQ(*d.most_likely_eta_exact, Rational(99, 100));
      }
    }
}

TEST(Enumeration, TwoEnsemblesMissCarnotUnderStrictFilter) {
  const auto spec = reference(2, 2);
  const auto strict = enumerate_distribution(
      spec, {.filter = FilterMode::strict_positive, .grouping = GroupingMode::exact_rational});
  EXPECT_NE(*strict.most_likely_eta_exact, Rational(99, 100));
  EXPECT_NEAR(strict.most_likely_eta, 0.945, 1e-12);
  // Admitting negative-heat trajectories moves the peak back to 0.99.
  const auto loose = enumerate_distribution(
      spec, {.filter = FilterMode::nonzero_heat, .grouping = GroupingMode::exact_rational});
  EXPECT_EQ(*loose.most_likely_eta_exact, Rational(99, 100));
  EXPECT_GT(loose.defined_probability, strict.defined_probability);
}

TEST(Enumeration, MostLikelyTrajectoryHasMaximalProbability) {
  const auto spec = reference(10, 10);
  const auto d = enumerate_distribution(spec);
  const TrajectoryModel model(spec);
  double best = 0.0;
  for_each_trajectory(model, [&](std::span<const std::size_t> dg, double p) {
    if (model.quantities(dg, FilterMode::nonzero_heat).efficiency) best = std::max(best, p);
  });
  EXPECT_EQ(d.most_likely_trajectory_probability, best);
}

TEST(Enumeration, CapDirectsToSampling) {
  auto spec = reference(10, 10);
  try {
    enumerate_distribution(spec, {.enumeration_cap = 1000});
    FAIL();
  } catch (const EnumerationCapExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("sample_distribution"), std::string::npos);
  }
}

TEST(Sampling, DeterministicAndThreadIndependent) {
  const auto spec = reference(3, 3);
  const auto a = sample_distribution(spec, 200000, 77, {.threads = 1});
  const auto b = sample_distribution(spec, 200000, 77, {.threads = 4});
  ASSERT_EQ(a.bins.size(), b.bins.size());
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    EXPECT_EQ(a.bins[i].eta, b.bins[i].eta);
    EXPECT_EQ(a.bins[i].probability, b.bins[i].probability);
  }
  EXPECT_EQ(a.most_likely_trajectory, b.most_likely_trajectory);
  const auto c = sample_distribution(spec, 200000, 78, {.threads = 1});
  EXPECT_NE(a.bins[0].probability, c.bins[0].probability);
}

TEST(Sampling, ConvergesToEnumeration) {
  const auto spec = reference(3, 3);
  const std::uint64_t n = 1'000'000;
  const auto exact = enumerate_distribution(spec);
  const auto mc = sample_distribution(spec, n, 123);
  std::map<double, double> diff;
  for (const auto& b : exact.bins) diff[b.eta] += b.probability;
  for (const auto& b : mc.bins) diff[b.eta] -= b.probability;
  double tv = 0.0;
  for (const auto& [eta, v] : diff) tv += std::abs(v);
  tv *= 0.5;
  EXPECT_LT(tv, 5.0 * std::sqrt(static_cast<double>(exact.bins.size()) / static_cast<double>(n)));
  EXPECT_EQ(mc.bins.size(), exact.bins.size());
}

TEST(Sampling, SingleSample) {
  const auto spec = reference(3, 3);
  EXPECT_THROW(sample_distribution(spec, 0, 1), std::invalid_argument);
  bool seen_defined = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = sample_distribution(spec, 1, seed);
    EXPECT_EQ(d.trajectories, 1u);
    EXPECT_LE(d.bins.size(), 1u);
    if (d.defined_trajectories == 1) {
      seen_defined = true;
      ASSERT_EQ(d.bins.size(), 1u);
      EXPECT_EQ(d.bins[0].probability, 1.0);
    }
  }
  EXPECT_TRUE(seen_defined);
}

TEST(MostLikelyEfficiency, ClosedForm) {
  EXPECT_NEAR(most_likely_trajectory_efficiency(reference(10, 10)), 0.981, 1e-15);
  EXPECT_NEAR(most_likely_trajectory_efficiency(reference(10, 1'000'000)), 0.99, 1e-5);
  const double base = most_likely_trajectory_efficiency(reference(1, 10));
  for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(most_likely_trajectory_efficiency(reference(n, 10)), base);
}

TEST(MostLikelyEfficiency, MatchesEnumeratedArgmaxForAnyN) {
  for (std::size_t n : {1u, 4u, 10u}) {
    const auto spec = reference(n, 10);
    const auto d = enumerate_distribution(spec);
    ASSERT_TRUE(d.most_likely_trajectory);
    EXPECT_EQ(*d.most_likely_trajectory, pmax_trajectory(n, 10));
    const auto q = trajectory_quantities(*d.most_likely_trajectory, spec);
    EXPECT_NEAR(*q.efficiency, most_likely_trajectory_efficiency(spec), 1e-12);
  }
}

TEST(MostLikelyEfficiency, StrictlyBelowCarnot) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> bh(0.01, 0.9), om(0.1, 5.0), frac(0.05, 0.99);
  for (int i = 0; i < 200; ++i) {
    EngineSpec s;
    s.beta_hot = bh(rng);
    s.omega_cold_last = om(rng);
    s.omega_hot_last = frac(rng) * s.omega_cold_last / s.beta_hot;
    s.n_hot = 1 + static_cast<std::size_t>(i % 20);
    s.n_cold = 1 + static_cast<std::size_t>(i % 13);
    EXPECT_LT(most_likely_trajectory_efficiency(s), s.carnot());
  }
}

TEST(CarnotGrid, ReferenceCells) {
  const std::size_t nm[] = {2, 10};
  const auto grid = carnot_condition_grid(reference(1, 1), nm, nm);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0].status, CarnotCellStatus::not_carnot);  // N = M = 2
  EXPECT_EQ(grid[3].status, CarnotCellStatus::carnot);      // N = M = 10
  const std::size_t big[] = {30};
  EXPECT_EQ(carnot_condition_grid(reference(1, 1), big, big).front().status, CarnotCellStatus::skipped);
}

TEST(CarnotGrid, HandBuiltCarnotTrajectory) {
  // N = M = 3, j_0 = k_M = 0, sigma_E = 0 + 1 + 1 = 2 = sigma_R = 1 + 1 + 0.
  const auto spec = reference(3, 3);
  const Trajectory t{{0, 1, 1, 1}, {1, 0, 0}};
  const auto q = trajectory_quantities(t, spec);
  EXPECT_EQ(q.sigma_hot, q.sigma_cold);
  EXPECT_TRUE(satisfies_carnot_condition(t, spec));
  EXPECT_NEAR(*q.efficiency, spec.carnot(), 1e-12);
  EXPECT_FALSE(satisfies_carnot_condition(pmax_trajectory(3, 3), spec));
}

TEST(ExactDecimal, ShortestRepresentation) {
  EXPECT_EQ(exact_decimal(0.01), Rational(1, 100));
  EXPECT_EQ(exact_decimal(10.0), Rational(10));
  EXPECT_EQ(exact_decimal(-2.5e-3), Rational(-1, 400));
  EXPECT_THROW(exact_decimal(NAN), std::invalid_argument);
}
