#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermocollide/collision_channel.hpp"

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

void expect_audit_identities(const CollisionAudit& a) {
  EXPECT_NEAR(a.heat_to_system, -a.particle_energy_change,
              1e-10 * std::max(1.0, std::abs(a.heat_to_system)));
  EXPECT_NEAR(a.landauer_gap, 0.0, 1e-10);
  EXPECT_GE(a.entropy_change_system + a.entropy_change_particle, -1e-10);
}

}  // namespace

TEST(Channel, SwapOutputsTheBathState) {
  const GibbsSpec bath{0.7, 1.3, 4};
  const auto ch = channel_matrix(build_swap(4), bath);
  const auto g = gibbs_populations(bath);
  for (Eigen::Index c = 0; c < 4; ++c)
    for (Eigen::Index r = 0; r < 4; ++r) EXPECT_NEAR(ch.matrix()(r, c), g[static_cast<std::size_t>(r)], 1e-15);
}

TEST(Channel, IdentityUnitaryGivesIdentityChannel) {
  const auto ch = channel_matrix(build_jaynes_cummings(3, 5, 0.0), {1.0, 1.0, 5});
  EXPECT_LE((ch.matrix() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  std::mt19937_64 rng(3);
  const auto p = random_state(rng, 3);
  const auto out = apply(ch, p);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(out[k], p[k], 1e-15);
}

TEST(Channel, MatchesFullSpaceOracle) {
  for (auto [dS, dE, theta, bw] : {std::tuple{2u, 2u, std::numbers::pi / 4, 1.0}, std::tuple{3u, 4u, 1.3, 0.4},
                                   std::tuple{5u, 3u, std::numbers::pi / 2, 2.0}}) {
    const auto ch = channel_matrix(build_jaynes_cummings(dS, dE, theta), {bw, 1.0, dE});
    const auto ref = oracle::channel(oracle::jaynes_cummings_full(dS, dE, theta), dS, dE, oracle::gibbs(bw, dE));
    for (std::size_t i = 0; i < dS; ++i)
      for (std::size_t mu = 0; mu < dS; ++mu)
        EXPECT_NEAR(ch.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mu)),
                    static_cast<double>(ref[i][mu]), 1e-12);
  }
}

TEST(Channel, FixedPointByPowerIteration) {
  const auto ch = channel_matrix(build_jaynes_cummings(2, 2, std::numbers::pi / 4), {1.0, 1.0, 2});
  auto p = PopulationState::basis(2, 1);
  for (int i = 0; i < 2000; ++i) p = apply(ch, p);
  const auto g = gibbs_populations({1.0, 1.0, 2});
  EXPECT_NEAR(p[0], g[0], 1e-12);
  EXPECT_NEAR(p[1], g[1], 1e-12);
  const auto again = apply(ch, p);
  EXPECT_NEAR(again[0], p[0], 1e-12);
}

TEST(Channel, StationarityAndStochasticityGrid) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> theta(0.1, 3.0), bw(0.0, 5.0);
  for (int i = 0; i < 120; ++i) {
    const std::size_t dS = 2 + static_cast<std::size_t>(i % 7);
    const bool swap = i % 4 == 0;
    const std::size_t dE = swap ? dS : 2 + static_cast<std::size_t>((i * 3) % 9);
    const auto u = swap ? build_swap(dS) : build_jaynes_cummings(dS, dE, theta(rng));
    const GibbsSpec bath{bw(rng), 1.0, dE};
    const auto ch = channel_matrix(u, bath);  // constructor enforces both invariants at 1e-12
    const auto g = ch.pseudo_thermal_state();
    const auto out = apply(ch, g);
    for (std::size_t k = 0; k < dS; ++k) EXPECT_NEAR(out[k], g[k], 1e-12);
    for (Eigen::Index c = 0; c < ch.matrix().cols(); ++c) EXPECT_NEAR(ch.matrix().col(c).sum(), 1.0, 1e-12);
  }
}

TEST(Channel, Contractive) {
  std::mt19937_64 rng(5);
  const auto ch = channel_matrix(build_jaynes_cummings(4, 3, 1.1), {0.8, 1.0, 3});
  for (int i = 0; i < 500; ++i) {
    const auto p = random_state(rng, 4), q = random_state(rng, 4);
    EXPECT_LE(trace_distance(apply(ch, p), apply(ch, q)), trace_distance(p, q) + 1e-12);
  }
}

TEST(Channel, DimensionMismatchRejected) {
  EXPECT_THROW(channel_matrix(build_jaynes_cummings(2, 3, 1.0), {1.0, 1.0, 2}), std::invalid_argument);
  const auto ch = channel_matrix(build_swap(2), {1.0, 1.0, 2});
  EXPECT_THROW(apply(ch, PopulationState::uniform(3)), std::invalid_argument);
}

TEST(PseudoThermalize, AlreadyThereNeedsNoCollision) {
  const auto ch = channel_matrix(build_jaynes_cummings(3, 3, 1.0), {1.0, 1.0, 3});
  const auto g = ch.pseudo_thermal_state();
  EXPECT_EQ(pseudo_thermalize(g, ch, g, 1e-9).collisions, 0u);
}

TEST(PseudoThermalize, SwapNeedsOneCollision) {
  std::mt19937_64 rng(8);
  const auto ch = channel_matrix(build_swap(5), {0.3, 2.0, 5});
  for (int i = 0; i < 20; ++i) {
    const auto p = random_state(rng, 5);
    EXPECT_EQ(pseudo_thermalize(p, ch, ch.pseudo_thermal_state(), 1e-9).collisions, 1u);
  }
}

TEST(PseudoThermalize, MinimalCollisionCount) {
  const auto ch = channel_matrix(build_jaynes_cummings(3, 2, 0.9), {1.0, 1.0, 2});
  const auto target = ch.pseudo_thermal_state();
  const auto res = pseudo_thermalize(PopulationState::basis(3, 0), ch, target, 1e-6);
  EXPECT_LT(trace_distance(res.state, target), 1e-6);
  auto p = PopulationState::basis(3, 0);
  for (std::size_t i = 0; i + 1 < res.collisions; ++i) p = apply(ch, p);
  EXPECT_GE(trace_distance(p, target), 1e-6);
}

TEST(PseudoThermalize, DecoupledLevelNeverConverges) {
  // For dS = 5, dE = 2 and theta = pi/2 the l = 4 block is -1, so level 4
  // never exchanges population with level 3.
  const auto u = build_jaynes_cummings(5, 2, std::numbers::pi / 2);
  const auto& b = u.block(4);
  EXPECT_LE((b + Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  const auto ch = channel_matrix(u, {1.0, 1.0, 2});
  try {
    pseudo_thermalize(PopulationState::basis(5, 0), ch, ch.pseudo_thermal_state(), 1e-9, 10000);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.collisions(), 10000u);
    EXPECT_GT(e.final_distance(), 1e-9);
  }
}

TEST(PseudoThermalize, RegressionCounts) {
  // Ground start, bath beta omega = 1, dS = 5, JC at theta = pi/2, eps = 1e-9.
  const std::pair<std::size_t, std::size_t> expected[] = {{3, 38}, {4, 18}, {5, 1}, {6, 8}, {7, 6}, {12, 6}};
  for (auto [dE, alpha] : expected) {
    const auto ch = channel_matrix(build_jaynes_cummings(5, dE, std::numbers::pi / 2), {1.0, 1.0, dE});
    EXPECT_EQ(pseudo_thermalize(PopulationState::basis(5, 0), ch, ch.pseudo_thermal_state(), 1e-9).collisions, alpha)
        << "dE = " << dE;
  }
}

TEST(PseudoThermalize, RejectsBadEps) {
  const auto ch = channel_matrix(build_swap(2), {1.0, 1.0, 2});
  EXPECT_THROW(pseudo_thermalize(PopulationState::uniform(2), ch, ch.pseudo_thermal_state(), 0.0),
               std::invalid_argument);
}

TEST(Audit, IdentityCollisionIsSilent) {
  const auto [p, a] = collide_with_audit(build_jaynes_cummings(3, 3, 0.0), PopulationState::uniform(3), {1.0, 2.0, 3});
  EXPECT_LE(trace_distance(p, PopulationState::uniform(3)), 1e-15);
  EXPECT_NEAR(a.heat_to_system, 0.0, 1e-15);
  EXPECT_NEAR(a.entropy_change_particle, 0.0, 1e-15);
  EXPECT_NEAR(a.entropy_change_system, 0.0, 1e-15);
  EXPECT_NEAR(a.landauer_gap, 0.0, 1e-15);
}

TEST(Audit, SwapHandsTheSystemStateToTheParticle) {
  const PopulationState in({0.1, 0.2, 0.7});
  const auto [p, a] = collide_with_audit(build_swap(3), in, {0.5, 1.0, 3});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a.particle_post[k], in[k], 1e-15);
  expect_audit_identities(a);
}

TEST(Audit, QubitHeatFromExplicitMatrix) {
  const GibbsSpec bath{std::numbers::ln2, 1.0, 2};
  const auto u = build_jaynes_cummings(2, 2, std::numbers::pi / 2);
  const auto [p, a] = collide_with_audit(u, PopulationState::basis(2, 0), bath);
  // Joint input diag(2/3, 1/3, 0, 0) over |00>,|01>,|10>,|11>; the swap moves
  // the 1/3 on |01> to |10>.
  EXPECT_NEAR(a.heat_to_system, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
  expect_audit_identities(a);
}

TEST(Audit, IdentitiesOnRandomCollisions) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> theta(0.1, 3.0), beta(0.01, 3.0), omega(0.1, 5.0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t dS = 2 + static_cast<std::size_t>(i % 6), dE = 2 + static_cast<std::size_t>((i / 6) % 6);
    const auto u = build_jaynes_cummings(dS, dE, theta(rng));
    const GibbsSpec bath{beta(rng), omega(rng), dE};
    const auto p = random_state(rng, dS);
    const auto [out, a] = collide_with_audit(u, p, bath);
    const auto via_channel = apply(channel_matrix(u, bath), p);
    for (std::size_t k = 0; k < dS; ++k) EXPECT_NEAR(out[k], via_channel[k], 1e-13);
    expect_audit_identities(a);
  }
}
