// One collision of the system with a fresh Gibbs bath particle, reduced to a
// column-stochastic matrix on system populations, plus iteration to an
// eps-neighbourhood of the pseudo-thermal fixed point.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thermocollide/hilbert_blocks.hpp"
#include "thermocollide/spectra.hpp"

namespace thermocollide {

inline constexpr std::size_t kDefaultMaxCollisions = 1'000'000;

/// Matrix entry (i, mu) is P(i | mu), the probability that the system ends in
/// level i after one collision starting from level mu.
class CollisionChannel {
 public:
  CollisionChannel(Eigen::MatrixXd matrix, GibbsSpec bath) : matrix_(std::move(matrix)), bath_(bath) {
    bath_.validate();
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
      throw std::invalid_argument("CollisionChannel: matrix must be square with dimension >= 2");
    if ((matrix_.array() < 0.0).any()) throw std::invalid_argument("CollisionChannel: negative transition probability");
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c)
      if (std::abs(matrix_.col(c).sum() - 1.0) > kNormTolerance)
        throw std::invalid_argument("CollisionChannel: column " + std::to_string(c) + " does not sum to 1");
    const auto fixed = pseudo_thermal_state();
    Eigen::Map<const Eigen::VectorXd> g(fixed.probs().data(), matrix_.rows());
    const double drift = (matrix_ * g - g).cwiseAbs().maxCoeff();
    if (drift > kNormTolerance)
      throw std::invalid_argument("CollisionChannel: pseudo-thermal state is not stationary (drift " +
                                  std::to_string(drift) + ")");
  }

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const GibbsSpec& bath() const noexcept { return bath_; }
  std::size_t system_dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Gibbs populations of the system at the bath's beta * omega.
  PopulationState pseudo_thermal_state() const {
    return detail::gibbs_from_exponent(bath_.beta * bath_.omega, system_dim());
  }

 private:
  Eigen::MatrixXd matrix_;
  GibbsSpec bath_;
};

/// P(i | mu) = sum_{nu, nu'} q_nu |<i, nu'| U |mu, nu>|^2.
inline CollisionChannel channel_matrix(const BlockUnitary& u, const GibbsSpec& bath) {
  if (u.bath_dim() != bath.d)
    throw std::invalid_argument("channel_matrix: unitary built for bath dimension " + std::to_string(u.bath_dim()) +
                                ", bath has " + std::to_string(bath.d));
  const auto q = gibbs_populations(bath);
  const auto& idx = u.indexing();
  const auto dS = static_cast<Eigen::Index>(u.system_dim());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dS, dS);
  for (std::size_t l = 0; l < idx.block_count(); ++l) {
    const auto basis = idx.basis(l);
    const auto& ul = u.block(l);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const double weight = q[basis[a].bath];
      for (std::size_t b = 0; b < basis.size(); ++b)
        p(static_cast<Eigen::Index>(basis[b].system), static_cast<Eigen::Index>(basis[a].system)) +=
            weight * std::norm(ul(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)));
    }
  }
  return CollisionChannel(std::move(p), bath);
}

inline PopulationState apply(const CollisionChannel& ch, const PopulationState& p) {
  if (p.dim() != ch.system_dim()) throw std::invalid_argument("apply: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> in(p.probs().data(), static_cast<Eigen::Index>(p.dim()));
  const Eigen::VectorXd out = ch.matrix() * in;
  const double sum = out.sum();
  std::vector<double> v(out.data(), out.data() + out.size());
  for (double& x : v) x /= sum;
  return PopulationState(std::move(v));
}

/// Raised when the eps-ball is not reached within the collision budget, which
/// happens when some block of U leaves part of the spectrum uncoupled.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double final_distance, std::size_t collisions)
      : std::runtime_error("pseudo-thermalization did not converge: trace distance " +
                           std::to_string(final_distance) + " after " + std::to_string(collisions) +
                           " collisions"),
        final_distance_(final_distance),
        collisions_(collisions) {}
  double final_distance() const noexcept { return final_distance_; }
  std::size_t collisions() const noexcept { return collisions_; }

 private:
  double final_distance_;
  std::size_t collisions_;
};

struct Thermalization {
  PopulationState state;
  std::size_t collisions;
};

/// Applies the channel the minimal number of times alpha such that
/// trace_distance(state, target) < eps.
inline Thermalization pseudo_thermalize(const PopulationState& p0, const CollisionChannel& ch,
                                        const PopulationState& target, double eps,
                                        std::size_t max_collisions = kDefaultMaxCollisions) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("pseudo_thermalize: eps must lie in (0, 1]");
  if (p0.dim() != ch.system_dim() || target.dim() != ch.system_dim())
    throw std::invalid_argument("pseudo_thermalize: dimension mismatch");
  PopulationState state = p0;
  double dist = trace_distance(state, target);
  std::size_t alpha = 0;
  while (!(dist < eps)) {
    if (alpha == max_collisions) throw NonConvergence(dist, alpha);
    state = apply(ch, state);
    ++alpha;
    dist = trace_distance(state, target);
  }
  return {std::move(state), alpha};
}

/// Per-collision thermodynamic ledger built from the system and particle
/// marginals. Entropy changes are post minus pre.
struct CollisionAudit {
  double heat_to_system = 0.0;          // omega * (<N_S>_post - <N_S>_pre)
  double particle_energy_change = 0.0;  // omega * (<N_E>_post - <N_E>_pre)
  PopulationState particle_post = PopulationState::basis(1, 0);
  double entropy_change_particle = 0.0;
  double entropy_change_system = 0.0;
  double particle_relative_entropy = 0.0;  // D[particle_post || particle_pre]
  /// beta * heat_to_system + entropy_change_particle + D[post || pre]; vanishes
  /// identically for a Gibbs particle.
  double landauer_gap = 0.0;
};

/// Runs one collision on the joint diagonal and returns the system marginal
/// together with the audit. The joint output has coherences inside each H_l,
/// but both marginals stay diagonal, so only the joint diagonal is needed.
inline std::pair<PopulationState, CollisionAudit> collide_with_audit(const BlockUnitary& u,
                                                                     const PopulationState& p,
                                                                     const GibbsSpec& bath) {
  if (p.dim() != u.system_dim() || bath.d != u.bath_dim())
    throw std::invalid_argument("collide_with_audit: dimension mismatch");
  const auto q = gibbs_populations(bath);
  const auto& idx = u.indexing();
  std::vector<double> sys(u.system_dim(), 0.0), part(u.bath_dim(), 0.0);
  for (std::size_t l = 0; l < idx.block_count(); ++l) {
    const auto basis = idx.basis(l);
    const auto& ul = u.block(l);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      double out = 0.0;
      for (std::size_t a = 0; a < basis.size(); ++a)
        out += std::norm(ul(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a))) * p[basis[a].system] *
               q[basis[a].bath];
      sys[basis[b].system] += out;
      part[basis[b].bath] += out;
    }
  }
  PopulationState sys_post(std::move(sys));
  PopulationState part_post(std::move(part));

  CollisionAudit audit;
  audit.heat_to_system = bath.omega * (sys_post.mean_number() - p.mean_number());
  audit.particle_energy_change = bath.omega * (part_post.mean_number() - q.mean_number());
  audit.entropy_change_particle = shannon_entropy(part_post) - shannon_entropy(q);
  audit.entropy_change_system = shannon_entropy(sys_post) - shannon_entropy(p);
  audit.particle_relative_entropy = relative_entropy(part_post, q);
  audit.landauer_gap =
      bath.beta * audit.heat_to_system + audit.entropy_change_particle + audit.particle_relative_entropy;
  audit.particle_post = std::move(part_post);
  return {std::move(sys_post), std::move(audit)};
}

}  // namespace thermocollide
