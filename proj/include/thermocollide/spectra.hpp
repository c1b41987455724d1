// Population vectors over the number basis, Gibbs states, and the entropic
// distances used throughout the engine bookkeeping.
//
// Every state the engine touches is diagonal in the number basis, so a state
// is stored as its probability vector. All entropies are in nats.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermocollide {

/// Absolute tolerance on the normalization of a probability vector.
inline constexpr double kNormTolerance = 1e-12;

/// Raised by relative_entropy when the first argument has weight outside the
/// support of the second, i.e. the divergence is +infinity.
class InfiniteDivergence : public std::domain_error {
 public:
  explicit InfiniteDivergence(std::size_t level)
      : std::domain_error("relative entropy is infinite: support violation at level " +
                          std::to_string(level)),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

/// Diagonal state of one subsystem in its number basis.
///
/// Construction validates the probabilities: entries must be finite and
/// non-negative, and the sum must lie within kNormTolerance of one. A sum
/// inside that window is renormalized; anything further off is rejected.
class PopulationState {
 public:
  explicit PopulationState(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("PopulationState: dimension must be positive");
    double sum = 0.0;
    for (double& p : probs_) {
      if (!std::isfinite(p)) throw std::invalid_argument("PopulationState: non-finite probability");
      if (p < 0.0) {
        if (p < -kNormTolerance)
          throw std::invalid_argument("PopulationState: negative probability " + std::to_string(p));
        p = 0.0;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kNormTolerance)
      throw std::invalid_argument("PopulationState: probabilities sum to " + std::to_string(sum));
    for (double& p : probs_) p /= sum;
  }

  /// Number eigenstate |level> in dimension d.
  static PopulationState basis(std::size_t d, std::size_t level) {
    if (level >= d) throw std::invalid_argument("PopulationState::basis: level out of range");
    std::vector<double> p(d, 0.0);
    p[level] = 1.0;
    return PopulationState(std::move(p));
  }

  static PopulationState uniform(std::size_t d) {
    if (d == 0) throw std::invalid_argument("PopulationState::uniform: dimension must be positive");
    return PopulationState(std::vector<double>(d, 1.0 / static_cast<double>(d)));
  }

  std::size_t dim() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t k) const { return probs_[k]; }

  /// Expectation of the number operator, sum_k k p_k.
  double mean_number() const noexcept {
    double n = 0.0;
    for (std::size_t k = 0; k < probs_.size(); ++k) n += static_cast<double>(k) * probs_[k];
    return n;
  }

  friend bool operator==(const PopulationState&, const PopulationState&) = default;

 private:
  std::vector<double> probs_;
};

/// Gibbs state over the number operator: inverse temperature `beta`, level
/// spacing `omega`, truncated to `d` levels.
struct GibbsSpec {
  double beta = 0.0;
  double omega = 1.0;
  std::size_t d = 2;

  void validate() const {
    if (!(std::isfinite(beta) && beta >= 0.0))
      throw std::invalid_argument("GibbsSpec: beta must be finite and non-negative");
    if (!(std::isfinite(omega) && omega > 0.0))
      throw std::invalid_argument("GibbsSpec: omega must be finite and positive");
    if (d < 2) throw std::invalid_argument("GibbsSpec: dimension must be at least 2");
  }
};

namespace detail {

// Weights exp(-x k) are already max-shifted since the k = 0 term is the largest.
inline PopulationState gibbs_from_exponent(double beta_omega, std::size_t d) {
  std::vector<double> p(d);
  double z = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    p[k] = std::exp(-beta_omega * static_cast<double>(k));
    z += p[k];
  }
  for (double& v : p) v /= z;
  return PopulationState(std::move(p));
}

}  // namespace detail

inline PopulationState gibbs_populations(const GibbsSpec& spec) {
  spec.validate();
  return detail::gibbs_from_exponent(spec.beta * spec.omega, spec.d);
}

/// -sum p ln p with 0 ln 0 = 0.
inline double shannon_entropy(const PopulationState& p) {
  double s = 0.0;
  for (double v : p.probs())
    if (v > 0.0) s -= v * std::log(v);
  return std::max(s, 0.0);
}

/// D[p || q] = sum p (ln p - ln q). Throws InfiniteDivergence when p has weight
/// where q vanishes.
inline double relative_entropy(const PopulationState& p, const PopulationState& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < p.dim(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) throw InfiniteDivergence(k);
    d += p[k] * (std::log(p[k]) - std::log(q[k]));
  }
  return std::max(d, 0.0);
}

/// ln sum_{k<d} exp(-x k) for x >= 0, without forming the populations.
inline double log_partition(double beta_omega, std::size_t d) {
  if (d == 0) throw std::invalid_argument("log_partition: dimension must be positive");
  double z = 0.0;
  for (std::size_t k = 0; k < d; ++k) z += std::exp(-beta_omega * static_cast<double>(k));
  return std::log(z);
}

/// D[p || gibbs(x, d)] in the log domain: sum p ln p + x <n>_p + ln Z. Stays
/// finite when the tail of the Gibbs state underflows.
inline double relative_entropy_to_gibbs(const PopulationState& p, double beta_omega) {
  double d = beta_omega * p.mean_number() + log_partition(beta_omega, p.dim());
  for (double v : p.probs())
    if (v > 0.0) d += v * std::log(v);
  return std::max(d, 0.0);
}

/// Half the L1 distance; equals the trace distance for commuting states.
inline double trace_distance(const PopulationState& p, const PopulationState& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  double t = 0.0;
  for (std::size_t k = 0; k < p.dim(); ++k) t += std::abs(p[k] - q[k]);
  return 0.5 * t;
}

/// Lower bound on D[rho || sigma] given the entropy change
/// delta_S = S(sigma) - S(rho) and the Hilbert-space dimension:
/// delta_S^2 / (3 ln^2 dim).
inline double reeb_wolf_lower_bound(double delta_S, std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("reeb_wolf_lower_bound: dimension must be at least 2");
  const double ln_dim = std::log(static_cast<double>(dim));
  return delta_S * delta_S / (3.0 * ln_dim * ln_dim);
}

/// Same bound with the dimension given as ln(dim); an infinite log-dimension
/// gives zero. Used for effective bath dimensions too large to represent.
inline double reeb_wolf_lower_bound_log_dim(double delta_S, double log_dim) {
  if (!(log_dim >= std::log(2.0)))
    throw std::invalid_argument("reeb_wolf_lower_bound: dimension must be at least 2");
  if (std::isinf(log_dim)) return 0.0;
  return delta_S * delta_S / (3.0 * log_dim * log_dim);
}

}  // namespace thermocollide
