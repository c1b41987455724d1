// Number-conserving unitaries on H_S (x) H_E stored as a direct sum over the
// total-excitation subspaces H_l, l = 0 .. dS + dE - 2.
//
// Within H_l the basis is |s, l - s> ordered by descending system excitation,
// so |l, 0> (or the largest s allowed by the truncation) comes first. The
// ordering is fixed so channel matrices are reproducible across builds.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace thermocollide {

inline constexpr double kUnitarityTolerance = 1e-12;

/// dim(H_l) = 1 + min(l, dS - 1) - max(0, l - dE + 1).
inline std::size_t subspace_dimension(std::size_t l, std::size_t dS, std::size_t dE) {
  if (dS == 0 || dE == 0) throw std::invalid_argument("subspace_dimension: dimensions must be positive");
  if (l > dS + dE - 2)
    throw std::invalid_argument("subspace_dimension: l = " + std::to_string(l) + " exceeds " +
                                std::to_string(dS + dE - 2));
  const std::size_t top = std::min(l, dS - 1);
  const std::size_t bottom = l + 1 > dE ? l + 1 - dE : 0;
  return 1 + top - bottom;
}

struct BasisPair {
  std::size_t system;
  std::size_t bath;
  friend bool operator==(const BasisPair&, const BasisPair&) = default;
};

class SubspaceIndexing {
 public:
  SubspaceIndexing(std::size_t dS, std::size_t dE) : dS_(dS), dE_(dE) {
    if (dS < 1 || dE < 1) throw std::invalid_argument("SubspaceIndexing: dimensions must be positive");
    const std::size_t L = dS + dE - 2;
    bases_.resize(L + 1);
    position_.assign(dS * dE, {0, 0});
    for (std::size_t l = 0; l <= L; ++l) {
      const std::size_t top = std::min(l, dS - 1);
      const std::size_t bottom = l + 1 > dE ? l + 1 - dE : 0;
      for (std::size_t s = top + 1; s-- > bottom;) {
        position_[s * dE + (l - s)] = {l, bases_[l].size()};
        bases_[l].push_back({s, l - s});
      }
    }
  }

  std::size_t system_dim() const noexcept { return dS_; }
  std::size_t bath_dim() const noexcept { return dE_; }
  std::size_t block_count() const noexcept { return bases_.size(); }
  std::span<const BasisPair> basis(std::size_t l) const { return bases_.at(l); }

  /// (l, index within block) of the product state |s, e>.
  std::pair<std::size_t, std::size_t> locate(std::size_t s, std::size_t e) const {
    if (s >= dS_ || e >= dE_) throw std::out_of_range("SubspaceIndexing::locate");
    return position_[s * dE_ + e];
  }

  /// Row-major product index s * dE + e.
  std::size_t product_index(std::size_t s, std::size_t e) const noexcept { return s * dE_ + e; }

 private:
  std::size_t dS_, dE_;
  std::vector<std::vector<BasisPair>> bases_;
  std::vector<std::pair<std::size_t, std::size_t>> position_;
};

/// Direct sum of unitary blocks, one per excitation subspace.
class BlockUnitary {
 public:
  BlockUnitary(SubspaceIndexing indexing, std::vector<Eigen::MatrixXcd> blocks)
      : indexing_(std::move(indexing)), blocks_(std::move(blocks)) {
    if (blocks_.size() != indexing_.block_count())
      throw std::invalid_argument("BlockUnitary: wrong number of blocks");
    for (std::size_t l = 0; l < blocks_.size(); ++l) {
      const auto n = static_cast<Eigen::Index>(indexing_.basis(l).size());
      const auto& u = blocks_[l];
      if (u.rows() != n || u.cols() != n)
        throw std::invalid_argument("BlockUnitary: block " + std::to_string(l) + " has wrong size");
      const double dev = (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
      if (!(dev <= kUnitarityTolerance))
        throw std::invalid_argument("BlockUnitary: block " + std::to_string(l) +
                                    " deviates from unitarity by " + std::to_string(dev));
    }
  }

  const SubspaceIndexing& indexing() const noexcept { return indexing_; }
  std::size_t system_dim() const noexcept { return indexing_.system_dim(); }
  std::size_t bath_dim() const noexcept { return indexing_.bath_dim(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const Eigen::MatrixXcd& block(std::size_t l) const { return blocks_.at(l); }

  /// Reassembled (dS dE) x (dS dE) matrix in the product basis |s, e>.
  Eigen::MatrixXcd full_matrix() const {
    const auto n = static_cast<Eigen::Index>(system_dim() * bath_dim());
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t l = 0; l < blocks_.size(); ++l) {
      const auto basis = indexing_.basis(l);
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b)
          full(static_cast<Eigen::Index>(indexing_.product_index(basis[b].system, basis[b].bath)),
               static_cast<Eigen::Index>(indexing_.product_index(basis[a].system, basis[a].bath))) =
              blocks_[l](static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
    }
    return full;
  }

 private:
  SubspaceIndexing indexing_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// |i, j> -> |j, i>. Requires dS = dE.
inline BlockUnitary build_swap(std::size_t dS, std::size_t dE) {
  if (dS != dE)
    throw std::invalid_argument("build_swap: SWAP needs dS = dE (got dS = " + std::to_string(dS) +
                                ", dE = " + std::to_string(dE) + ")");
  if (dS < 2) throw std::invalid_argument("build_swap: dimension must be at least 2");
  SubspaceIndexing idx(dS, dE);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(idx.block_count());
  for (std::size_t l = 0; l < idx.block_count(); ++l) {
    const auto basis = idx.basis(l);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const auto [l2, b] = idx.locate(basis[a].bath, basis[a].system);
      u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = 1.0;
    }
    blocks.push_back(std::move(u));
  }
  return BlockUnitary(std::move(idx), std::move(blocks));
}

inline BlockUnitary build_swap(std::size_t d) { return build_swap(d, d); }

/// Flip-flop generator restricted to H_l, in units of the coupling J:
/// <s-1, e+1| V |s, e> = sqrt(s) sqrt(e+1), real symmetric tridiagonal.
inline Eigen::MatrixXd jaynes_cummings_generator(const SubspaceIndexing& idx, std::size_t l) {
  const auto basis = idx.basis(l);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a + 1 < n; ++a) {
    const auto& from = basis[static_cast<std::size_t>(a)];
    const double element =
        std::sqrt(static_cast<double>(from.system)) * std::sqrt(static_cast<double>(from.bath + 1));
    v(a + 1, a) = element;
    v(a, a + 1) = element;
  }
  return v;
}

/// U = exp(-i theta V) with theta = J T_int, block by block through the
/// eigendecomposition of each real symmetric V_l.
inline BlockUnitary build_jaynes_cummings(std::size_t dS, std::size_t dE, double theta) {
  if (dS < 2 || dE < 2) throw std::invalid_argument("build_jaynes_cummings: dimensions must be at least 2");
  if (!std::isfinite(theta)) throw std::invalid_argument("build_jaynes_cummings: theta must be finite");
  SubspaceIndexing idx(dS, dE);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(idx.block_count());
  for (std::size_t l = 0; l < idx.block_count(); ++l) {
    const Eigen::MatrixXd v = jaynes_cummings_generator(idx, l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("build_jaynes_cummings: eigendecomposition failed in block " +
                               std::to_string(l));
    const Eigen::MatrixXcd w = eig.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd phases(v.rows());
    for (Eigen::Index k = 0; k < v.rows(); ++k)
      phases(k) = std::polar(1.0, -theta * eig.eigenvalues()(k));
    blocks.push_back(w * phases.asDiagonal() * w.adjoint());
  }
  return BlockUnitary(std::move(idx), std::move(blocks));
}

/// True iff ||[U, N_S (x) 1 + 1 (x) N_E]||_max <= 1e-12 for a full-space
/// matrix in the product basis |s, e> (index s * dE + e).
inline bool verify_number_conservation(const Eigen::MatrixXcd& full, std::size_t dS, std::size_t dE) {
  const auto n = static_cast<Eigen::Index>(dS * dE);
  if (full.rows() != n || full.cols() != n)
    throw std::invalid_argument("verify_number_conservation: matrix size does not match dS * dE");
  // [U, N]_{ab} = U_{ab} (n_b - n_a) for diagonal N.
  double worst = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto na = static_cast<double>(static_cast<std::size_t>(a) / dE + static_cast<std::size_t>(a) % dE);
      const auto nb = static_cast<double>(static_cast<std::size_t>(b) / dE + static_cast<std::size_t>(b) % dE);
      worst = std::max(worst, std::abs(full(a, b)) * std::abs(nb - na));
    }
  return worst <= kUnitarityTolerance;
}

inline bool verify_number_conservation(const BlockUnitary& u) {
  return verify_number_conservation(u.full_matrix(), u.system_dim(), u.bath_dim());
}

}  // namespace thermocollide
