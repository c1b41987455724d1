// Stochastic thermodynamics of a single cycle. A trajectory is the record of
// number measurements (j_0, ..., j_N = k_0, k_1, ..., k_M); its heats follow
// from number conservation, its probability from the pseudo-thermal states.
//
// Definedness of the stochastic efficiency is always decided in exact
// rational arithmetic on the decimal values of the engine parameters, so a
// heat that vanishes analytically is never mistaken for rounding noise.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thermocollide/engine.hpp"
#include "thermocollide/exact.hpp"
#include "thermocollide/spectra.hpp"

namespace thermocollide {

struct Trajectory {
  std::vector<std::size_t> j;  // j_0 .. j_N
  std::vector<std::size_t> k;  // k_1 .. k_M (k_0 is j_N)
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

enum class FilterMode {
  nonzero_heat,     // Q_E != 0
  strict_positive,  // Q_E > 0 and W > 0
};

enum class GroupingMode {
  floating,        // |eta_a - eta_b| <= 1e-10 max(1, |eta_a|)
  exact_rational,  // equal as rationals
};

struct TrajectoryQuantities {
  double q_hot = 0.0;    // Q_E = sum_n omega_n (j_n - j_{n-1})
  double q_cold = 0.0;   // Q_R = sum_m Omega_m (k_{m-1} - k_m)
  double work = 0.0;     // W = dE + Q_E - Q_R
  double delta_e = 0.0;  // <j_0|H_S|j_0> - <k_M|H_S|k_M>
  std::optional<double> efficiency;
  long sigma_hot = 0;    // sum_{n < N} j_n
  long sigma_cold = 0;   // sum_{m < M} k_m
  double delta_script_e = 0.0;  // N r_beta Q_E
  double delta_script_r = 0.0;  // M Q_R
  double r_beta = 0.0;
};

struct EfficiencyBin {
  double eta = 0.0;
  double probability = 0.0;
};

struct EfficiencyDistribution {
  std::vector<EfficiencyBin> bins;  // sorted by eta, probabilities sum to 1
  double defined_probability = 0.0; // mass of defined trajectories before rescaling
  double total_probability = 0.0;   // mass of all trajectories visited
  double most_likely_eta = std::numeric_limits<double>::quiet_NaN();
  std::optional<Rational> most_likely_eta_exact;  // exact_rational grouping only
  std::optional<Trajectory> most_likely_trajectory;
  double most_likely_trajectory_probability = 0.0;
  std::uint64_t trajectories = 0;
  std::uint64_t defined_trajectories = 0;
  FilterMode filter = FilterMode::nonzero_heat;
  GroupingMode grouping = GroupingMode::floating;
};

struct DistributionOptions {
  FilterMode filter = FilterMode::nonzero_heat;
  GroupingMode grouping = GroupingMode::floating;
  std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
  unsigned threads = 0;  // sampling workers; 0 means hardware concurrency
};

class EnumerationCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Precomputed per-spec tables shared by the trajectory operations. Digits are
/// the flattened outcomes (j_0, ..., j_N, k_1, ..., k_M).
class TrajectoryModel {
 public:
  struct Features {
    std::size_t j0 = 0, jN = 0, kM = 0;
    long sigma_hot = 0, sigma_cold = 0;
  };
  struct ExactValues {
    Rational q_hot, q_cold, work;
  };

  explicit TrajectoryModel(const EngineSpec& spec)
      : spec_(spec), sched_(frequency_schedule(spec)), energies_(spec.system_energies()) {
    const std::size_t d = spec_.d_system;
    auto log_table = [d](const PopulationState& p) {
      std::vector<double> t(d);
      for (std::size_t i = 0; i < d; ++i) t[i] = p[i] > 0.0 ? std::log(p[i]) : -std::numeric_limits<double>::infinity();
      return t;
    };
    for (double w : sched_.hot) log_hot_.push_back(log_table(detail::gibbs_from_exponent(spec_.beta_hot * w, d)));
    for (double w : sched_.cold) log_cold_.push_back(log_table(detail::gibbs_from_exponent(spec_.beta_cold * w, d)));
    log_initial_ = log_cold_.back();
    hot_step_ = (spec_.omega_hot_last - sched_.hot_origin) / static_cast<double>(spec_.n_hot);
    cold_step_ = (spec_.omega_cold_last - sched_.cold_origin) / static_cast<double>(spec_.n_cold);

    const Rational bE = exact_decimal(spec_.beta_hot), bR = exact_decimal(spec_.beta_cold);
    x_wN_ = exact_decimal(spec_.omega_hot_last);
    x_OM_ = exact_decimal(spec_.omega_cold_last);
    x_w0_ = bR / bE * x_OM_;
    x_O0_ = bE / bR * x_wN_;
    x_hot_step_ = (x_wN_ - x_w0_) / static_cast<long>(spec_.n_hot);
    x_cold_step_ = (x_OM_ - x_O0_) / static_cast<long>(spec_.n_cold);
    x_r_beta_ = bE / bR;
    if (spec_.h_system_diag.empty())
      for (std::size_t i = 0; i < d; ++i) x_energies_.push_back(x_OM_ * static_cast<long>(i));
    else
      for (double h : spec_.h_system_diag) x_energies_.push_back(exact_decimal(h));
  }

  const EngineSpec& spec() const noexcept { return spec_; }
  const FrequencySchedule& schedule() const noexcept { return sched_; }
  std::size_t length() const noexcept { return spec_.n_hot + spec_.n_cold + 1; }
  std::size_t radix() const noexcept { return spec_.d_system; }
  Rational exact_carnot() const { return 1 - x_r_beta_; }
  std::span<const double> log_initial() const noexcept { return log_initial_; }
  std::span<const double> log_hot(std::size_t n) const { return log_hot_.at(n); }
  std::span<const double> log_cold(std::size_t m) const { return log_cold_.at(m); }

  std::vector<std::size_t> digits(const Trajectory& t) const {
    if (t.j.size() != spec_.n_hot + 1 || t.k.size() != spec_.n_cold)
      throw std::invalid_argument("trajectory length does not match (N + 1, M)");
    std::vector<std::size_t> out(t.j);
    out.insert(out.end(), t.k.begin(), t.k.end());
    for (auto v : out)
      if (v >= spec_.d_system) throw std::invalid_argument("trajectory outcome exceeds d_system - 1");
    return out;
  }

  Trajectory trajectory(std::span<const std::size_t> dg) const {
    Trajectory t;
    t.j.assign(dg.begin(), dg.begin() + static_cast<std::ptrdiff_t>(spec_.n_hot + 1));
    t.k.assign(dg.begin() + static_cast<std::ptrdiff_t>(spec_.n_hot + 1), dg.end());
    return t;
  }

  double log_probability(std::span<const std::size_t> dg) const {
    const std::size_t N = spec_.n_hot;
    double lp = log_initial_[dg[0]];
    for (std::size_t n = 1; n <= N; ++n) lp += log_hot_[n - 1][dg[n]];
    for (std::size_t m = 1; m <= spec_.n_cold; ++m) lp += log_cold_[m - 1][dg[N + m]];
    return lp;
  }

  Features features(std::span<const std::size_t> dg) const {
    const std::size_t N = spec_.n_hot, M = spec_.n_cold;
    Features f;
    f.j0 = dg[0];
    f.jN = dg[N];
    f.kM = M > 0 ? dg[N + M] : dg[N];
    for (std::size_t n = 0; n < N; ++n) f.sigma_hot += static_cast<long>(dg[n]);
    for (std::size_t m = 0; m < M; ++m) f.sigma_cold += static_cast<long>(dg[N + m]);
    return f;
  }

  /// Exact heats and work of every trajectory sharing these features, via
  ///   Q_E = omega_N j_N - omega_0 j_0 - delta_omega sigma_E,
  ///   Q_R = Omega_0 j_N + delta_Omega sigma_R - Omega_M k_M.
  ExactValues exact_values(const Features& f) const {
    ExactValues v;
    v.q_hot = x_wN_ * static_cast<long>(f.jN) - x_w0_ * static_cast<long>(f.j0) - x_hot_step_ * f.sigma_hot;
    v.q_cold = x_O0_ * static_cast<long>(f.jN) + x_cold_step_ * f.sigma_cold - x_OM_ * static_cast<long>(f.kM);
    v.work = x_energies_[f.j0] - x_energies_[f.kM] + v.q_hot - v.q_cold;
    return v;
  }

  /// W / Q_E in floating point from the same closed forms.
  double float_efficiency(const Features& f) const {
    const double q_hot = spec_.omega_hot_last * static_cast<double>(f.jN) -
                         sched_.hot_origin * static_cast<double>(f.j0) - hot_step_ * static_cast<double>(f.sigma_hot);
    const double q_cold = sched_.cold_origin * static_cast<double>(f.jN) +
                          cold_step_ * static_cast<double>(f.sigma_cold) -
                          spec_.omega_cold_last * static_cast<double>(f.kM);
    return (energies_[f.j0] - energies_[f.kM] + q_hot - q_cold) / q_hot;
  }

  static bool defined(const ExactValues& v, FilterMode mode) {
    if (mode == FilterMode::strict_positive) return v.q_hot > 0 && v.work > 0;
    return v.q_hot != 0;
  }

  TrajectoryQuantities quantities(std::span<const std::size_t> dg, FilterMode mode) const {
    const std::size_t N = spec_.n_hot, M = spec_.n_cold;
    TrajectoryQuantities q;
    for (std::size_t n = 1; n <= N; ++n)
      q.q_hot += sched_.hot[n - 1] * (static_cast<double>(dg[n]) - static_cast<double>(dg[n - 1]));
    for (std::size_t m = 1; m <= M; ++m)
      q.q_cold += sched_.cold[m - 1] * (static_cast<double>(dg[N + m - 1]) - static_cast<double>(dg[N + m]));
    const auto f = features(dg);
    q.delta_e = energies_[f.j0] - energies_[f.kM];
    q.work = q.delta_e + q.q_hot - q.q_cold;
    q.sigma_hot = f.sigma_hot;
    q.sigma_cold = f.sigma_cold;
    q.r_beta = spec_.beta_ratio();
    const double OM = spec_.omega_cold_last, wr = spec_.omega_hot_last * q.r_beta;
    const auto Nd = static_cast<double>(N), Md = static_cast<double>(M);
    q.delta_script_e = OM * (static_cast<double>(f.sigma_hot) - Nd * static_cast<double>(f.j0)) -
                       wr * (static_cast<double>(f.sigma_hot) - Nd * static_cast<double>(f.jN));
    q.delta_script_r = OM * (static_cast<double>(f.sigma_cold) - Md * static_cast<double>(f.kM)) -
                       wr * (static_cast<double>(f.sigma_cold) - Md * static_cast<double>(f.jN));
    if (defined(exact_values(f), mode)) q.efficiency = q.work / q.q_hot;
    return q;
  }

  /// Trajectory-level Carnot condition (N/M)((dR - M dE) / dEcal) = 1,
  /// equivalently eta(gamma) = eta_C, decided exactly.
  bool carnot_condition(std::span<const std::size_t> dg) const {
    const auto v = exact_values(features(dg));
    if (v.q_hot == 0) return false;
    return v.work / v.q_hot == exact_carnot();
  }

 private:
  EngineSpec spec_;
  FrequencySchedule sched_;
  std::vector<double> energies_;
  double hot_step_ = 0.0, cold_step_ = 0.0;
  std::vector<double> log_initial_;
  std::vector<std::vector<double>> log_hot_, log_cold_;
  Rational x_wN_, x_OM_, x_w0_, x_O0_, x_hot_step_, x_cold_step_, x_r_beta_;
  std::vector<Rational> x_energies_;
};

namespace detail {

template <class Visitor>
void for_each_digits(const TrajectoryModel& model, Visitor&& visit) {
  std::vector<std::size_t> dg(model.length(), 0);
  const std::size_t radix = model.radix();
  while (true) {
    visit(std::span<const std::size_t>(dg));
    std::size_t pos = dg.size();
    while (pos > 0) {
      --pos;
      if (++dg[pos] < radix) break;
      dg[pos] = 0;
      if (pos == 0) return;
    }
  }
}

}  // namespace detail

/// Visits every trajectory in mixed-radix order, j_0 most significant, with
/// its probability.
template <class Visitor>
void for_each_trajectory(const TrajectoryModel& model, Visitor&& visit) {
  detail::for_each_digits(model, [&](std::span<const std::size_t> dg) {
    visit(dg, std::exp(model.log_probability(dg)));
  });
}

inline double trajectory_probability(const Trajectory& gamma, const EngineSpec& spec) {
  const TrajectoryModel model(spec);
  return std::exp(model.log_probability(model.digits(gamma)));
}

inline TrajectoryQuantities trajectory_quantities(const Trajectory& gamma, const EngineSpec& spec,
                                                  FilterMode filter = FilterMode::nonzero_heat) {
  const TrajectoryModel model(spec);
  return model.quantities(model.digits(gamma), filter);
}

inline bool satisfies_carnot_condition(const Trajectory& gamma, const EngineSpec& spec) {
  const TrajectoryModel model(spec);
  return model.carnot_condition(model.digits(gamma));
}

namespace detail {

// Aggregates weighted trajectories into efficiency bins. Shards built over
// disjoint, ordered parts of the trajectory stream merge associatively.
class DistributionBuilder {
 public:
  DistributionBuilder(const TrajectoryModel& model, const DistributionOptions& opt) : model_(&model), opt_(opt) {}
  DistributionBuilder(const DistributionBuilder&) = delete;
  DistributionBuilder& operator=(const DistributionBuilder&) = delete;
  DistributionBuilder(DistributionBuilder&&) = default;
  DistributionBuilder& operator=(DistributionBuilder&&) = default;

  void add(std::span<const std::size_t> dg, double weight, double log_p) {
    ++visited_;
    total_.add(weight);
    const auto f = model_->features(dg);
    const std::uint64_t key = pack(f);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, classify(f)).first;
    CompensatedSum* bin = it->second;
    if (!bin) return;
    ++defined_;
    bin->add(weight);
    if (!best_ || log_p > best_log_p_) {
      best_ = std::vector<std::size_t>(dg.begin(), dg.end());
      best_log_p_ = log_p;
    }
  }

  // `later` covers trajectories that come after this builder's in stream order.
  void merge(DistributionBuilder&& later) {
    visited_ += later.visited_;
    defined_ += later.defined_;
    total_.add(later.total_);
    for (auto& [eta, sum] : later.exact_bins_) exact_bins_[eta].add(sum);
    for (auto& [eta, sum] : later.float_bins_) float_bins_[eta].add(sum);
    if (later.best_ && (!best_ || later.best_log_p_ > best_log_p_)) {
      best_ = std::move(later.best_);
      best_log_p_ = later.best_log_p_;
    }
  }

  EfficiencyDistribution finish() const {
    EfficiencyDistribution out;
    out.filter = opt_.filter;
    out.grouping = opt_.grouping;
    out.trajectories = visited_;
    out.defined_trajectories = defined_;
    out.total_probability = total_.value();

    std::vector<std::optional<Rational>> exact_keys;
    if (opt_.grouping == GroupingMode::exact_rational) {
      for (const auto& [eta, sum] : exact_bins_) {
        out.bins.push_back({to_double(eta), sum.value()});
        exact_keys.emplace_back(eta);
      }
    } else {
      // Greedy grouping against the first member; the reported eta is the
      // member carrying the most probability.
      double anchor = 0.0, rep = 0.0, rep_mass = -1.0;
      CompensatedSum group;
      bool open = false;
      auto close = [&] {
        if (open) out.bins.push_back({rep, group.value()});
      };
      for (const auto& [eta, sum] : float_bins_) {
        if (!open || std::abs(eta - anchor) > 1e-10 * std::max(1.0, std::abs(anchor))) {
          close();
          anchor = eta;
          group = CompensatedSum{};
          rep_mass = -1.0;
          open = true;
        }
        group.add(sum);
        if (sum.value() > rep_mass) {
          rep_mass = sum.value();
          rep = eta;
        }
      }
      close();
    }

    CompensatedSum defined_mass;
    for (const auto& b : out.bins) defined_mass.add(b.probability);
    out.defined_probability = defined_mass.value();
    if (out.defined_probability > 0.0)
      for (auto& b : out.bins) b.probability /= out.defined_probability;

    std::size_t arg = 0;
    for (std::size_t i = 1; i < out.bins.size(); ++i)
      if (out.bins[i].probability > out.bins[arg].probability) arg = i;
    if (!out.bins.empty()) {
      out.most_likely_eta = out.bins[arg].eta;
      if (!exact_keys.empty()) out.most_likely_eta_exact = exact_keys[arg];
    }
    if (best_) {
      out.most_likely_trajectory = model_->trajectory(*best_);
      out.most_likely_trajectory_probability = std::exp(best_log_p_);
    }
    return out;
  }

 private:
  static std::uint64_t pack(const TrajectoryModel::Features& f) {
    return (static_cast<std::uint64_t>(f.j0) << 56) ^ (static_cast<std::uint64_t>(f.jN) << 48) ^
           (static_cast<std::uint64_t>(f.kM) << 40) ^ (static_cast<std::uint64_t>(f.sigma_hot) << 20) ^
           static_cast<std::uint64_t>(f.sigma_cold);
  }

  // Map nodes are stable, so each feature class keeps a pointer to its bin;
  // nullptr marks an undefined efficiency.
  CompensatedSum* classify(const TrajectoryModel::Features& f) {
    const auto v = model_->exact_values(f);
    if (!TrajectoryModel::defined(v, opt_.filter)) return nullptr;
    if (opt_.grouping == GroupingMode::exact_rational) return &exact_bins_[v.work / v.q_hot];
    return &float_bins_[model_->float_efficiency(f)];
  }

  const TrajectoryModel* model_;
  DistributionOptions opt_;
  std::unordered_map<std::uint64_t, CompensatedSum*> cache_;
  std::map<Rational, CompensatedSum> exact_bins_;
  std::map<double, CompensatedSum> float_bins_;
  CompensatedSum total_;
  std::uint64_t visited_ = 0, defined_ = 0;
  std::optional<std::vector<std::size_t>> best_;
  double best_log_p_ = -std::numeric_limits<double>::infinity();
};

inline void check_feature_packing(const EngineSpec& spec) {
  const auto d = spec.d_system;
  if (d > 255 || spec.n_hot * (d - 1) >= (std::size_t{1} << 20) || spec.n_cold * (d - 1) >= (std::size_t{1} << 20))
    throw std::invalid_argument("trajectory analysis supports d_system <= 255 and sums below 2^20");
}

}  // namespace detail

/// Exact distribution of stochastic efficiencies by exhaustive enumeration of
/// all d_system^(N + M + 1) trajectories. Probabilities are rescaled over the
/// trajectories whose efficiency is defined. Ties for the most likely
/// trajectory go to the first one in enumeration order.
inline EfficiencyDistribution enumerate_distribution(const EngineSpec& spec, const DistributionOptions& opt = {}) {
  detail::check_feature_packing(spec);
  const TrajectoryModel model(spec);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < model.length(); ++i) {
    if (count > opt.enumeration_cap / model.radix())
      throw EnumerationCapExceeded("enumerate_distribution: more than " + std::to_string(opt.enumeration_cap) +
                                   " trajectories; use sample_distribution instead");
    count *= model.radix();
  }
  detail::DistributionBuilder builder(model, opt);
  detail::for_each_digits(model, [&](std::span<const std::size_t> dg) {
    const double lp = model.log_probability(dg);
    builder.add(dg, std::exp(lp), lp);
  });
  return builder.finish();
}

namespace detail {

inline std::vector<std::vector<double>> cumulative_tables(const TrajectoryModel& model) {
  std::vector<std::vector<double>> out;
  auto cdf = [&](std::span<const double> logs) {
    std::vector<double> c(logs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) c[i] = (acc += std::exp(logs[i]));
    return c;
  };
  out.push_back(cdf(model.log_initial()));
  for (std::size_t n = 0; n < model.spec().n_hot; ++n) out.push_back(cdf(model.log_hot(n)));
  for (std::size_t m = 0; m < model.spec().n_cold; ++m) out.push_back(cdf(model.log_cold(m)));
  return out;
}

inline std::size_t draw(std::mt19937_64& rng, const std::vector<double>& cdf) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cdf.back();
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  return cdf.size() - 1;
}

inline constexpr std::uint64_t kSamplesPerShard = std::uint64_t{1} << 16;

}  // namespace detail

/// Monte Carlo estimate of the efficiency distribution from i.i.d. draws of
/// the product measure. Shard s draws from an mt19937_64 seeded with
/// seed_seq{seed_lo, seed_hi, s}, so results do not depend on thread count.
inline EfficiencyDistribution sample_distribution(const EngineSpec& spec, std::uint64_t n_samples, std::uint64_t seed,
                                                  const DistributionOptions& opt = {}) {
  if (n_samples < 1) throw std::invalid_argument("sample_distribution: n_samples must be at least 1");
  detail::check_feature_packing(spec);
  const TrajectoryModel model(spec);
  const auto cdfs = detail::cumulative_tables(model);
  const std::uint64_t shards = (n_samples + detail::kSamplesPerShard - 1) / detail::kSamplesPerShard;

  auto run_shard = [&](std::uint64_t s) {
    detail::DistributionBuilder b(model, opt);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t begin = s * detail::kSamplesPerShard;
    const std::uint64_t end = std::min(n_samples, begin + detail::kSamplesPerShard);
    std::vector<std::size_t> dg(model.length());
    for (std::uint64_t i = begin; i < end; ++i) {
      for (std::size_t pos = 0; pos < dg.size(); ++pos) dg[pos] = detail::draw(rng, cdfs[pos]);
      b.add(dg, 1.0, model.log_probability(dg));
    }
    return b;
  };

  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, shards));
  std::vector<detail::DistributionBuilder> parts;
  parts.reserve(shards);
  for (std::uint64_t first = 0; first < shards; first += workers) {
    std::vector<std::future<detail::DistributionBuilder>> batch;
    for (std::uint64_t s = first; s < std::min<std::uint64_t>(shards, first + workers); ++s)
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_shard, s));
    for (auto& f : batch) parts.push_back(f.get());
  }
  detail::DistributionBuilder merged(model, opt);
  for (auto& p : parts) merged.merge(std::move(p));
  return merged.finish();
}

/// eta(gamma_pmax) = eta_C - (Omega_M - omega_N r_beta) / (M omega_N): the
/// trajectory absorbing one quantum at omega_N and releasing it at Omega_1.
inline double most_likely_trajectory_efficiency(const EngineSpec& spec) {
  spec.validate();
  const double r = spec.beta_ratio();
  return spec.carnot() -
         (spec.omega_cold_last - spec.omega_hot_last * r) / (static_cast<double>(spec.n_cold) * spec.omega_hot_last);
}

enum class CarnotCellStatus { carnot, not_carnot, undefined, skipped };

struct CarnotCell {
  std::size_t n_hot = 0;
  std::size_t n_cold = 0;
  CarnotCellStatus status = CarnotCellStatus::skipped;
  double most_likely_eta = std::numeric_limits<double>::quiet_NaN();
};

/// For each (N, M) cell, whether the most likely stochastic efficiency equals
/// eta_C. Cells beyond the enumeration cap are marked skipped; cells with no
/// defined efficiency are marked undefined.
inline std::vector<CarnotCell> carnot_condition_grid(const EngineSpec& spec_template,
                                                     std::span<const std::size_t> n_values,
                                                     std::span<const std::size_t> m_values,
                                                     DistributionOptions opt = {.filter = FilterMode::strict_positive,
                                                                                .grouping = GroupingMode::exact_rational}) {
  std::vector<CarnotCell> grid;
  for (auto n : n_values)
    for (auto m : m_values) {
      CarnotCell cell{n, m, CarnotCellStatus::skipped, std::numeric_limits<double>::quiet_NaN()};
      EngineSpec s = spec_template;
      s.n_hot = n;
      s.n_cold = m;
      try {
        const auto dist = enumerate_distribution(s, opt);
        if (dist.bins.empty()) {
          cell.status = CarnotCellStatus::undefined;
        } else {
          cell.most_likely_eta = dist.most_likely_eta;
          bool equal = false;
          if (dist.most_likely_eta_exact)
            equal = *dist.most_likely_eta_exact == TrajectoryModel(s).exact_carnot();
          else
            equal = std::abs(dist.most_likely_eta - s.carnot()) <= 1e-10 * std::max(1.0, std::abs(s.carnot()));
          cell.status = equal ? CarnotCellStatus::carnot : CarnotCellStatus::not_carnot;
        }
      } catch (const EnumerationCapExceeded&) {
        cell.status = CarnotCellStatus::skipped;
      }
      grid.push_back(cell);
    }
  return grid;
}

inline const char* to_string(CarnotCellStatus s) {
  switch (s) {
    case CarnotCellStatus::carnot: return "carnot";
    case CarnotCellStatus::not_carnot: return "not_carnot";
    case CarnotCellStatus::undefined: return "undefined";
    case CarnotCellStatus::skipped: return "skipped";
  }
  return "?";
}

}  // namespace thermocollide
