// Engine cycles: frequency ramps, ideal (eps -> 0) averages, simulated
// finite-eps cycles with minimal collision counts, repeated cycles with frozen
// collision counts, particle-dimension scans and the finite-dimension
// efficiency bound.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thermocollide/collision_channel.hpp"
#include "thermocollide/hilbert_blocks.hpp"
#include "thermocollide/spectra.hpp"

namespace thermocollide {

struct Swap {
  friend bool operator==(const Swap&, const Swap&) = default;
};

/// Rectangular flip-flop pulse; only theta = J * T_int enters the unitary.
struct JaynesCummings {
  double theta = std::numbers::pi / 2;
  friend bool operator==(const JaynesCummings&, const JaynesCummings&) = default;
};

using Interaction = std::variant<Swap, JaynesCummings>;

inline BlockUnitary build_interaction(const Interaction& interaction, std::size_t dS, std::size_t dE) {
  if (std::holds_alternative<Swap>(interaction)) return build_swap(dS, dE);
  return build_jaynes_cummings(dS, dE, std::get<JaynesCummings>(interaction).theta);
}

/// Full experiment configuration. Defaults are the two-temperature setting
/// beta_hot = 1e-2, beta_cold = 1, omega_N = 10, Omega_M = 1, N = M = 10.
struct EngineSpec {
  double beta_hot = 1e-2;
  double beta_cold = 1.0;
  double omega_hot_last = 10.0;   // omega_N
  double omega_cold_last = 1.0;   // Omega_M
  std::size_t n_hot = 10;         // N
  std::size_t n_cold = 10;        // M
  std::size_t d_system = 2;
  std::size_t d_hot = 2;
  std::size_t d_cold = 2;
  Interaction interaction = JaynesCummings{};
  double eps = 1e-9;
  /// <j|H_S|j>; empty means the resonant choice Omega_M * j.
  std::vector<double> h_system_diag;
  std::size_t max_collisions = kDefaultMaxCollisions;
  /// Simulated averages must match the ideal cycle within
  /// factor * eps * max(omega_0, Omega_M).
  double simulation_tolerance_factor = 1e3;

  double carnot() const noexcept { return 1.0 - beta_hot / beta_cold; }
  double beta_ratio() const noexcept { return beta_hot / beta_cold; }

  std::vector<double> system_energies() const {
    if (!h_system_diag.empty()) return h_system_diag;
    std::vector<double> h(d_system);
    for (std::size_t j = 0; j < d_system; ++j) h[j] = omega_cold_last * static_cast<double>(j);
    return h;
  }

  /// The boundary beta_hot * omega_N == beta_cold * Omega_M is accepted: it is
  /// the trivial engine with identical hot and cold pseudo-thermal states.
  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("EngineSpec: " + what); };
    if (!(std::isfinite(beta_hot) && beta_hot > 0.0)) fail("beta_hot must be finite and positive");
    if (!(std::isfinite(beta_cold) && beta_cold > 0.0)) fail("beta_cold must be finite and positive");
    if (!(beta_hot < beta_cold)) fail("hot bath must be hotter (beta_hot < beta_cold)");
    if (!(std::isfinite(omega_hot_last) && omega_hot_last > 0.0)) fail("omega_hot_last must be positive");
    if (!(std::isfinite(omega_cold_last) && omega_cold_last > 0.0)) fail("omega_cold_last must be positive");
    if (beta_hot * omega_hot_last > beta_cold * omega_cold_last)
      fail("positive work requires beta_hot * omega_hot_last < beta_cold * omega_cold_last");
    if (n_hot < 1 || n_cold < 1) fail("ensemble counts must be at least 1");
    if (d_system < 2 || d_hot < 2 || d_cold < 2) fail("dimensions must be at least 2");
    if (std::holds_alternative<Swap>(interaction) && !(d_system == d_hot && d_system == d_cold))
      fail("swap interaction needs d_system = d_hot = d_cold");
    if (const auto* jc = std::get_if<JaynesCummings>(&interaction); jc && !std::isfinite(jc->theta))
      fail("jaynes_cummings theta must be finite");
    if (!(eps > 0.0 && eps <= 1.0)) fail("eps must lie in (0, 1]");
    if (!h_system_diag.empty() && h_system_diag.size() != d_system)
      fail("h_system_diag must have d_system entries");
    for (double h : h_system_diag)
      if (!std::isfinite(h)) fail("h_system_diag entries must be finite");
    if (max_collisions < 1) fail("max_collisions must be positive");
  }
};

/// Linear ramps omega_n = omega_0 + n (omega_N - omega_0) / N and
/// Omega_m = Omega_0 + m (Omega_M - Omega_0) / M, with
/// omega_0 = (beta_cold / beta_hot) Omega_M and Omega_0 = (beta_hot / beta_cold) omega_N.
/// Vectors are indexed from zero: hot[n - 1] is omega_n.
struct FrequencySchedule {
  std::vector<double> hot;
  double hot_origin = 0.0;
  std::vector<double> cold;
  double cold_origin = 0.0;
};

inline FrequencySchedule frequency_schedule(const EngineSpec& spec) {
  spec.validate();
  FrequencySchedule s;
  s.hot_origin = spec.beta_cold / spec.beta_hot * spec.omega_cold_last;
  s.cold_origin = spec.beta_hot / spec.beta_cold * spec.omega_hot_last;
  const auto N = static_cast<double>(spec.n_hot);
  const auto M = static_cast<double>(spec.n_cold);
  for (std::size_t n = 1; n <= spec.n_hot; ++n)
    s.hot.push_back(s.hot_origin + static_cast<double>(n) * (spec.omega_hot_last - s.hot_origin) / N);
  for (std::size_t m = 1; m <= spec.n_cold; ++m)
    s.cold.push_back(s.cold_origin + static_cast<double>(m) * (spec.omega_cold_last - s.cold_origin) / M);
  s.hot.back() = spec.omega_hot_last;
  s.cold.back() = spec.omega_cold_last;
  return s;
}

/// Averages of one cycle. Heats and work come from number expectations; the
/// entropic decomposition satisfies beta_hot <Q_E> = delta_S - d_hot_sum and
/// beta_cold <Q_R> = delta_S + d_cold_sum.
struct CycleReport {
  double avg_heat_hot = 0.0;   // <Q_E>, absorbed from the hot bath
  double avg_heat_cold = 0.0;  // <Q_R>, released to the cold bath
  double avg_work = 0.0;
  double efficiency = 0.0;     // NaN when <Q_E> == 0
  double delta_S = 0.0;
  double d_hot_sum = 0.0;
  double d_cold_sum = 0.0;
  double carnot = 0.0;
};

namespace detail {

inline double mixed_tolerance(double a, double b, double rel, double abs_floor) {
  return rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

inline std::vector<PopulationState> hot_targets(const EngineSpec& spec, const FrequencySchedule& sched) {
  std::vector<PopulationState> t;
  for (double w : sched.hot) t.push_back(gibbs_from_exponent(spec.beta_hot * w, spec.d_system));
  return t;
}

inline std::vector<PopulationState> cold_targets(const EngineSpec& spec, const FrequencySchedule& sched) {
  std::vector<PopulationState> t;
  for (double w : sched.cold) t.push_back(gibbs_from_exponent(spec.beta_cold * w, spec.d_system));
  return t;
}

// Generalised bookkeeping for arbitrary (not necessarily pseudo-thermal)
// system states along the cycle. With g_n the hot targets and h_m the cold
// targets,
//   d_hot_sum  = sum_n D[rho_{n-1} || g_n] - D[rho_n || g_n]
//   d_cold_sum = sum_m D[sig_{m-1} || h_m] - D[sig_m || h_m] + S(rho_0) - S(sig_M)
// which reduce to the usual sums when every state equals its target, and keep
// both heat identities exact for finite eps.
inline CycleReport cycle_accounting(const EngineSpec& spec, const FrequencySchedule& sched,
                                    const PopulationState& initial, const std::vector<PopulationState>& hot,
                                    const std::vector<PopulationState>& cold) {
  CycleReport r;
  r.carnot = spec.carnot();

  const PopulationState* prev = &initial;
  for (std::size_t n = 0; n < hot.size(); ++n) {
    const double xh = spec.beta_hot * sched.hot[n];
    r.avg_heat_hot += sched.hot[n] * (hot[n].mean_number() - prev->mean_number());
    r.d_hot_sum += relative_entropy_to_gibbs(*prev, xh) - relative_entropy_to_gibbs(hot[n], xh);
    prev = &hot[n];
  }
  for (std::size_t m = 0; m < cold.size(); ++m) {
    const double xc = spec.beta_cold * sched.cold[m];
    r.avg_heat_cold += sched.cold[m] * (prev->mean_number() - cold[m].mean_number());
    r.d_cold_sum += relative_entropy_to_gibbs(*prev, xc) - relative_entropy_to_gibbs(cold[m], xc);
    prev = &cold[m];
  }
  r.delta_S = shannon_entropy(hot.back()) - shannon_entropy(initial);
  r.d_cold_sum += shannon_entropy(initial) - shannon_entropy(cold.back());
  r.avg_work = r.avg_heat_hot - r.avg_heat_cold;
  r.efficiency = r.avg_heat_hot != 0.0 ? r.avg_work / r.avg_heat_hot : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace detail

/// Ideal cycle: the system reaches every pseudo-thermal state exactly.
inline CycleReport analytic_cycle(const EngineSpec& spec) {
  const auto sched = frequency_schedule(spec);
  const auto hot = detail::hot_targets(spec, sched);
  const auto cold = detail::cold_targets(spec, sched);
  auto r = detail::cycle_accounting(spec, sched, cold.back(), hot, cold);

  const double scale = std::max(sched.hot_origin, spec.omega_cold_last) * static_cast<double>(spec.d_system);
  const double q_hot_entropic = (r.delta_S - r.d_hot_sum) / spec.beta_hot;
  const double q_cold_entropic = (r.delta_S + r.d_cold_sum) / spec.beta_cold;
  if (std::abs(q_hot_entropic - r.avg_heat_hot) >
          detail::mixed_tolerance(q_hot_entropic, r.avg_heat_hot, 1e-10, 1e-13 * scale) ||
      std::abs(q_cold_entropic - r.avg_heat_cold) >
          detail::mixed_tolerance(q_cold_entropic, r.avg_heat_cold, 1e-10, 1e-13 * scale))
    throw std::logic_error("analytic_cycle: number and entropic heat forms disagree");
  return r;
}

struct SingleEnsembleResult {
  double work;
  double efficiency;
  /// Work in the limit of an untruncated working substance.
  double work_limit_infinite_d_system;
};

/// Closed forms for N = M = 1:
///   W = (omega_1 - Omega_1) tr[N_S (rho^E1 - rho^R1)],  eta = 1 - Omega_1 / omega_1,
///   W_inf = (omega_1 - Omega_1)(e^{bR Omega_1} - e^{bE omega_1}) / ((e^{bR Omega_1} - 1)(e^{bE omega_1} - 1)).
inline SingleEnsembleResult single_ensemble_closed_form(const EngineSpec& spec) {
  spec.validate();
  if (spec.n_hot != 1 || spec.n_cold != 1)
    throw std::invalid_argument("single_ensemble_closed_form: requires n_hot = n_cold = 1");
  const double w = spec.omega_hot_last, o = spec.omega_cold_last;
  const auto hot = detail::gibbs_from_exponent(spec.beta_hot * w, spec.d_system);
  const auto cold = detail::gibbs_from_exponent(spec.beta_cold * o, spec.d_system);
  const double xe = spec.beta_hot * w, xr = spec.beta_cold * o;
  SingleEnsembleResult r;
  r.work = (w - o) * (hot.mean_number() - cold.mean_number());
  r.efficiency = 1.0 - o / w;
  r.work_limit_infinite_d_system = (w - o) * (std::exp(xr) - std::exp(xe)) / (std::expm1(xr) * std::expm1(xe));
  return r;
}

struct SimulatedCycleReport {
  std::vector<std::size_t> alpha_hot;
  std::vector<std::size_t> alpha_cold;
  std::size_t n_int = 0;
  double log_dim_hot = 0.0;   // ln dim(H_E) = (sum alpha_hot) ln d_hot
  double log_dim_cold = 0.0;
  CycleReport cycle;
  PopulationState initial_state = PopulationState::basis(1, 0);
  PopulationState final_state = PopulationState::basis(1, 0);
  std::vector<PopulationState> hot_states;   // after each hot ensemble
  std::vector<PopulationState> cold_states;  // after each cold ensemble
  /// Per-collision audits in execution order; the first hot_audit_count
  /// entries belong to the hot sweep. Empty unless requested.
  std::vector<CollisionAudit> audits;
  std::size_t hot_audit_count = 0;
};

struct SimulationOptions {
  bool record_audits = true;
};

namespace detail {

struct EngineChannels {
  BlockUnitary hot_unitary;
  BlockUnitary cold_unitary;
  std::vector<CollisionChannel> hot;
  std::vector<CollisionChannel> cold;
  std::vector<GibbsSpec> hot_baths;
  std::vector<GibbsSpec> cold_baths;
};

inline EngineChannels build_channels(const EngineSpec& spec, const FrequencySchedule& sched) {
  EngineChannels c{build_interaction(spec.interaction, spec.d_system, spec.d_hot),
                   build_interaction(spec.interaction, spec.d_system, spec.d_cold), {}, {}, {}, {}};
  for (double w : sched.hot) {
    c.hot_baths.push_back({spec.beta_hot, w, spec.d_hot});
    c.hot.push_back(channel_matrix(c.hot_unitary, c.hot_baths.back()));
  }
  for (double w : sched.cold) {
    c.cold_baths.push_back({spec.beta_cold, w, spec.d_cold});
    c.cold.push_back(channel_matrix(c.cold_unitary, c.cold_baths.back()));
  }
  return c;
}

inline void replay_audits(const BlockUnitary& u, const CollisionChannel& ch, const GibbsSpec& bath,
                          PopulationState state, std::size_t alpha, std::vector<CollisionAudit>& out) {
  for (std::size_t i = 0; i < alpha; ++i) {
    out.push_back(collide_with_audit(u, state, bath).second);
    state = apply(ch, state);
  }
}

inline PopulationState apply_n(const CollisionChannel& ch, PopulationState state, std::size_t times) {
  for (std::size_t i = 0; i < times; ++i) state = apply(ch, state);
  return state;
}

}  // namespace detail

/// One cycle from rho^{R_M}: hot sweep n = 1..N then cold sweep m = 1..M, each
/// ensemble applied the minimal number of times to get within eps of its
/// pseudo-thermal state. Propagates NonConvergence.
inline SimulatedCycleReport simulate_cycle(const EngineSpec& spec, const SimulationOptions& options = {}) {
  const auto sched = frequency_schedule(spec);
  const auto channels = detail::build_channels(spec, sched);
  const auto hot_t = detail::hot_targets(spec, sched);
  const auto cold_t = detail::cold_targets(spec, sched);

  SimulatedCycleReport r;
  r.initial_state = cold_t.back();
  PopulationState state = r.initial_state;
  for (std::size_t n = 0; n < spec.n_hot; ++n) {
    auto th = pseudo_thermalize(state, channels.hot[n], hot_t[n], spec.eps, spec.max_collisions);
    if (options.record_audits)
      detail::replay_audits(channels.hot_unitary, channels.hot[n], channels.hot_baths[n], state, th.collisions,
                            r.audits);
    r.alpha_hot.push_back(th.collisions);
    state = std::move(th.state);
    r.hot_states.push_back(state);
  }
  r.hot_audit_count = r.audits.size();
  for (std::size_t m = 0; m < spec.n_cold; ++m) {
    auto th = pseudo_thermalize(state, channels.cold[m], cold_t[m], spec.eps, spec.max_collisions);
    if (options.record_audits)
      detail::replay_audits(channels.cold_unitary, channels.cold[m], channels.cold_baths[m], state,
                            th.collisions, r.audits);
    r.alpha_cold.push_back(th.collisions);
    state = std::move(th.state);
    r.cold_states.push_back(state);
  }
  r.final_state = state;

  std::size_t hot_total = 0, cold_total = 0;
  for (auto a : r.alpha_hot) hot_total += a;
  for (auto a : r.alpha_cold) cold_total += a;
  r.n_int = hot_total + cold_total;
  r.log_dim_hot = static_cast<double>(hot_total) * std::log(static_cast<double>(spec.d_hot));
  r.log_dim_cold = static_cast<double>(cold_total) * std::log(static_cast<double>(spec.d_cold));
  r.cycle = detail::cycle_accounting(spec, sched, r.initial_state, r.hot_states, r.cold_states);
  return r;
}

/// Allowed gap between simulated and ideal averages (energy units).
inline double simulation_tolerance(const EngineSpec& spec) {
  const auto sched = frequency_schedule(spec);
  return spec.simulation_tolerance_factor * spec.eps * std::max(sched.hot_origin, spec.omega_cold_last);
}

struct CycleRow {
  std::size_t cycle = 0;              // 1-based
  double cyclicity_distance = 0.0;    // trace distance, initial vs final state of this cycle
  double work = 0.0;                  // <W^c>
  double integrated_work = 0.0;       // sum_{i <= c} <W^i> / c
  double efficiency = 0.0;
  CycleReport report;
};

struct MultiCycleReport {
  SimulatedCycleReport first;
  std::vector<CycleRow> rows;
};

/// Repeats the cycle with every collision count frozen at its first-cycle value.
inline MultiCycleReport simulate_many_cycles(const EngineSpec& spec, std::size_t cycles,
                                             const SimulationOptions& options = {}) {
  if (cycles < 1) throw std::invalid_argument("simulate_many_cycles: cycles must be at least 1");
  MultiCycleReport out;
  out.first = simulate_cycle(spec, options);
  const auto sched = frequency_schedule(spec);
  const auto channels = detail::build_channels(spec, sched);

  auto push_row = [&](const PopulationState& initial, const PopulationState& final_state, const CycleReport& rep) {
    CycleRow row;
    row.cycle = out.rows.size() + 1;
    row.cyclicity_distance = trace_distance(initial, final_state);
    row.work = rep.avg_work;
    const double prior = out.rows.empty() ? 0.0 : out.rows.back().integrated_work * static_cast<double>(out.rows.size());
    row.integrated_work = (prior + rep.avg_work) / static_cast<double>(row.cycle);
    row.efficiency = rep.efficiency;
    row.report = rep;
    out.rows.push_back(row);
  };
  push_row(out.first.initial_state, out.first.final_state, out.first.cycle);

  PopulationState state = out.first.final_state;
  for (std::size_t c = 2; c <= cycles; ++c) {
    const PopulationState initial = state;
    std::vector<PopulationState> hot, cold;
    for (std::size_t n = 0; n < spec.n_hot; ++n) {
      state = detail::apply_n(channels.hot[n], std::move(state), out.first.alpha_hot[n]);
      hot.push_back(state);
    }
    for (std::size_t m = 0; m < spec.n_cold; ++m) {
      state = detail::apply_n(channels.cold[m], std::move(state), out.first.alpha_cold[m]);
      cold.push_back(state);
    }
    push_row(initial, state, detail::cycle_accounting(spec, sched, initial, hot, cold));
  }
  return out;
}

struct DimensionPoint {
  std::size_t d = 0;
  bool ok = false;
  std::string error;
  std::size_t n_int = 0;
  double log_dim = 0.0;   // N_int ln d, the log of the total effective bath dimension
  double work = 0.0;
  double efficiency = 0.0;
  double power = 0.0;     // <W> / N_int
};

struct OptimizationReport {
  std::vector<DimensionPoint> points;
  std::optional<std::size_t> best;  // index into points
};

/// Exhaustive scan over d_hot = d_cold = d in [d_min, d_max]; the optimum
/// minimizes the log total bath dimension, ties going to the smaller d.
/// Failing points are recorded and skipped.
inline OptimizationReport optimize_particle_dimension(const EngineSpec& spec, std::size_t d_min, std::size_t d_max) {
  if (d_min < 2 || d_max < d_min) throw std::invalid_argument("optimize_particle_dimension: invalid range");
  OptimizationReport rep;
  for (std::size_t d = d_min; d <= d_max; ++d) {
    DimensionPoint pt;
    pt.d = d;
    try {
      EngineSpec s = spec;
      s.d_hot = s.d_cold = d;
      const auto sim = simulate_cycle(s, SimulationOptions{.record_audits = false});
      pt.ok = true;
      pt.n_int = sim.n_int;
      pt.log_dim = sim.log_dim_hot + sim.log_dim_cold;
      pt.work = sim.cycle.avg_work;
      pt.efficiency = sim.cycle.efficiency;
      pt.power = sim.n_int > 0 ? sim.cycle.avg_work / static_cast<double>(sim.n_int) : 0.0;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    rep.points.push_back(std::move(pt));
    const auto& last = rep.points.back();
    if (last.ok && (!rep.best || last.log_dim < rep.points[*rep.best].log_dim)) rep.best = rep.points.size() - 1;
  }
  return rep;
}

/// Raised when the denominator delta_S_hot - delta_S_hot^2 / (3 ln^2 dim_hot)
/// is not positive, so the positive-heat premise of the bound fails.
class BoundInapplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CarnotBoundAudit {
  double bound = 0.0;   // finite-dimension efficiency ceiling
  double carnot = 0.0;
  bool consistent = false;  // bound <= carnot + 1e-12
};

/// eta <= 1 - (bE/bR) (s_irr + dS_E + dS_R^2 / (3 ln^2 dim_R)) / (dS_E - dS_E^2 / (3 ln^2 dim_E)).
/// Entropy changes are decreases of the bath entropies; dimensions are given
/// as natural logarithms and may be +infinity.
inline CarnotBoundAudit carnot_bound_audit_log_dim(double beta_hot, double beta_cold, double delta_S_hot,
                                                   double delta_S_cold, double s_irr, double log_dim_hot,
                                                   double log_dim_cold) {
  if (!(beta_hot > 0.0 && beta_hot < beta_cold)) throw std::invalid_argument("carnot_bound_audit: need 0 < beta_hot < beta_cold");
  if (!(delta_S_hot > 0.0)) throw std::invalid_argument("carnot_bound_audit: delta_S_hot must be positive");
  const double denom = delta_S_hot - reeb_wolf_lower_bound_log_dim(delta_S_hot, log_dim_hot);
  if (!(denom > 0.0)) throw BoundInapplicable("carnot_bound_audit: hot-bath dimension too small for positive heat");
  const double numer = s_irr + delta_S_hot + reeb_wolf_lower_bound_log_dim(delta_S_cold, log_dim_cold);
  CarnotBoundAudit a;
  a.carnot = 1.0 - beta_hot / beta_cold;
  a.bound = 1.0 - beta_hot / beta_cold * numer / denom;
  a.consistent = a.bound <= a.carnot + 1e-12;
  return a;
}

inline CarnotBoundAudit carnot_bound_audit(double beta_hot, double beta_cold, double delta_S_hot, double delta_S_cold,
                                           double s_irr, std::size_t dim_hot, std::size_t dim_cold) {
  if (dim_hot < 2 || dim_cold < 2) throw std::invalid_argument("carnot_bound_audit: dimensions must be at least 2");
  return carnot_bound_audit_log_dim(beta_hot, beta_cold, delta_S_hot, delta_S_cold, s_irr,
                                    std::log(static_cast<double>(dim_hot)), std::log(static_cast<double>(dim_cold)));
}

/// Bath entropy bookkeeping from per-particle marginals of a simulated cycle.
/// Inter-particle correlations are ignored, so s_irr_proxy only bounds the
/// true irreversible entropy production from above.
struct BathEntropyProxy {
  double delta_S_hot = 0.0;   // decrease of hot-bath entropy
  double delta_S_cold = 0.0;  // decrease of cold-bath entropy
  double s_irr_proxy = 0.0;   // -(delta_S_hot + delta_S_cold)
};

inline BathEntropyProxy bath_entropy_proxy(const SimulatedCycleReport& sim) {
  if (sim.audits.size() != sim.n_int)
    throw std::invalid_argument("bath_entropy_proxy: simulation was run without audits");
  BathEntropyProxy p;
  for (std::size_t i = 0; i < sim.audits.size(); ++i)
    (i < sim.hot_audit_count ? p.delta_S_hot : p.delta_S_cold) -= sim.audits[i].entropy_change_particle;
  p.s_irr_proxy = -(p.delta_S_hot + p.delta_S_cold);
  return p;
}

}  // namespace thermocollide
