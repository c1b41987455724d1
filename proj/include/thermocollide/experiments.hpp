// Named experiments and free sweeps. Every configured point becomes a task on
// a small worker pool; results are written in config order as CSV (LF, 17
// significant digits) next to a JSON manifest.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermocollide/config.hpp"
#include "thermocollide/engine.hpp"
#include "thermocollide/trajectories.hpp"

namespace thermocollide {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  unsigned jobs = 0;                     // 0 means hardware concurrency
  std::optional<std::uint64_t> seed;     // overrides the config seed
  std::optional<std::string> output_dir; // overrides the config output_dir
};

struct PointStatus {
  std::vector<std::pair<std::string, std::string>> coordinates;
  bool ok = false;
  std::string message;
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> outputs;  // CSV paths, in write order
  std::string manifest;
  std::vector<PointStatus> points;
};

namespace run_detail {

using Row = std::vector<std::string>;

inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string num(std::size_t x) { return std::to_string(x); }

inline std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string interaction_name(const EngineSpec& s) {
  return std::holds_alternative<Swap>(s.interaction) ? "swap" : "jaynes_cummings";
}

inline std::string theta_cell(const EngineSpec& s) {
  const auto* jc = std::get_if<JaynesCummings>(&s.interaction);
  return jc ? num(jc->theta) : std::string{};
}

inline std::vector<std::string> spec_header() {
  return {"beta_hot", "beta_cold", "omega_N", "Omega_M", "N", "M", "d_S", "d_E", "d_R", "interaction", "theta", "eps"};
}

inline Row spec_cells(const EngineSpec& s) {
  return {num(s.beta_hot), num(s.beta_cold), num(s.omega_hot_last), num(s.omega_cold_last), num(s.n_hot),
          num(s.n_cold),   num(s.d_system),  num(s.d_hot),          num(s.d_cold),          interaction_name(s),
          theta_cell(s),   num(s.eps)};
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::string status_of(const std::exception& e) {
  if (dynamic_cast<const NonConvergence*>(&e)) return "non_convergence";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_point";
  return "error";
}

struct Table {
  std::string file;
  std::vector<std::string> header;
};

struct TaskResult {
  bool ok = false;
  std::string message;
  std::vector<std::vector<Row>> rows;  // one list per table
};

struct Task {
  std::vector<std::pair<std::string, std::string>> coordinates;
  std::function<TaskResult()> run;
};

struct Plan {
  std::vector<Table> tables;
  std::vector<Task> tasks;
};

inline TaskResult make_result(std::size_t tables) {
  TaskResult r;
  r.rows.resize(tables);
  return r;
}

inline std::vector<std::pair<std::string, std::string>> coords_of(const SweepPoint& p) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : p.coordinates) out.emplace_back(k, num(v));
  return out;
}

// Runs every task, keeping results in task order whatever the completion order.
inline std::vector<TaskResult> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].message = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

inline void write_csv(const std::filesystem::path& path, const Table& table, const std::vector<TaskResult>& results,
                      std::size_t index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& r : results)
    if (index < r.rows.size())
      for (const auto& row : r.rows[index]) line(row);
}

// ---- per-experiment plans -------------------------------------------------

inline Plan plan_fig2(const ExperimentConfig& cfg) {
  Plan plan;
  plan.tables.push_back({"fig2_single_ensemble.csv",
                         {"omega_1", "d_S", "work", "efficiency", "work_limit_infinite_d_S", "Omega_1", "beta_hot",
                          "beta_cold", "status"}});
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [spec = p.spec] {
                            auto r = make_result(1);
                            Row row{num(spec.omega_hot_last), num(spec.d_system)};
                            try {
                              const auto closed = single_ensemble_closed_form(spec);
                              const auto cyc = analytic_cycle(spec);
                              row.insert(row.end(), {num(cyc.avg_work), num(closed.efficiency),
                                                     num(closed.work_limit_infinite_d_system)});
                              r.ok = true;
                              r.message = "ok";
                            } catch (const std::exception& e) {
                              row.insert(row.end(), {"", "", ""});
                              r.message = e.what();
                            }
                            row.insert(row.end(), {num(spec.omega_cold_last), num(spec.beta_hot), num(spec.beta_cold),
                                                   r.ok ? "ok" : "invalid_point"});
                            r.rows[0].push_back(std::move(row));
                            return r;
                          }});
  }
  return plan;
}

inline TaskResult simulate_point(const EngineSpec& spec) {
  auto r = make_result(1);
  Row row = spec_cells(spec);
  try {
    const auto sim = simulate_cycle(spec, SimulationOptions{.record_audits = false});
    std::size_t hot = 0, cold = 0;
    for (auto a : sim.alpha_hot) hot += a;
    for (auto a : sim.alpha_cold) cold += a;
    row.insert(row.end(), {num(sim.n_int), num(hot), num(cold), num(sim.log_dim_hot), num(sim.log_dim_cold),
                           num(sim.cycle.avg_work), num(sim.cycle.efficiency), "ok"});
    r.ok = true;
    r.message = "ok";
  } catch (const std::exception& e) {
    row.insert(row.end(), {"", "", "", "", "", "", "", status_of(e)});
    r.message = e.what();
  }
  r.rows[0].push_back(std::move(row));
  return r;
}

inline Plan plan_fig3(const ExperimentConfig& cfg) {
  Plan plan;
  plan.tables.push_back({"fig3_interaction_counts.csv",
                         concat(spec_header(), {"n_int", "alpha_hot_sum", "alpha_cold_sum", "log_dim_hot",
                                                "log_dim_cold", "work", "efficiency", "status"})});
  const auto points = expand_sweeps(cfg);
  for (const auto& p : points)
    plan.tasks.push_back({coords_of(p), [spec = p.spec] { return simulate_point(spec); }});
  if (cfg.include_swap_baseline) {
    std::vector<std::size_t> dims;
    for (const auto& p : points)
      if (std::find(dims.begin(), dims.end(), p.spec.d_system) == dims.end()) dims.push_back(p.spec.d_system);
    for (auto d : dims) {
      EngineSpec s = cfg.engine;
      for (const auto& p : points)
        if (p.spec.d_system == d) {
          s = p.spec;
          break;
        }
      s.interaction = Swap{};
      s.d_hot = s.d_cold = d;
      plan.tasks.push_back({{{"baseline", "swap"}, {"d_system", num(d)}}, [s] { return simulate_point(s); }});
    }
  }
  return plan;
}

inline Plan plan_fig4(const ExperimentConfig& cfg) {
  Plan plan;
  auto base = spec_header();
  plan.tables.push_back({"fig4_dimension_scan.csv",
                         concat(base, {"n_int", "log_dim", "work", "efficiency", "power", "is_optimum", "status"})});
  plan.tables.push_back({"fig4_dimension_optimum.csv",
                         concat(base, {"d_min", "d_max", "d_opt", "n_int", "log_dim", "work", "efficiency", "power",
                                       "status"})});
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [spec = p.spec, lo = cfg.d_bath_min, hi = cfg.d_bath_max] {
                            auto r = make_result(2);
                            const auto rep = optimize_particle_dimension(spec, lo, hi);
                            for (std::size_t i = 0; i < rep.points.size(); ++i) {
                              const auto& pt = rep.points[i];
                              EngineSpec s = spec;
                              s.d_hot = s.d_cold = pt.d;
                              Row row = spec_cells(s);
                              if (pt.ok)
                                row.insert(row.end(), {num(pt.n_int), num(pt.log_dim), num(pt.work),
                                                       num(pt.efficiency), num(pt.power),
                                                       rep.best == i ? "true" : "false", "ok"});
                              else
                                row.insert(row.end(), {"", "", "", "", "", "false",
                                                       pt.error.find("did not converge") != std::string::npos
                                                           ? "non_convergence"
                                                           : "error"});
                              r.rows[0].push_back(std::move(row));
                            }
                            Row opt = spec_cells(spec);
                            opt.insert(opt.end(), {num(lo), num(hi)});
                            if (rep.best) {
                              const auto& b = rep.points[*rep.best];
                              opt.insert(opt.end(), {num(b.d), num(b.n_int), num(b.log_dim), num(b.work),
                                                     num(b.efficiency), num(b.power), "ok"});
                              r.ok = true;
                              r.message = "ok";
                            } else {
                              opt.insert(opt.end(), {"", "", "", "", "", "", "no_feasible_dimension"});
                              r.message = "no bath dimension in range converged";
                            }
                            // d_E and d_R in the optimum row are those of the base point
                            r.rows[1].push_back(std::move(opt));
                            return r;
                          }});
  }
  return plan;
}

inline Plan plan_fig5(const ExperimentConfig& cfg) {
  Plan plan;
  plan.tables.push_back(
      {"fig5_many_cycles.csv",
       concat(spec_header(), {"cycle", "cyclicity_distance", "work", "integrated_work", "efficiency", "status"})});
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [spec = p.spec, cycles = cfg.cycles] {
                            auto r = make_result(1);
                            try {
                              const auto rep =
                                  simulate_many_cycles(spec, cycles, SimulationOptions{.record_audits = false});
                              for (const auto& row : rep.rows) {
                                Row out = spec_cells(spec);
                                out.insert(out.end(), {num(row.cycle), num(row.cyclicity_distance), num(row.work),
                                                       num(row.integrated_work), num(row.efficiency), "ok"});
                                r.rows[0].push_back(std::move(out));
                              }
                              r.ok = true;
                              r.message = "ok";
                            } catch (const std::exception& e) {
                              Row out = spec_cells(spec);
                              out.insert(out.end(), {"", "", "", "", "", status_of(e)});
                              r.rows[0].push_back(std::move(out));
                              r.message = e.what();
                            }
                            return r;
                          }});
  }
  return plan;
}

inline std::string trajectory_cell(const Trajectory& t) {
  std::string s;
  for (std::size_t i = 0; i < t.j.size(); ++i) s += (i ? " " : "") + std::to_string(t.j[i]);
  s += " |";
  for (auto k : t.k) s += " " + std::to_string(k);
  return s;
}

inline Plan plan_fig6(const ExperimentConfig& cfg, std::uint64_t seed, unsigned jobs) {
  Plan plan;
  const auto filter_name = cfg.filter == FilterMode::strict_positive ? "strict_positive" : "nonzero_heat";
  const auto grouping = cfg.effective_grouping();
  const auto grouping_name = grouping == GroupingMode::exact_rational ? "exact_rational" : "floating";
  const auto base = concat(spec_header(), {"filter", "grouping", "method"});
  plan.tables.push_back({"fig6_efficiency_histogram.csv", concat(base, {"eta", "probability", "is_argmax", "status"})});
  plan.tables.push_back(
      {"fig6_summary.csv",
       concat(base, {"carnot", "most_likely_eta", "argmax_is_carnot", "eta_pmax_closed_form", "gamma_pmax",
                     "gamma_pmax_probability", "defined_probability", "total_probability", "trajectories",
                     "status"})});
  plan.tables.push_back({"fig6_carnot_grid.csv",
                         concat(spec_header(), {"filter", "grouping", "carnot", "most_likely_eta",
                                                "eta_pmax_closed_form", "grid_status"})});
  const DistributionOptions opt{.filter = cfg.filter,
                                .grouping = grouping,
                                .enumeration_cap = cfg.enumeration_cap,
                                .threads = std::max(1u, jobs)};
  const bool sampled = cfg.samples > 0;
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [=, spec = p.spec, samples = cfg.samples] {
                            auto r = make_result(3);
                            Row prefix = spec_cells(spec);
                            prefix.insert(prefix.end(), {filter_name, grouping_name, sampled ? "sampled" : "enumerated"});
                            const auto dist = sampled ? sample_distribution(spec, samples, seed, opt)
                                                      : enumerate_distribution(spec, opt);
                            std::size_t arg = 0;
                            for (std::size_t i = 1; i < dist.bins.size(); ++i)
                              if (dist.bins[i].probability > dist.bins[arg].probability) arg = i;
                            for (std::size_t i = 0; i < dist.bins.size(); ++i) {
                              Row row = prefix;
                              row.insert(row.end(), {num(dist.bins[i].eta), num(dist.bins[i].probability),
                                                     i == arg ? "true" : "false", "ok"});
                              r.rows[0].push_back(std::move(row));
                            }
                            bool is_carnot = false;
                            if (dist.most_likely_eta_exact)
                              is_carnot = *dist.most_likely_eta_exact == TrajectoryModel(spec).exact_carnot();
                            else if (!dist.bins.empty())
                              is_carnot = std::abs(dist.most_likely_eta - spec.carnot()) <=
                                          1e-10 * std::max(1.0, std::abs(spec.carnot()));
                            Row sum = prefix;
                            sum.insert(sum.end(),
                                       {num(spec.carnot()), num(dist.most_likely_eta), is_carnot ? "true" : "false",
                                        num(most_likely_trajectory_efficiency(spec)),
                                        dist.most_likely_trajectory ? trajectory_cell(*dist.most_likely_trajectory) : "",
                                        num(dist.most_likely_trajectory_probability), num(dist.defined_probability),
                                        num(dist.total_probability), std::to_string(dist.trajectories),
                                        dist.bins.empty() ? "undefined" : "ok"});
                            r.rows[1].push_back(std::move(sum));
                            r.ok = !dist.bins.empty();
                            r.message = r.ok ? "ok" : "no trajectory has a defined efficiency";
                            return r;
                          }});
  }
  for (auto n : cfg.grid_n_hot)
    for (auto m : cfg.grid_n_cold) {
      EngineSpec s = cfg.engine;
      s.n_hot = n;
      s.n_cold = m;
      plan.tasks.push_back({{{"grid.n_hot", num(n)}, {"grid.n_cold", num(m)}}, [=] {
                              auto r = make_result(3);
                              const std::size_t nv[] = {n}, mv[] = {m};
                              const auto cell = carnot_condition_grid(cfg.engine, nv, mv, opt).front();
                              Row row = spec_cells(s);
                              row.insert(row.end(), {filter_name, grouping_name, num(s.carnot()),
                                                     num(cell.most_likely_eta),
                                                     num(most_likely_trajectory_efficiency(s)), to_string(cell.status)});
                              r.rows[2].push_back(std::move(row));
                              r.ok = cell.status == CarnotCellStatus::carnot || cell.status == CarnotCellStatus::not_carnot;
                              r.message = to_string(cell.status);
                              return r;
                            }});
    }
  return plan;
}

inline Plan plan_fig7(const ExperimentConfig& cfg) {
  Plan plan;
  plan.tables.push_back({"fig7_workeff_sweep.csv",
                         concat(spec_header(), {"work", "efficiency", "eta_over_carnot", "heat_hot", "heat_cold",
                                                "status"})});
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [spec = p.spec] {
                            auto r = make_result(1);
                            Row row = spec_cells(spec);
                            try {
                              const auto c = analytic_cycle(spec);
                              row.insert(row.end(), {num(c.avg_work), num(c.efficiency), num(c.efficiency / c.carnot),
                                                     num(c.avg_heat_hot), num(c.avg_heat_cold), "ok"});
                              r.ok = true;
                              r.message = "ok";
                            } catch (const std::exception& e) {
                              row.insert(row.end(), {"", "", "", "", "", status_of(e)});
                              r.message = e.what();
                            }
                            r.rows[0].push_back(std::move(row));
                            return r;
                          }});
  }
  return plan;
}

inline Plan plan_custom(const ExperimentConfig& cfg) {
  Plan plan;
  plan.tables.push_back(
      {"custom_sweep.csv",
       concat(spec_header(), {"work", "efficiency", "heat_hot", "heat_cold", "delta_S", "d_hot_sum", "d_cold_sum",
                              "sim_n_int", "sim_work", "sim_efficiency", "sim_cyclicity_distance", "status"})});
  for (const auto& p : expand_sweeps(cfg)) {
    plan.tasks.push_back({coords_of(p), [spec = p.spec, simulate = cfg.simulate] {
                            auto r = make_result(1);
                            Row row = spec_cells(spec);
                            try {
                              const auto c = analytic_cycle(spec);
                              row.insert(row.end(), {num(c.avg_work), num(c.efficiency), num(c.avg_heat_hot),
                                                     num(c.avg_heat_cold), num(c.delta_S), num(c.d_hot_sum),
                                                     num(c.d_cold_sum)});
                              if (simulate) {
                                const auto sim = simulate_cycle(spec, SimulationOptions{.record_audits = false});
                                row.insert(row.end(), {num(sim.n_int), num(sim.cycle.avg_work),
                                                       num(sim.cycle.efficiency),
                                                       num(trace_distance(sim.initial_state, sim.final_state))});
                              } else {
                                row.insert(row.end(), {"", "", "", ""});
                              }
                              row.push_back("ok");
                              r.ok = true;
                              r.message = "ok";
                            } catch (const std::exception& e) {
                              row.resize(spec_header().size());
                              row.insert(row.end(), {"", "", "", "", "", "", "", "", "", "", "", status_of(e)});
                              r.message = e.what();
                            }
                            r.rows[0].push_back(std::move(row));
                            return r;
                          }});
  }
  return plan;
}

inline Plan make_plan(const ExperimentConfig& cfg, std::uint64_t seed, unsigned jobs) {
  switch (cfg.experiment) {
    case Experiment::fig2_single_ensemble: return plan_fig2(cfg);
    case Experiment::fig3_interaction_counts: return plan_fig3(cfg);
    case Experiment::fig4_dimension_optimum: return plan_fig4(cfg);
    case Experiment::fig5_many_cycles: return plan_fig5(cfg);
    case Experiment::fig6_stochastic_efficiency: return plan_fig6(cfg, seed, jobs);
    case Experiment::fig7_workeff_sweep: return plan_fig7(cfg);
    case Experiment::custom_sweep: return plan_custom(cfg);
  }
  throw std::logic_error("unhandled experiment");
}

}  // namespace run_detail

/// Derived quantities of the base engine, for inspection before a run.
inline std::string validation_report(const ExperimentConfig& cfg) {
  using run_detail::shortest;
  const auto& s = cfg.engine;
  const auto sched = frequency_schedule(s);
  std::size_t points = 1;
  for (const auto& axis : cfg.sweeps) points *= axis.values.size();
  std::ostringstream out;
  out << "experiment: " << to_string(cfg.experiment) << '\n'
      << "eta_C = " << shortest(s.carnot()) << '\n'
      << "omega_0 = " << shortest(sched.hot_origin) << '\n'
      << "Omega_0 = " << shortest(sched.cold_origin) << '\n'
      << "hot schedule: omega_1 = " << shortest(sched.hot.front()) << " ... omega_N = " << shortest(sched.hot.back())
      << " (N = " << s.n_hot << ")\n"
      << "cold schedule: Omega_1 = " << shortest(sched.cold.front())
      << " ... Omega_M = " << shortest(sched.cold.back()) << " (M = " << s.n_cold << ")\n"
      << "interaction: " << run_detail::interaction_name(s);
  if (const auto* jc = std::get_if<JaynesCummings>(&s.interaction)) out << " (theta = " << shortest(jc->theta) << ")";
  out << '\n' << "dimensions: d_S = " << s.d_system << ", d_E = " << s.d_hot << ", d_R = " << s.d_cold << '\n';
  for (const auto& axis : cfg.sweeps) out << "sweep " << axis.field << ": " << axis.values.size() << " values\n";
  out << "points: " << points << '\n';
  return out.str();
}

/// Runs the experiment and writes its CSVs and manifest.json. Exit code 0 if
/// any point succeeded, 3 if every point failed.
inline RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {}) {
  const auto started = std::chrono::steady_clock::now();
  const auto wall_start = std::chrono::system_clock::now();
  ExperimentConfig cfg = config;
  if (options.seed) cfg.seed = *options.seed;
  if (options.output_dir) cfg.output_dir = *options.output_dir;
  validate_config(cfg);
  const unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());

  auto plan = run_detail::make_plan(cfg, cfg.seed, jobs);
  const auto results = run_detail::run_tasks(plan.tasks, jobs);

  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  RunResult out;
  for (std::size_t t = 0; t < plan.tables.size(); ++t) {
    bool any = false;
    for (const auto& r : results) any = any || (t < r.rows.size() && !r.rows[t].empty());
    if (!any && cfg.experiment == Experiment::fig6_stochastic_efficiency && t == 2) continue;
    const auto path = dir / plan.tables[t].file;
    run_detail::write_csv(path, plan.tables[t], results, t);
    out.outputs.push_back(path.string());
  }

  std::size_t ok = 0;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    PointStatus ps{plan.tasks[i].coordinates, results[i].ok, results[i].message};
    nlohmann::ordered_json coords = nlohmann::ordered_json::object();
    for (const auto& [k, v] : ps.coordinates) coords[k] = v;
    points.push_back({{"index", i}, {"coordinates", coords}, {"status", ps.ok ? "ok" : "failed"},
                      {"message", ps.message}});
    ok += ps.ok ? 1 : 0;
    out.points.push_back(std::move(ps));
  }
  out.exit_code = (ok == 0 && !results.empty()) ? 3 : 0;

  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_fields(cfg)) resolved[k] = v;
  const std::time_t t = std::chrono::system_clock::to_time_t(wall_start);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  nlohmann::ordered_json manifest = {
      {"tool", "thermocollide"},
      {"version", kVersion},
      {"experiment", to_string(cfg.experiment)},
      {"seed", cfg.seed},
      {"jobs", jobs},
      {"started_utc", stamp},
      {"wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
      {"config", resolved},
      {"outputs", out.outputs},
      {"points_total", results.size()},
      {"points_ok", ok},
      {"points", points},
  };
  out.manifest = (dir / "manifest.json").string();
  std::ofstream mf(out.manifest, std::ios::binary | std::ios::trunc);
  if (!mf) throw std::runtime_error("cannot write '" + out.manifest + "'");
  mf << manifest.dump(2) << '\n';
  return out;
}

}  // namespace thermocollide
