// Flat key = value experiment configuration. One field per line, '#' starts a
// comment, units are part of the field names. Sweep axes are written as
// `sweep.<field> = values`, where values is a comma list, `a:b` (unit step)
// or `a:b:step`; several axes form a Cartesian product, first axis outermost.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermocollide/engine.hpp"
#include "thermocollide/trajectories.hpp"

namespace thermocollide {

enum class Experiment {
  fig2_single_ensemble,
  fig3_interaction_counts,
  fig4_dimension_optimum,
  fig5_many_cycles,
  fig6_stochastic_efficiency,
  fig7_workeff_sweep,
  custom_sweep,
};

inline const std::map<std::string, Experiment, std::less<>>& experiment_names() {
  static const std::map<std::string, Experiment, std::less<>> names{
      {"fig2_single_ensemble", Experiment::fig2_single_ensemble},
      {"fig3_interaction_counts", Experiment::fig3_interaction_counts},
      {"fig4_dimension_optimum", Experiment::fig4_dimension_optimum},
      {"fig5_many_cycles", Experiment::fig5_many_cycles},
      {"fig6_stochastic_efficiency", Experiment::fig6_stochastic_efficiency},
      {"fig7_workeff_sweep", Experiment::fig7_workeff_sweep},
      {"custom_sweep", Experiment::custom_sweep},
  };
  return names;
}

inline std::string to_string(Experiment e) {
  for (const auto& [name, value] : experiment_names())
    if (value == e) return name;
  return "?";
}

/// Parse or validation failure. line is 0 when the problem is not tied to a
/// single line of the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& message)
      : std::runtime_error(format(line, field, message)), line_(line), field_(std::move(field)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(std::size_t line, const std::string& field, const std::string& message) {
    std::string out;
    if (line) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }
  std::size_t line_;
  std::string field_;
};

struct SweepAxis {
  std::string field;
  std::vector<double> values;
  std::size_t line = 0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::custom_sweep;
  EngineSpec engine;
  std::vector<SweepAxis> sweeps;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  FilterMode filter = FilterMode::nonzero_heat;
  std::optional<GroupingMode> grouping;  // experiment default when absent
  std::size_t cycles = 100;
  std::uint64_t samples = 0;             // fig6: 0 enumerates, otherwise samples
  std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
  std::size_t d_bath_min = 2;
  std::size_t d_bath_max = 12;
  bool include_swap_baseline = false;
  bool simulate = false;                 // custom_sweep: also run the finite-eps cycle
  std::vector<std::size_t> grid_n_hot;   // fig6 Carnot grid axes
  std::vector<std::size_t> grid_n_cold;
  bool swap_interaction = false;
  double jc_theta = std::numbers::pi / 2;

  GroupingMode effective_grouping() const {
    if (grouping) return *grouping;
    return experiment == Experiment::fig6_stochastic_efficiency ? GroupingMode::exact_rational
                                                                : GroupingMode::floating;
  }
};

namespace config_detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

struct Ctx {
  std::size_t line;
  std::string field;
  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(line, field, message); }
};

inline double parse_real(std::string_view v, const Ctx& c) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
    c.fail("expected a finite real number, got '" + std::string(v) + "'");
  return x;
}

inline std::uint64_t parse_uint(std::string_view v, const Ctx& c) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (v.empty() || res.ec != std::errc() || res.ptr != end)
    c.fail("expected a non-negative integer, got '" + std::string(v) + "'");
  return x;
}

inline bool parse_bool(std::string_view v, const Ctx& c) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  c.fail("expected true or false, got '" + std::string(v) + "'");
}

inline std::vector<double> parse_values(std::string_view v, const Ctx& c) {
  if (v.empty()) c.fail("value list is empty");
  std::vector<double> out;
  if (v.find(':') != std::string_view::npos) {
    const auto parts = split(v, ':');
    if (parts.size() < 2 || parts.size() > 3) c.fail("range must be a:b or a:b:step");
    const double a = parse_real(parts[0], c), b = parse_real(parts[1], c);
    const double step = parts.size() == 3 ? parse_real(parts[2], c) : 1.0;
    if (!(step > 0.0)) c.fail("range step must be positive");
    if (b < a) c.fail("range end is below its start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1'000'000) c.fail("range has more than 10^6 values");
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  for (auto item : split(v, ',')) {
    if (item.empty()) c.fail("empty entry in value list");
    out.push_back(parse_real(item, c));
  }
  return out;
}

inline std::size_t as_count(double x, const Ctx& c) {
  if (!(x >= 0.0) || std::floor(x) != x || x > 1e9) c.fail("expected a non-negative integer value");
  return static_cast<std::size_t>(x);
}

inline std::vector<std::size_t> parse_counts(std::string_view v, const Ctx& c) {
  std::vector<std::size_t> out;
  for (double x : parse_values(v, c)) out.push_back(as_count(x, c));
  return out;
}

inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
  return s;
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

struct FieldDef {
  std::function<void(ExperimentConfig&, std::string_view, const Ctx&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

inline const std::map<std::string, FieldDef, std::less<>>& fields() {
  using C = ExperimentConfig;
  using SV = std::string_view;
  static const std::map<std::string, FieldDef, std::less<>> table{
      {"experiment",
       {[](C& c, SV v, const Ctx& x) {
          const auto it = experiment_names().find(v);
          if (it == experiment_names().end()) x.fail("unknown experiment '" + std::string(v) + "'");
          c.experiment = it->second;
        },
        [](const C& c) { return to_string(c.experiment); }}},
      {"beta_hot_inverse_energy", {[](C& c, SV v, const Ctx& x) { c.engine.beta_hot = parse_real(v, x); },
                                   [](const C& c) { return format_real(c.engine.beta_hot); }}},
      {"beta_cold_inverse_energy", {[](C& c, SV v, const Ctx& x) { c.engine.beta_cold = parse_real(v, x); },
                                    [](const C& c) { return format_real(c.engine.beta_cold); }}},
      {"omega_hot_last_energy", {[](C& c, SV v, const Ctx& x) { c.engine.omega_hot_last = parse_real(v, x); },
                                 [](const C& c) { return format_real(c.engine.omega_hot_last); }}},
      {"omega_cold_last_energy", {[](C& c, SV v, const Ctx& x) { c.engine.omega_cold_last = parse_real(v, x); },
                                  [](const C& c) { return format_real(c.engine.omega_cold_last); }}},
      {"n_hot", {[](C& c, SV v, const Ctx& x) { c.engine.n_hot = parse_uint(v, x); },
                 [](const C& c) { return std::to_string(c.engine.n_hot); }}},
      {"n_cold", {[](C& c, SV v, const Ctx& x) { c.engine.n_cold = parse_uint(v, x); },
                  [](const C& c) { return std::to_string(c.engine.n_cold); }}},
      {"d_system", {[](C& c, SV v, const Ctx& x) { c.engine.d_system = parse_uint(v, x); },
                    [](const C& c) { return std::to_string(c.engine.d_system); }}},
      {"d_hot", {[](C& c, SV v, const Ctx& x) { c.engine.d_hot = parse_uint(v, x); },
                 [](const C& c) { return std::to_string(c.engine.d_hot); }}},
      {"d_cold", {[](C& c, SV v, const Ctx& x) { c.engine.d_cold = parse_uint(v, x); },
                  [](const C& c) { return std::to_string(c.engine.d_cold); }}},
      {"interaction",
       {[](C& c, SV v, const Ctx& x) {
          if (v == "swap") c.swap_interaction = true;
          else if (v == "jaynes_cummings") c.swap_interaction = false;
          else x.fail("expected swap or jaynes_cummings, got '" + std::string(v) + "'");
        },
        [](const C& c) { return std::string(c.swap_interaction ? "swap" : "jaynes_cummings"); }}},
      {"jc_theta_radians", {[](C& c, SV v, const Ctx& x) { c.jc_theta = parse_real(v, x); },
                            [](const C& c) { return c.swap_interaction ? std::string() : format_real(c.jc_theta); }}},
      {"eps", {[](C& c, SV v, const Ctx& x) { c.engine.eps = parse_real(v, x); },
               [](const C& c) { return format_real(c.engine.eps); }}},
      {"h_system_diag_energy",
       {[](C& c, SV v, const Ctx& x) {
          c.engine.h_system_diag.clear();
          for (auto item : split(v, ',')) c.engine.h_system_diag.push_back(parse_real(item, x));
        },
        [](const C& c) { return join(c.engine.h_system_diag); }}},
      {"max_collisions", {[](C& c, SV v, const Ctx& x) { c.engine.max_collisions = parse_uint(v, x); },
                          [](const C& c) { return std::to_string(c.engine.max_collisions); }}},
      {"simulation_tolerance_factor",
       {[](C& c, SV v, const Ctx& x) { c.engine.simulation_tolerance_factor = parse_real(v, x); },
        [](const C& c) { return format_real(c.engine.simulation_tolerance_factor); }}},
      {"seed", {[](C& c, SV v, const Ctx& x) { c.seed = parse_uint(v, x); },
                [](const C& c) { return std::to_string(c.seed); }}},
      {"output_dir", {[](C& c, SV v, const Ctx& x) {
                        if (v.empty()) x.fail("must not be empty");
                        c.output_dir = std::string(v);
                      },
                      [](const C& c) { return c.output_dir; }}},
      {"strict_positive_filter",
       {[](C& c, SV v, const Ctx& x) {
          c.filter = parse_bool(v, x) ? FilterMode::strict_positive : FilterMode::nonzero_heat;
        },
        [](const C& c) { return std::string(c.filter == FilterMode::strict_positive ? "true" : "false"); }}},
      {"grouping_mode",
       {[](C& c, SV v, const Ctx& x) {
          if (v == "floating") c.grouping = GroupingMode::floating;
          else if (v == "exact_rational") c.grouping = GroupingMode::exact_rational;
          else x.fail("expected floating or exact_rational, got '" + std::string(v) + "'");
        },
        [](const C& c) {
          return std::string(c.effective_grouping() == GroupingMode::floating ? "floating" : "exact_rational");
        }}},
      {"cycles", {[](C& c, SV v, const Ctx& x) { c.cycles = parse_uint(v, x); },
                  [](const C& c) { return std::to_string(c.cycles); }}},
      {"samples", {[](C& c, SV v, const Ctx& x) { c.samples = parse_uint(v, x); },
                   [](const C& c) { return std::to_string(c.samples); }}},
      {"enumeration_cap", {[](C& c, SV v, const Ctx& x) { c.enumeration_cap = parse_uint(v, x); },
                           [](const C& c) { return std::to_string(c.enumeration_cap); }}},
      {"d_bath_min", {[](C& c, SV v, const Ctx& x) { c.d_bath_min = parse_uint(v, x); },
                      [](const C& c) { return std::to_string(c.d_bath_min); }}},
      {"d_bath_max", {[](C& c, SV v, const Ctx& x) { c.d_bath_max = parse_uint(v, x); },
                      [](const C& c) { return std::to_string(c.d_bath_max); }}},
      {"include_swap_baseline", {[](C& c, SV v, const Ctx& x) { c.include_swap_baseline = parse_bool(v, x); },
                                 [](const C& c) { return std::string(c.include_swap_baseline ? "true" : "false"); }}},
      {"simulate", {[](C& c, SV v, const Ctx& x) { c.simulate = parse_bool(v, x); },
                    [](const C& c) { return std::string(c.simulate ? "true" : "false"); }}},
      {"grid.n_hot", {[](C& c, SV v, const Ctx& x) { c.grid_n_hot = parse_counts(v, x); },
                      [](const C& c) { return join(c.grid_n_hot); }}},
      {"grid.n_cold", {[](C& c, SV v, const Ctx& x) { c.grid_n_cold = parse_counts(v, x); },
                       [](const C& c) { return join(c.grid_n_cold); }}},
  };
  return table;
}

}  // namespace config_detail

/// Engine fields that may carry a sweep axis. d_bath sets d_hot = d_cold and
/// n_ensembles sets n_hot = n_cold.
inline const std::vector<std::string>& sweepable_fields() {
  static const std::vector<std::string> names{
      "beta_hot_inverse_energy", "beta_cold_inverse_energy", "omega_hot_last_energy", "omega_cold_last_energy",
      "n_hot", "n_cold", "n_ensembles", "d_system", "d_hot", "d_cold", "d_bath", "jc_theta_radians", "eps"};
  return names;
}

inline void apply_sweep_value(EngineSpec& spec, const std::string& field, double value) {
  const config_detail::Ctx ctx{0, "sweep." + field};
  auto count = [&] { return config_detail::as_count(value, ctx); };
  if (field == "beta_hot_inverse_energy") spec.beta_hot = value;
  else if (field == "beta_cold_inverse_energy") spec.beta_cold = value;
  else if (field == "omega_hot_last_energy") spec.omega_hot_last = value;
  else if (field == "omega_cold_last_energy") spec.omega_cold_last = value;
  else if (field == "n_hot") spec.n_hot = count();
  else if (field == "n_cold") spec.n_cold = count();
  else if (field == "n_ensembles") spec.n_hot = spec.n_cold = count();
  else if (field == "d_system") spec.d_system = count();
  else if (field == "d_hot") spec.d_hot = count();
  else if (field == "d_cold") spec.d_cold = count();
  else if (field == "d_bath") spec.d_hot = spec.d_cold = count();
  else if (field == "jc_theta_radians") spec.interaction = JaynesCummings{value};
  else if (field == "eps") spec.eps = value;
  else ctx.fail("not a sweepable field");
}

/// One point of the sweep product, with its coordinates in axis order.
struct SweepPoint {
  EngineSpec spec;
  std::vector<std::pair<std::string, double>> coordinates;
};

inline std::vector<SweepPoint> expand_sweeps(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points{SweepPoint{cfg.engine, {}}};
  for (const auto& axis : cfg.sweeps) {
    std::vector<SweepPoint> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points)
      for (double v : axis.values) {
        SweepPoint q = p;
        apply_sweep_value(q.spec, axis.field, v);
        q.coordinates.emplace_back(axis.field, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

/// Checks cross-field rules that the line parser cannot see.
inline void validate_config(const ExperimentConfig& cfg) {
  try {
    cfg.engine.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "", e.what());
  }
  for (const auto& axis : cfg.sweeps) {
    const config_detail::Ctx ctx{axis.line, "sweep." + axis.field};
    if (axis.values.empty()) ctx.fail("value list is empty");
    if (axis.field == "jc_theta_radians" && std::holds_alternative<Swap>(cfg.engine.interaction))
      ctx.fail("only valid with interaction = jaynes_cummings");
    for (double v : axis.values) {
      EngineSpec probe = cfg.engine;
      apply_sweep_value(probe, axis.field, v);
    }
  }
  std::size_t total = 1;
  for (const auto& axis : cfg.sweeps) total *= axis.values.size();
  if (total > 1'000'000) throw ConfigError(0, "", "sweep product has more than 10^6 points");

  const config_detail::Ctx none{0, ""};
  switch (cfg.experiment) {
    case Experiment::fig2_single_ensemble:
      if (cfg.engine.n_hot != 1 || cfg.engine.n_cold != 1) none.fail("fig2_single_ensemble needs n_hot = n_cold = 1");
      for (const auto& axis : cfg.sweeps)
        if (axis.field == "n_hot" || axis.field == "n_cold" || axis.field == "n_ensembles")
          throw ConfigError(axis.line, "sweep." + axis.field, "fig2_single_ensemble keeps n_hot = n_cold = 1");
      break;
    case Experiment::fig4_dimension_optimum:
      if (cfg.d_bath_min < 2 || cfg.d_bath_max < cfg.d_bath_min)
        none.fail("fig4_dimension_optimum needs 2 <= d_bath_min <= d_bath_max");
      break;
    case Experiment::fig5_many_cycles:
      if (cfg.cycles < 1) throw ConfigError(0, "cycles", "must be at least 1");
      break;
    case Experiment::fig6_stochastic_efficiency:
      if (cfg.grid_n_hot.empty() != cfg.grid_n_cold.empty())
        none.fail("grid.n_hot and grid.n_cold must be given together");
      for (auto n : cfg.grid_n_hot)
        if (n < 1) throw ConfigError(0, "grid.n_hot", "ensemble counts must be at least 1");
      for (auto m : cfg.grid_n_cold)
        if (m < 1) throw ConfigError(0, "grid.n_cold", "ensemble counts must be at least 1");
      break;
    default:
      break;
  }
}

/// Parses configuration text. Unknown fields, duplicates and malformed values
/// raise ConfigError with the offending line.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  bool have_experiment = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = config_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'field = value'");
    const std::string key(config_detail::trim(line.substr(0, eq)));
    const auto value = config_detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing field name");
    if (const auto it = seen.find(key); it != seen.end())
      throw ConfigError(line_no, key, "duplicate field (first set on line " + std::to_string(it->second) + ")");
    seen.emplace(key, line_no);
    const config_detail::Ctx ctx{line_no, key};

    if (key.rfind("sweep.", 0) == 0) {
      const std::string field = key.substr(6);
      const auto& allowed = sweepable_fields();
      if (std::find(allowed.begin(), allowed.end(), field) == allowed.end())
        ctx.fail("unknown sweep field '" + field + "'");
      cfg.sweeps.push_back({field, config_detail::parse_values(value, ctx), line_no});
      continue;
    }
    const auto& table = config_detail::fields();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line_no, key, "unknown field '" + key + "'");
    if (value.empty()) ctx.fail("missing value");
    it->second.set(cfg, value, ctx);
    if (key == "experiment") have_experiment = true;
  }
  if (!have_experiment) throw ConfigError(0, "experiment", "missing required field");
  if (cfg.swap_interaction) {
    if (const auto it = seen.find("jc_theta_radians"); it != seen.end())
      throw ConfigError(it->second, "jc_theta_radians", "only valid with interaction = jaynes_cummings");
    cfg.engine.interaction = Swap{};
  } else {
    cfg.engine.interaction = JaynesCummings{cfg.jc_theta};
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  return parse_config(in);
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Every field with its resolved value, sweeps included, in a stable order.
inline std::vector<std::pair<std::string, std::string>> resolved_fields(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, def] : config_detail::fields()) out.emplace_back(name, def.get(cfg));
  for (const auto& axis : cfg.sweeps) out.emplace_back("sweep." + axis.field, config_detail::join(axis.values));
  return out;
}

}  // namespace thermocollide
