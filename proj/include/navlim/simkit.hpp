/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef NAVLIM_SIMKIT_HPP
#define NAVLIM_SIMKIT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "navlim/geom2d.hpp"
#include "navlim/models.hpp"
#include "navlim/navinfo.hpp"

namespace navlim {

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Too many trials failed numerically, or the recursion audit disagreed with marginalization.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

struct Intensities {
  double lambda_kk = 5.0;
  double nu_kk = 5.0;
  double xi_kk = 0.0;
  double lambda_kj = 5.0;
};

/// Random network configuration. Defaults follow the time-sweep figure setup with 5 agents, 4 anchors.
struct ScenarioConfig {
  double width = 20.0;
  double height = 20.0;
  std::size_t num_agents = 5;
  std::size_t num_anchors = 4;
  std::size_t steps = 20;
  Intensities intensities;
  Sym2 step_cov = Sym2::identity();
  ConnectivityModel connectivity;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
      throw ConfigError("area must have positive finite width and height");
    }
    if (steps < 1) throw ConfigError("T must be at least 1");
    const Intensities& i = intensities;
    if (!(i.lambda_kk >= 0.0) || !(i.nu_kk >= 0.0) || !(i.lambda_kj >= 0.0) || !std::isfinite(i.xi_kk) ||
        !std::isfinite(i.lambda_kk) || !std::isfinite(i.nu_kk) || !std::isfinite(i.lambda_kj)) {
      throw ConfigError("intensities must be finite and non-negative");
    }
    if (!VelocityModel{i.lambda_kk, i.nu_kk, i.xi_kk}.valid()) {
      throw ConfigError("velocity intensities [[lambda_kk, xi_kk], [xi_kk, nu_kk]] are not PSD");
    }
    if (!is_pd(step_cov)) throw ConfigError("step_cov must be positive definite");
    if (connectivity.kind == Connectivity::Radius && !(connectivity.radius > 0.0)) {
      throw ConfigError("connectivity radius must be positive");
    }
  }
};

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of one Monte-Carlo trial; independent of scheduling.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master ^ splitmix64(trial + 0x632BE59BD9B4E019ULL));
}

// Each node draws from its own stream, so a network with fewer agents or steps is a prefix of a larger one.
inline std::uint64_t agent_stream(std::uint64_t seed, std::size_t agent) {
  return splitmix64(seed ^ splitmix64(0xA0761D6478BD642FULL + agent));
}
inline std::uint64_t anchor_stream(std::uint64_t seed) { return splitmix64(seed ^ 0xE7037ED1A0B428DBULL); }

}  // namespace rng

/// Optional fixed node positions; missing parts are drawn at random.
struct FixedPlacement {
  std::optional<std::vector<Vec2>> anchors;
  std::optional<std::vector<std::vector<Vec2>>> trajectories;
};

/**
 * Anchors and initial agent positions uniform over [0, width] x [0, height]; agents then take
 * zero-mean Gaussian steps with covariance step_cov. Deterministic in cfg.seed.
 */
inline Scenario generate_scenario(const ScenarioConfig& cfg, const FixedPlacement& fixed = {}) {
  cfg.validate();
  std::vector<std::vector<Vec2>> positions;
  if (fixed.trajectories) {
    if (fixed.trajectories->size() != cfg.num_agents) throw ConfigError("trajectory count differs from num_agents");
    for (const auto& tr : *fixed.trajectories) {
      if (tr.size() != cfg.steps) throw ConfigError("trajectory length differs from T");
      positions.push_back(tr);
    }
  } else {
    const double l11 = std::sqrt(cfg.step_cov.a11);
    const double l21 = cfg.step_cov.a12 / l11;
    const double l22 = std::sqrt(cfg.step_cov.a22 - l21 * l21);
    for (std::size_t k = 0; k < cfg.num_agents; ++k) {
      std::mt19937_64 gen(rng::agent_stream(cfg.seed, k));
      std::uniform_real_distribution<double> ux(0.0, cfg.width);
      std::uniform_real_distribution<double> uy(0.0, cfg.height);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<Vec2> tr;
      const double x0 = ux(gen);
      tr.push_back({x0, uy(gen)});
      for (std::size_t n = 1; n < cfg.steps; ++n) {
        const double z1 = normal(gen);
        const double z2 = normal(gen);
        tr.push_back(tr.back() + Vec2{l11 * z1, l21 * z1 + l22 * z2});
      }
      positions.push_back(std::move(tr));
    }
  }
  if (fixed.anchors) {
    if (fixed.anchors->size() != cfg.num_anchors) throw ConfigError("anchor list differs from num_anchors");
    for (const auto& a : *fixed.anchors) positions.emplace_back(cfg.steps, a);
  } else {
    std::mt19937_64 gen(rng::anchor_stream(cfg.seed));
    std::uniform_real_distribution<double> ux(0.0, cfg.width);
    std::uniform_real_distribution<double> uy(0.0, cfg.height);
    for (std::size_t j = 0; j < cfg.num_anchors; ++j) {
      const double x = ux(gen);
      positions.emplace_back(cfg.steps, Vec2{x, uy(gen)});
    }
  }
  const Intensities& i = cfg.intensities;
  return make_scenario(ScenarioGeometry(cfg.num_agents, std::move(positions)),
                       VelocityModel{i.lambda_kk, i.nu_kk, i.xi_kk}, RangeModel{i.lambda_kj}, cfg.connectivity);
}

/// The first `steps` time steps of a scenario.
inline Scenario prefix_scenario(const Scenario& sc, std::size_t steps) {
  if (steps < 1 || steps > sc.steps()) throw std::out_of_range("prefix length outside the horizon");
  std::vector<std::vector<Vec2>> positions;
  for (const auto& tr : sc.geometry.positions()) positions.emplace_back(tr.begin(), tr.begin() + static_cast<std::ptrdiff_t>(steps));
  Scenario out;
  out.geometry = ScenarioGeometry(sc.num_agents(), std::move(positions));
  for (const auto& l : sc.links) {
    if (l.step < steps) out.links.push_back(l);
  }
  for (const auto& v : sc.velocity) out.velocity.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(steps));
  out.position_prior = sc.position_prior;
  return out;
}

enum class CoopMode { SpatialOnly, TemporalOnly, Joint };

inline const char* to_string(CoopMode m) {
  switch (m) {
    case CoopMode::SpatialOnly: return "spatial";
    case CoopMode::TemporalOnly: return "temporal";
    case CoopMode::Joint: return "joint";
  }
  return "?";
}

inline CoopMode parse_mode(const std::string& s) {
  for (CoopMode m : {CoopMode::SpatialOnly, CoopMode::TemporalOnly, CoopMode::Joint}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown cooperation mode '" + s + "' (expected spatial, temporal or joint)");
}

inline const std::vector<CoopMode>& all_modes() {
  static const std::vector<CoopMode> kModes{CoopMode::SpatialOnly, CoopMode::TemporalOnly, CoopMode::Joint};
  return kModes;
}

/// TemporalOnly keeps anchor ranging so the curve stays finite; only agent-agent ranging is dropped.
inline Cooperation cooperation(CoopMode m) {
  switch (m) {
    case CoopMode::SpatialOnly: return {false, true, true};
    case CoopMode::TemporalOnly: return {true, false, true};
    case CoopMode::Joint: return {true, true, true};
  }
  return {};
}

/// FNV-1a over node positions and link endpoints.
inline std::uint64_t scenario_hash(const Scenario& sc) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t na = sc.num_agents();
  mix(&na, sizeof na);
  for (const auto& tr : sc.geometry.positions()) {
    for (const auto& p : tr) {
      mix(&p.x, sizeof p.x);
      mix(&p.y, sizeof p.y);
    }
  }
  for (const auto& l : sc.links) {
    const std::uint64_t e[3] = {l.step, l.agent, l.peer};
    mix(e, sizeof e);
  }
  return h;
}

/// Filtering SPEB speb[n][k]: agent k at step n given measurements up to n.
inline std::vector<std::vector<double>> filtering_speb(const Scenario& sc, const Cooperation& coop) {
  std::vector<std::vector<double>> out;
  const CarryOverTrace trace = centralized_recursion(sc, coop);
  for (std::size_t n = 0; n < sc.steps(); ++n) {
    const auto values = speb_all(step_efim(trace.filtered[n], n));
    std::vector<double> row;
    for (std::size_t k = 0; k < sc.num_agents(); ++k) row.push_back(values.at({k, n}).m2);
    out.push_back(std::move(row));
  }
  return out;
}

/// Smoothing SPEB over the whole horizon from the dense joint EFIM.
inline std::vector<std::vector<double>> smoothing_speb(const Scenario& sc, const Cooperation& coop) {
  const auto values = speb_all(assemble_eq19(sc, coop));
  std::vector<std::vector<double>> out(sc.steps(), std::vector<double>(sc.num_agents()));
  for (const auto& [key, s] : values) out[key.second][key.first] = s.m2;
  return out;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// One trial: its seed, scenario fingerprint, and filtering SPEB speb[mode][n][k] at the longest horizon.
struct TrialRecord {
  std::uint64_t seed = 0;
  std::uint64_t scenario_hash = 0;
  std::vector<CoopMode> modes;
  std::vector<std::vector<std::vector<double>>> speb;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct SpebRow {
  CoopMode mode = CoopMode::Joint;
  double sweep_value = 0.0;
  double mean_speb = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;

  friend bool operator==(const SpebRow&, const SpebRow&) = default;
};

/// Rows plus the number of trials that failed and were excluded.
struct SpebTable {
  std::vector<SpebRow> rows;
  std::size_t failed_trials = 0;

  void sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const SpebRow& a, const SpebRow& b) {
      if (a.mode != b.mode) return static_cast<int>(a.mode) < static_cast<int>(b.mode);
      return a.sweep_value < b.sweep_value;
    });
  }
  [[nodiscard]] const SpebRow* find(CoopMode mode, double sweep_value) const {
    for (const auto& r : rows) {
      if (r.mode == mode && r.sweep_value == sweep_value) return &r;
    }
    return nullptr;
  }
};

enum class Averaging { FinalStep, AllSteps };

struct SweepOptions {
  std::vector<CoopMode> modes = all_modes();
  std::size_t trials = 500;
  Averaging averaging = Averaging::FinalStep;
  unsigned jobs = 1;
  bool audit = true;
};

namespace detail {

/// Mean and standard error; any infinite sample makes both infinite.
inline std::pair<double, double> mean_stderr(const std::vector<double>& v) {
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  for (double x : v) {
    if (!std::isfinite(x)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  const double m = mean_of(v);
  if (v.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(v.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

/// Runs fn(trial) for every trial on `jobs` threads; slot i of the result belongs to trial i.
template <class Result, class Fn>
std::vector<std::optional<Result>> run_trials(std::size_t trials, unsigned jobs, Fn fn) {
  std::vector<std::optional<Result>> out(trials);
  const auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < trials; t += stride) {
      try {
        out[t] = fn(t);
      } catch (const NumericalFailure&) {
        throw;
      } catch (const std::exception&) {
        out[t].reset();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, trials))));
  if (n == 1) {
    worker(0, 1);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&, w] {
      try {
        worker(w, n);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

inline void check_failures(std::size_t failed, std::size_t trials) {
  if (failed * 100 > trials) {
    throw NumericalFailure(std::to_string(failed) + " of " + std::to_string(trials) +
                           " trials failed numerically (limit 1%)");
  }
}

/// Carry-over recursion vs marginalization of the dense joint EFIM on a small sub-network.
inline void audit_recursion(const ScenarioConfig& cfg, std::uint64_t seed) {
  ScenarioConfig small = cfg;
  small.num_agents = std::min<std::size_t>(cfg.num_agents, 3);
  small.steps = std::min<std::size_t>(cfg.steps, 4);
  small.seed = seed;
  if (small.num_agents == 0) return;
  const Scenario sc = generate_scenario(small);
  const JointEfim full = assemble_eq19(sc);
  const CarryOverTrace trace = centralized_recursion(sc);
  for (std::size_t first = 0; first < sc.steps(); ++first) {
    std::set<std::pair<std::size_t, std::size_t>> keep;
    for (std::size_t n = first; n < sc.steps(); ++n) {
      for (std::size_t k = 0; k < sc.num_agents(); ++k) keep.insert({k, n});
    }
    // relative to the joint EFIM: a suffix whose marginal is near zero would otherwise compare noise
    const Eigen::MatrixXd diff =
        assemble_suffix(sc, first, trace.carry[first]).dense() - marginal_efim(full, keep).dense();
    const double scale = full.dense().norm();
    const double err = scale == 0.0 ? diff.norm() : diff.norm() / scale;
    if (!(err <= 1e-9)) {
      throw NumericalFailure("recursion audit failed at suffix " + std::to_string(first) + " (seed " +
                             std::to_string(seed) + ", relative error " + std::to_string(err) + ")");
    }
  }
}

}  // namespace detail

/// Trial record at the config's horizon.
inline TrialRecord run_trial(const ScenarioConfig& cfg, const std::vector<CoopMode>& modes, std::uint64_t seed) {
  ScenarioConfig c = cfg;
  c.seed = seed;
  const Scenario sc = generate_scenario(c);
  TrialRecord rec{seed, scenario_hash(sc), modes, {}};
  for (CoopMode m : modes) rec.speb.push_back(filtering_speb(sc, cooperation(m)));
  return rec;
}

/**
 * @brief Average SPEB against the number of time steps.
 *
 * For each horizon T in `step_counts` and each mode: mean over trials of the network-average SPEB
 * at step T (FinalStep) or over steps 1..T (AllSteps, smoothing bound). Horizons share one
 * trajectory per trial, so the curves use common random numbers.
 */
inline SpebTable sweep_time(const ScenarioConfig& cfg, const std::vector<std::size_t>& step_counts,
                            const SweepOptions& opt = {}) {
  cfg.validate();
  if (opt.trials < 1) throw ConfigError("trials must be at least 1");
  SpebTable table;
  if (step_counts.empty() || cfg.num_agents == 0) return table;
  const std::size_t horizon = *std::max_element(step_counts.begin(), step_counts.end());
  if (*std::min_element(step_counts.begin(), step_counts.end()) < 1) throw ConfigError("step counts must be >= 1");
  ScenarioConfig run_cfg = cfg;
  run_cfg.steps = horizon;
  if (opt.audit) detail::audit_recursion(run_cfg, rng::trial_seed(cfg.seed, 0));

  // values[trial][mode][i] = network-average SPEB for step_counts[i]
  using Values = std::vector<std::vector<double>>;
  const auto results = detail::run_trials<Values>(opt.trials, opt.jobs, [&](std::size_t t) {
    ScenarioConfig c = run_cfg;
    c.seed = rng::trial_seed(cfg.seed, t);
    const Scenario sc = generate_scenario(c);
    Values v;
    for (CoopMode m : opt.modes) {
      const Cooperation coop = cooperation(m);
      std::vector<double> per_count;
      if (opt.averaging == Averaging::FinalStep) {
        const auto f = filtering_speb(sc, coop);
        for (std::size_t count : step_counts) per_count.push_back(mean_of(f[count - 1]));
      } else {
        for (std::size_t count : step_counts) {
          double s = 0.0;
          for (const auto& row : smoothing_speb(prefix_scenario(sc, count), coop)) s += mean_of(row);
          per_count.push_back(s / static_cast<double>(count));
        }
      }
      v.push_back(std::move(per_count));
    }
    return v;
  });

  std::size_t ok = 0;
  for (const auto& r : results) ok += r.has_value();
  table.failed_trials = opt.trials - ok;
  detail::check_failures(table.failed_trials, opt.trials);
  for (std::size_t mi = 0; mi < opt.modes.size(); ++mi) {
    for (std::size_t i = 0; i < step_counts.size(); ++i) {
      std::vector<double> samples;
      for (const auto& r : results) {
        if (r) samples.push_back((*r)[mi][i]);
      }
      const auto [m, se] = detail::mean_stderr(samples);
      table.rows.push_back({opt.modes[mi], static_cast<double>(step_counts[i]), m, se, samples.size()});
    }
  }
  table.sort();
  return table;
}

/// Average SPEB against the number of agents at the config's fixed horizon.
inline SpebTable sweep_nodes(const ScenarioConfig& cfg, const std::vector<std::size_t>& agent_counts,
                             const SweepOptions& opt = {}) {
  cfg.validate();
  if (opt.trials < 1) throw ConfigError("trials must be at least 1");
  SpebTable table;
  if (agent_counts.empty()) return table;
  if (opt.audit) {
    ScenarioConfig audit_cfg = cfg;
    audit_cfg.num_agents = *std::max_element(agent_counts.begin(), agent_counts.end());
    detail::audit_recursion(audit_cfg, rng::trial_seed(cfg.seed, 0));
  }

  using Values = std::vector<std::vector<double>>;
  const auto results = detail::run_trials<Values>(opt.trials, opt.jobs, [&](std::size_t t) {
    Values v(opt.modes.size());
    for (std::size_t count : agent_counts) {
      ScenarioConfig c = cfg;
      c.num_agents = count;
      c.seed = rng::trial_seed(cfg.seed, t);
      const Scenario sc = generate_scenario(c);
      for (std::size_t mi = 0; mi < opt.modes.size(); ++mi) {
        const Cooperation coop = cooperation(opt.modes[mi]);
        double value = 0.0;
        if (count == 0) {
          value = std::numeric_limits<double>::quiet_NaN();
        } else if (opt.averaging == Averaging::FinalStep) {
          value = mean_of(filtering_speb(sc, coop).back());
        } else {
          for (const auto& row : smoothing_speb(sc, coop)) value += mean_of(row);
          value /= static_cast<double>(sc.steps());
        }
        v[mi].push_back(value);
      }
    }
    return v;
  });

  std::size_t ok = 0;
  for (const auto& r : results) ok += r.has_value();
  table.failed_trials = opt.trials - ok;
  detail::check_failures(table.failed_trials, opt.trials);
  for (std::size_t mi = 0; mi < opt.modes.size(); ++mi) {
    for (std::size_t i = 0; i < agent_counts.size(); ++i) {
      if (agent_counts[i] == 0) continue;
      std::vector<double> samples;
      for (const auto& r : results) {
        if (r) samples.push_back((*r)[mi][i]);
      }
      const auto [m, se] = detail::mean_stderr(samples);
      table.rows.push_back({opt.modes[mi], static_cast<double>(agent_counts[i]), m, se, samples.size()});
    }
  }
  table.sort();
  return table;
}

// ---------------------------------------------------------------------------------------------
// Persistence

inline constexpr const char* kTableHeader = "mode,sweep_value,mean_speb_m2,std_error_m2,trials";

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline std::string table_csv(SpebTable table) {
  table.sort();
  std::string out = std::string(kTableHeader) + "\n";
  for (const auto& r : table.rows) {
    out += std::string(to_string(r.mode)) + "," + format_double(r.sweep_value) + "," + format_double(r.mean_speb) +
           "," + format_double(r.std_error) + "," + std::to_string(r.trials) + "\n";
  }
  return out;
}

/// Writes `content` to a sibling temp file, then renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

inline void persist(const SpebTable& table, const std::filesystem::path& path) { write_atomic(path, table_csv(table)); }

inline SpebTable read_table(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != kTableHeader) throw std::runtime_error("bad table header in " + path.string());
  SpebTable table;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::runtime_error("malformed row in " + path.string() + ": " + line);
    table.rows.push_back({parse_mode(cells[0]), parse_double(cells[1]), parse_double(cells[2]), parse_double(cells[3]),
                          static_cast<std::size_t>(std::stoull(cells[4]))});
  }
  return table;
}

}  // namespace navlim

#endif  // NAVLIM_SIMKIT_HPP
