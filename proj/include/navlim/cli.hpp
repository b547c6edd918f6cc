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
#ifndef NAVLIM_CLI_HPP
#define NAVLIM_CLI_HPP

// Exit codes: 0 ok, 1 verify identity failed, 2 configuration or usage error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "navlim/geom2d.hpp"
#include "navlim/navinfo.hpp"
#include "navlim/scenario_json.hpp"
#include "navlim/simkit.hpp"
#include "navlim/svg.hpp"
#include "navlim/verify.hpp"

namespace navlim::cli {

enum ExitCode : int { kOk = 0, kIdentityFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

/// "a..b" (inclusive) or a single integer.
inline std::vector<std::size_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const unsigned long long v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {static_cast<std::size_t>(v)};
    }
    const std::string a = s.substr(0, dots);
    const std::string b = s.substr(dots + 2);
    const unsigned long long lo = std::stoull(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const unsigned long long hi = std::stoull(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    if (hi < lo) throw std::invalid_argument(s);
    std::vector<std::size_t> out;
    for (unsigned long long v = lo; v <= hi; ++v) out.push_back(static_cast<std::size_t>(v));
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError("bad range '" + s + "' (expected N or A..B)");
  }
}

inline std::vector<CoopMode> parse_modes(const std::string& s) {
  std::vector<CoopMode> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const CoopMode m = parse_mode(item);
    if (std::find(out.begin(), out.end(), m) != out.end()) throw ConfigError("mode listed twice: " + item);
    out.push_back(m);
  }
  if (out.empty()) throw ConfigError("no cooperation modes selected");
  return out;
}

/// Flag value, then NAVLIM_SEED, then the fallback.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NAVLIM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const std::string s(env);
      const unsigned long long v = std::stoull(s, &used);
      if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError(std::string("NAVLIM_SEED is not an unsigned integer: '") + env + "'");
  }
  return fallback;
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
  return dir;
}

struct SweepArgs {
  std::size_t trials = 500;
  std::string steps;
  std::string agents;
  std::optional<std::size_t> anchors;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string emit = "csv";
  std::string config;
  std::string average = "final";
  std::string modes = "spatial,temporal,joint";
  unsigned jobs = 1;
};

inline ScenarioConfig base_config(const SweepArgs& a) {
  ScenarioConfig cfg;
  if (!a.config.empty()) {
    const ScenarioFile f = load_scenario_file(a.config);
    if (f.placement.anchors || f.placement.trajectories) {
      throw ConfigError("sweeps draw random placements; the config file must give counts, not positions");
    }
    cfg = f.config;
  }
  if (a.anchors) cfg.num_anchors = *a.anchors;
  cfg.seed = resolve_seed(a.seed, a.config.empty() ? 0 : cfg.seed);
  return cfg;
}

inline SweepOptions sweep_options(const SweepArgs& a) {
  SweepOptions opt;
  opt.trials = a.trials;
  opt.modes = parse_modes(a.modes);
  opt.averaging = a.average == "all" ? Averaging::AllSteps : Averaging::FinalStep;
  opt.jobs = a.jobs;
  return opt;
}

inline void emit_table(const SpebTable& table, const std::filesystem::path& dir, const std::string& stem,
                       const std::string& emit, const std::string& x_label, std::ostream& out) {
  if (emit == "csv" || emit == "both") {
    persist(table, dir / (stem + ".csv"));
    out << "wrote " << (dir / (stem + ".csv")).string() << " (" << table.rows.size() << " rows)\n";
  }
  if (emit == "svg" || emit == "both") {
    write_atomic(dir / (stem + ".svg"), svg::line_plot(table, x_label, "average SPEB"));
    out << "wrote " << (dir / (stem + ".svg")).string() << "\n";
  }
  if (table.failed_trials > 0) out << "excluded " << table.failed_trials << " failed trial(s)\n";
}

inline void add_sweep_flags(CLI::App* sub, SweepArgs& a) {
  sub->add_option("--trials", a.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  sub->add_option("--seed", a.seed, "master seed (default: NAVLIM_SEED, else the config seed, else 0)");
  sub->add_option("--out", a.out, "output directory");
  sub->add_option("--emit", a.emit, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  sub->add_option("--config", a.config, "scenario JSON giving the base configuration")->check(CLI::ExistingFile);
  sub->add_option("--anchors", a.anchors, "number of anchors");
  sub->add_option("--average", a.average, "final: SPEB at the last step; all: mean over steps")
      ->check(CLI::IsMember({"final", "all"}));
  sub->add_option("--modes", a.modes, "comma-separated subset of spatial,temporal,joint");
  sub->add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
}

inline int cmd_sweep_time(const SweepArgs& a, std::ostream& out) {
  ScenarioConfig cfg = base_config(a);
  if (!a.agents.empty()) {
    const auto v = parse_range(a.agents);
    if (v.size() != 1) throw ConfigError("sweep-time takes a single --agents count");
    cfg.num_agents = v.front();
  }
  const auto steps = parse_range(a.steps.empty() ? "1..20" : a.steps);
  if (steps.front() < 1) throw ConfigError("step counts start at 1");
  const auto dir = prepare_out_dir(a.out);
  const SpebTable table = sweep_time(cfg, steps, sweep_options(a));
  emit_table(table, dir, "sweep_time", a.emit, "time steps", out);
  return kOk;
}

inline int cmd_sweep_nodes(const SweepArgs& a, std::ostream& out) {
  ScenarioConfig cfg = base_config(a);
  const auto agents = parse_range(a.agents.empty() ? "2..12" : a.agents);
  const auto steps = parse_range(a.steps.empty() ? "10" : a.steps);
  if (steps.size() != 1 || steps.front() < 1) throw ConfigError("sweep-nodes takes a single --steps count >= 1");
  cfg.steps = steps.front();
  const auto dir = prepare_out_dir(a.out);
  const SpebTable table = sweep_nodes(cfg, agents, sweep_options(a));
  emit_table(table, dir, "sweep_nodes", a.emit, "number of agents", out);
  return kOk;
}

struct VerifyArgs {
  std::optional<std::uint64_t> seed;
  std::size_t cases = 100;
  bool list = false;
  std::optional<double> tolerance_override;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto& ids = verify::identities();
  if (a.list) {
    for (const auto& id : ids) out << id.name << "\n";
    return kOk;
  }
  const std::uint64_t seed = resolve_seed(a.seed, 0);
  bool all = true;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto r = verify::run_identity(ids[i], i, seed, a.cases, a.tolerance_override);
    char line[256];
    std::snprintf(line, sizeof line, "%s %-24s cases=%zu max_error=%.3e tolerance=%.1e", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.cases, r.max_error, r.tolerance);
    out << line;
    if (!r.passed) {
      all = false;
      out << " first_failing_case=" << *r.failing_case << " seed=" << seed;
      if (!r.failure.empty()) out << " error=\"" << r.failure << "\"";
    }
    out << "\n";
  }
  if (!all) out << "identity check failed; reproduce with: verify --seed " << seed << " --cases " << a.cases << "\n";
  return all ? kOk : kIdentityFailed;
}

struct EllipseArgs {
  std::string scenario;
  std::string out = ".";
  std::string emit = "csv";
  std::string recursion = "distributed";
};

struct EllipseRow {
  std::size_t agent = 0;  ///< 1-based
  std::size_t step = 0;   ///< 1-based
  std::string stage;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double orientation = 0.0;
  bool degenerate = false;
};

/// Semi-axes sqrt(eigenvalues of J); a J that is not PD is flagged and its axes clamped at 0.
inline EllipseRow ellipse_row(std::size_t agent, std::size_t step, const std::string& stage, const Sym2& j) {
  const Eigen2 e = eigen2(j);
  return {agent + 1, step + 1, stage, std::sqrt(std::max(0.0, e.lambda1)), std::sqrt(std::max(0.0, e.lambda2)),
          e.angle1.rad, !is_pd(j)};
}

/// Per agent and step: carry-over information, then the individual EFIM after spatial cooperation.
inline std::vector<EllipseRow> ellipse_rows(const Scenario& sc, bool centralized) {
  std::vector<EllipseRow> rows;
  std::vector<std::vector<Sym2>> carry(sc.steps()), after(sc.steps());
  if (centralized) {
    const CarryOverTrace t = centralized_recursion(sc);
    for (std::size_t n = 0; n < sc.steps(); ++n) {
      after[n] = individual_efims(t.filtered[n]);
      for (std::size_t k = 0; k < sc.num_agents(); ++k) carry[n].push_back(agent_block(t.carry[n], k));
    }
  } else {
    const DistributedTrace t = distributed_recursion(sc);
    for (std::size_t n = 0; n < sc.steps(); ++n) {
      carry[n] = t.carry[n].per_agent;
      after[n] = t.individual[n];
    }
  }
  for (std::size_t k = 0; k < sc.num_agents(); ++k) {
    for (std::size_t n = 0; n < sc.steps(); ++n) {
      rows.push_back(ellipse_row(k, n, "carry_over", carry[n][k]));
      rows.push_back(ellipse_row(k, n, "after_spatial", after[n][k]));
    }
  }
  return rows;
}

inline std::string ellipse_csv(const std::vector<EllipseRow>& rows) {
  std::string s = "agent,step,stage,semi_major_m_inv,semi_minor_m_inv,orientation_rad,degenerate\n";
  for (const auto& r : rows) {
    s += std::to_string(r.agent) + "," + std::to_string(r.step) + "," + r.stage + "," + format_double(r.semi_major) +
         "," + format_double(r.semi_minor) + "," + format_double(r.orientation) + "," +
         (r.degenerate ? "true" : "false") + "\n";
  }
  return s;
}

inline int cmd_ellipse(const EllipseArgs& a, std::ostream& out) {
  const ScenarioFile file = load_scenario_file(a.scenario);
  const Scenario sc = file.realize();
  const auto rows = ellipse_rows(sc, a.recursion == "centralized");
  const auto dir = prepare_out_dir(a.out);
  if (a.emit == "csv" || a.emit == "both") {
    write_atomic(dir / "ellipse.csv", ellipse_csv(rows));
    out << "wrote " << (dir / "ellipse.csv").string() << " (" << rows.size() << " rows)\n";
  }
  if (a.emit == "svg" || a.emit == "both") {
    double top = 0.0;
    for (const auto& r : rows) top = std::max(top, r.semi_major);
    const double scale = top > 0.0 ? 1.5 / top : 1.0;  // largest ellipse drawn with a 1.5 m semi-axis
    std::vector<svg::EllipseMark> marks;
    for (const auto& r : rows) {
      const Vec2 c = sc.geometry.position(r.agent - 1, r.step - 1);
      marks.push_back({c, scale * r.semi_major, scale * r.semi_minor, Angle(r.orientation),
                       r.stage == "carry_over" ? 0U : 1U});
    }
    std::vector<Vec2> anchors;
    for (std::size_t j = sc.num_agents(); j < sc.geometry.num_nodes(); ++j) anchors.push_back(sc.geometry.position(j, 0));
    write_atomic(dir / "ellipse.svg", svg::ellipse_overlay(anchors, marks, file.config.width, file.config.height));
    out << "wrote " << (dir / "ellipse.svg").string() << "\n";
  }
  return kOk;
}

/// Entry point; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position error bounds for cooperative navigation networks", "navlim"};
  app.require_subcommand(1, 1);

  SweepArgs time_args, node_args;
  auto* st = app.add_subcommand("sweep-time", "average SPEB against the number of time steps");
  add_sweep_flags(st, time_args);
  st->add_option("--steps", time_args.steps, "step counts, A..B (default 1..20)");
  st->add_option("--agents", time_args.agents, "number of agents (default 5)");

  auto* sn = app.add_subcommand("sweep-nodes", "average SPEB against the number of agents");
  add_sweep_flags(sn, node_args);
  sn->add_option("--agents", node_args.agents, "agent counts, A..B (default 2..12)");
  sn->add_option("--steps", node_args.steps, "time steps per trial (default 10)");

  VerifyArgs verify_args;
  auto* ve = app.add_subcommand("verify", "check the identity suite on random inputs");
  ve->add_option("--seed", verify_args.seed, "master seed (default: NAVLIM_SEED, else 0)");
  ve->add_option("--cases", verify_args.cases, "random cases per identity")->check(CLI::PositiveNumber);
  ve->add_flag("--list", verify_args.list, "list identity names and exit");
  ve->add_option("--tolerance-override", verify_args.tolerance_override)->group("");

  EllipseArgs ellipse_args;
  auto* el = app.add_subcommand("ellipse", "information ellipses per agent and step");
  el->add_option("--scenario", ellipse_args.scenario, "scenario JSON")->required();
  el->add_option("--out", ellipse_args.out, "output directory");
  el->add_option("--emit", ellipse_args.emit, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  el->add_option("--recursion", ellipse_args.recursion, "distributed or centralized carry-over")
      ->check(CLI::IsMember({"distributed", "centralized"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (*st) return cmd_sweep_time(time_args, out);
    if (*sn) return cmd_sweep_nodes(node_args, out);
    if (*ve) return cmd_verify(verify_args, out);
    if (*el) return cmd_ellipse(ellipse_args, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace navlim::cli

#endif  // NAVLIM_CLI_HPP
