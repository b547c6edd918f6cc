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
#ifndef NAVLIM_SCENARIO_JSON_HPP
#define NAVLIM_SCENARIO_JSON_HPP

// Scenario files. Top-level keys (all optional, unknown keys rejected):
//   area          [width, height]
//   anchors       count, or list of [x, y]
//   agents        count, or list of trajectories (each a list of T [x, y] points)
//   T             number of time steps
//   intensities   {lambda_kk, nu_kk, xi_kk, lambda_kj}
//   step_cov      scalar s (s * I) or [[a, b], [b, c]]
//   connectivity  "full" or {"radius": r}
//   seed          unsigned 64-bit

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "navlim/simkit.hpp"

namespace navlim {

/// A parsed scenario file: a config plus whatever positions it fixes.
struct ScenarioFile {
  ScenarioConfig config;
  FixedPlacement placement;

  [[nodiscard]] Scenario realize() const { return generate_scenario(config, placement); }
};

namespace json_detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline Vec2 point(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be [x, y]");
  return {number(j[0], what), number(j[1], what)};
}

}  // namespace json_detail

inline ScenarioFile scenario_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  check_keys(j, {"area", "anchors", "agents", "T", "intensities", "step_cov", "connectivity", "seed"}, "scenario");
  ScenarioFile out;
  ScenarioConfig& c = out.config;
  std::optional<std::size_t> steps;
  if (j.contains("T")) steps = count(j["T"], "T");

  if (j.contains("area")) {
    const Vec2 a = point(j["area"], "area");
    c.width = a.x;
    c.height = a.y;
  }
  if (j.contains("anchors")) {
    const json& a = j["anchors"];
    if (a.is_array()) {
      std::vector<Vec2> anchors;
      for (const auto& p : a) anchors.push_back(point(p, "anchor position"));
      c.num_anchors = anchors.size();
      out.placement.anchors = std::move(anchors);
    } else {
      c.num_anchors = count(a, "anchors");
    }
  }
  if (j.contains("agents")) {
    const json& a = j["agents"];
    if (a.is_array()) {
      std::vector<std::vector<Vec2>> trajectories;
      for (const auto& tr : a) {
        if (!tr.is_array() || tr.empty()) throw ConfigError("agent trajectory must be a non-empty list of points");
        std::vector<Vec2> pts;
        for (const auto& p : tr) pts.push_back(point(p, "trajectory point"));
        if (!trajectories.empty() && pts.size() != trajectories.front().size()) {
          throw ConfigError("agent trajectories differ in length");
        }
        trajectories.push_back(std::move(pts));
      }
      c.num_agents = trajectories.size();
      if (!trajectories.empty()) {
        if (steps && *steps != trajectories.front().size()) throw ConfigError("T does not match trajectory length");
        steps = trajectories.front().size();
      }
      out.placement.trajectories = std::move(trajectories);
    } else {
      c.num_agents = count(a, "agents");
    }
  }
  if (steps) c.steps = *steps;
  if (j.contains("intensities")) {
    const json& i = j["intensities"];
    check_keys(i, {"lambda_kk", "nu_kk", "xi_kk", "lambda_kj"}, "intensities");
    if (i.contains("lambda_kk")) c.intensities.lambda_kk = number(i["lambda_kk"], "lambda_kk");
    if (i.contains("nu_kk")) c.intensities.nu_kk = number(i["nu_kk"], "nu_kk");
    if (i.contains("xi_kk")) c.intensities.xi_kk = number(i["xi_kk"], "xi_kk");
    if (i.contains("lambda_kj")) c.intensities.lambda_kj = number(i["lambda_kj"], "lambda_kj");
  }
  if (j.contains("step_cov")) {
    const json& s = j["step_cov"];
    if (s.is_number()) {
      c.step_cov = s.get<double>() * Sym2::identity();
    } else if (s.is_array() && s.size() == 2) {
      const Vec2 r0 = point(s[0], "step_cov row");
      const Vec2 r1 = point(s[1], "step_cov row");
      if (r0.y != r1.x) throw ConfigError("step_cov must be symmetric");
      c.step_cov = {r0.x, r0.y, r1.y};
    } else {
      throw ConfigError("step_cov must be a number or a 2x2 matrix");
    }
  }
  if (j.contains("connectivity")) {
    const json& k = j["connectivity"];
    if (k.is_string() && k.get<std::string>() == "full") {
      c.connectivity = {Connectivity::Full, 0.0};
    } else if (k.is_object()) {
      check_keys(k, {"radius"}, "connectivity");
      if (!k.contains("radius")) throw ConfigError("connectivity object needs 'radius'");
      c.connectivity = {Connectivity::Radius, number(k["radius"], "radius")};
    } else {
      throw ConfigError("connectivity must be \"full\" or {\"radius\": r}");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.validate();
  return out;
}

inline ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed scenario file " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline nlohmann::json scenario_to_json(const ScenarioFile& s) {
  using nlohmann::json;
  const ScenarioConfig& c = s.config;
  json j;
  j["area"] = {c.width, c.height};
  if (s.placement.anchors) {
    json a = json::array();
    for (const auto& p : *s.placement.anchors) a.push_back({p.x, p.y});
    j["anchors"] = a;
  } else {
    j["anchors"] = c.num_anchors;
  }
  if (s.placement.trajectories) {
    json a = json::array();
    for (const auto& tr : *s.placement.trajectories) {
      json pts = json::array();
      for (const auto& p : tr) pts.push_back({p.x, p.y});
      a.push_back(pts);
    }
    j["agents"] = a;
  } else {
    j["agents"] = c.num_agents;
  }
  j["T"] = c.steps;
  j["intensities"] = {{"lambda_kk", c.intensities.lambda_kk},
                      {"nu_kk", c.intensities.nu_kk},
                      {"xi_kk", c.intensities.xi_kk},
                      {"lambda_kj", c.intensities.lambda_kj}};
  j["step_cov"] = {{c.step_cov.a11, c.step_cov.a12}, {c.step_cov.a12, c.step_cov.a22}};
  if (c.connectivity.kind == Connectivity::Full) {
    j["connectivity"] = "full";
  } else {
    j["connectivity"] = {{"radius", c.connectivity.radius}};
  }
  j["seed"] = c.seed;
  return j;
}

}  // namespace navlim

#endif  // NAVLIM_SCENARIO_JSON_HPP
