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
#ifndef NAVLIM_MODELS_HPP
#define NAVLIM_MODELS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "navlim/blockfim.hpp"
#include "navlim/geom2d.hpp"

namespace navlim {

/// Direction between two nodes (or two steps of one node) is undefined.
class UndefinedDirection : public std::domain_error {
 public:
  explicit UndefinedDirection(const std::string& what) : std::domain_error(what) {}
};

// ---------------------------------------------------------------------------------------------
// Geometry

/**
 * @brief Positions of every node at every step. Nodes [0, num_agents) are agents, the rest anchors.
 *
 * Distances and angles follow the usual convention: phi_kj points from p_k to p_j, phi_kk from
 * p_k^(n-1) to p_k^(n).
 */
class ScenarioGeometry {
 public:
  ScenarioGeometry() = default;
  ScenarioGeometry(std::size_t num_agents, std::vector<std::vector<Vec2>> positions)
      : num_agents_(num_agents), positions_(std::move(positions)) {
    if (num_agents_ > positions_.size()) throw std::invalid_argument("more agents than nodes");
    steps_ = positions_.empty() ? 0 : positions_.front().size();
    for (const auto& track : positions_) {
      if (track.size() != steps_) throw std::invalid_argument("every node needs one position per step");
      for (const Vec2& p : track) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite position");
      }
    }
  }

  [[nodiscard]] std::size_t num_agents() const { return num_agents_; }
  [[nodiscard]] std::size_t num_nodes() const { return positions_.size(); }
  [[nodiscard]] std::size_t num_anchors() const { return num_nodes() - num_agents_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }
  [[nodiscard]] bool is_agent(std::size_t node) const { return node < num_agents_; }
  [[nodiscard]] Vec2 position(std::size_t node, std::size_t n) const { return positions_.at(node).at(n); }
  [[nodiscard]] const std::vector<std::vector<Vec2>>& positions() const { return positions_; }

  [[nodiscard]] double distance(std::size_t k, std::size_t j, std::size_t n) const {
    return (position(j, n) - position(k, n)).norm();
  }
  [[nodiscard]] Angle direction(std::size_t k, std::size_t j, std::size_t n) const {
    const Vec2 d = position(j, n) - position(k, n);
    if (d.norm() <= 0.0) {
      throw UndefinedDirection("undefined direction: nodes " + std::to_string(k) + " and " +
                               std::to_string(j) + " coincide at step " + std::to_string(n));
    }
    return d.heading();
  }
  /// d_kk^(n); n >= 1.
  [[nodiscard]] double step_length(std::size_t k, std::size_t n) const {
    return (position(k, n) - position(k, n - 1)).norm();
  }
  [[nodiscard]] Angle heading(std::size_t k, std::size_t n) const {
    const Vec2 d = position(k, n) - position(k, n - 1);
    if (d.norm() <= 0.0) {
      throw UndefinedDirection("undefined direction: agent " + std::to_string(k) +
                               " does not move at step " + std::to_string(n));
    }
    return d.heading();
  }

 private:
  std::size_t num_agents_ = 0;
  std::size_t steps_ = 0;
  std::vector<std::vector<Vec2>> positions_;
};

// ---------------------------------------------------------------------------------------------
// Measurement and mobility models

/// Ranging intensity lambda_kj (m^-2).
struct RangeModel {
  double lambda = 0.0;
};

/**
 * Gaussian range measurement z = d + b + w with w ~ N(0, sigma_r^2) and bias b ~ N(0, sigma_bias^2).
 * sigma_bias = 0 means no bias; infinity means an unobservable bias.
 */
struct GaussianRange {
  double sigma_r = 1.0;
  double sigma_bias = 0.0;

  /// Joint FIM over (d, b); b's prior is included. Only meaningful for sigma_bias > 0.
  [[nodiscard]] Eigen::Matrix2d joint_fim() const {
    const double w = 1.0 / (sigma_r * sigma_r);
    const double prior = std::isinf(sigma_bias) ? 0.0 : 1.0 / (sigma_bias * sigma_bias);
    Eigen::Matrix2d j;
    j << w, w, w, w + prior;
    return j;
  }

  /// lambda after eliminating the bias.
  [[nodiscard]] RangeModel intensity() const {
    if (!(sigma_r > 0.0)) throw std::invalid_argument("range noise std must be positive");
    if (sigma_bias == 0.0) return {1.0 / (sigma_r * sigma_r)};
    const Eigen::Matrix2d j = joint_fim();
    const Eigen::MatrixXd reduced = psi(j.block(0, 0, 1, 1), j.block(0, 1, 1, 1), j.block(1, 1, 1, 1),
                                        j.block(1, 0, 1, 1));
    return {std::max(0.0, reduced(0, 0))};
  }
};

/// Velocity intensities: along-track lambda, cross-track nu, coupling xi (all m^-2).
struct VelocityModel {
  double lambda = 0.0;
  double nu = 0.0;
  double xi = 0.0;

  [[nodiscard]] bool isotropic() const { return lambda == nu && xi == 0.0; }
  [[nodiscard]] bool valid() const {
    return lambda >= 0.0 && nu >= 0.0 && is_psd(Sym2{lambda, xi, nu});
  }
};

/**
 * @brief Gaussian polar velocity measurement.
 *
 * amplitude = d_kk / dt + bias + w_a, direction = phi_kk + w_d, with (w_a, w_d) ~ N(0, noise_cov)
 * and bias ~ N(0, sigma_bias^2) (sigma_bias = 0: no bias).
 */
struct GaussianVelocity {
  Sym2 noise_cov = Sym2::identity();
  double sigma_bias = 0.0;
  double dt = 1.0;

  /// K_breve over (d, phi) after eliminating the amplitude bias.
  [[nodiscard]] Sym2 polar_info() const {
    if (!is_pd(noise_cov)) throw NotPositiveDefinite("velocity noise covariance must be PD");
    const Sym2 w = inverse2(noise_cov);
    // measurement Jacobian w.r.t. (d, phi, bias): [[1/dt, 0, 1], [0, 1, 0]]
    Eigen::Matrix<double, 2, 3> h;
    h << 1.0 / dt, 0.0, 1.0, 0.0, 1.0, 0.0;
    Eigen::Matrix3d fim = h.transpose() * w.eigen() * h;
    if (sigma_bias == 0.0) return Sym2::from_eigen(fim.block<2, 2>(0, 0));
    if (!std::isinf(sigma_bias)) fim(2, 2) += 1.0 / (sigma_bias * sigma_bias);
    const Eigen::MatrixXd reduced =
        psi(fim.block(0, 0, 2, 2), fim.block(0, 2, 2, 1), fim.block(2, 2, 1, 1), fim.block(2, 0, 1, 2));
    return Sym2::from_eigen(reduced);
  }

  /// lambda = K11, xi = K12 / d, nu = K22 / d^2 for a step of length d.
  [[nodiscard]] VelocityModel intensity(double step_length) const {
    const Sym2 k = polar_info();
    if (!(step_length > 0.0)) {
      if (k.a12 != 0.0 || k.a22 != 0.0) {
        throw UndefinedDirection("velocity direction undefined for a zero-length step");
      }
      return {k.a11, 0.0, 0.0};
    }
    return {k.a11, k.a22 / (step_length * step_length), k.a12 / step_length};
  }
};

enum class MobilityKind { GaussianRandomWalk };

struct MobilityModel {
  MobilityKind kind = MobilityKind::GaussianRandomWalk;
  Sym2 step_cov = Sym2::identity();
  /// Optional prior information on the first position.
  std::optional<Sym2> initial_prior;
};

// ---------------------------------------------------------------------------------------------
// Scenario

/// One range measurement at a step; `agent` is always an agent, `peer` an agent or an anchor.
struct RangeLink {
  std::size_t step = 0;
  std::size_t agent = 0;
  std::size_t peer = 0;
  RangeModel model;
};

/**
 * @brief Geometry plus what was measured.
 *
 * velocity[k][n] applies to the step (n-1 -> n) and is ignored for n = 0. position_prior[k], when
 * set, is added to agent k's own information at every step.
 */
struct Scenario {
  ScenarioGeometry geometry;
  std::vector<RangeLink> links;
  std::vector<std::vector<VelocityModel>> velocity;
  std::vector<std::optional<Sym2>> position_prior;

  [[nodiscard]] std::size_t num_agents() const { return geometry.num_agents(); }
  [[nodiscard]] std::size_t steps() const { return geometry.steps(); }

  void validate() const {
    const std::size_t na = num_agents();
    if (velocity.size() != na || position_prior.size() != na) {
      throw std::invalid_argument("scenario: per-agent tables do not match the agent count");
    }
    for (const auto& v : velocity) {
      if (v.size() != steps()) throw std::invalid_argument("scenario: velocity table length != steps");
      for (const auto& m : v) {
        if (!m.valid()) throw std::invalid_argument("scenario: velocity intensities not PSD");
      }
    }
    for (const auto& link : links) {
      if (link.step >= steps() || !geometry.is_agent(link.agent) || link.peer >= geometry.num_nodes() ||
          link.peer == link.agent || !(link.model.lambda >= 0.0)) {
        throw std::invalid_argument("scenario: invalid range link");
      }
    }
  }
};

enum class Connectivity { Full, Radius };

struct ConnectivityModel {
  Connectivity kind = Connectivity::Full;
  double radius = 0.0;

  [[nodiscard]] bool connected(double distance) const {
    return kind == Connectivity::Full || distance <= radius;
  }
};

/// Uniform intensities over a geometry: every agent pair and agent-anchor pair in range measures.
inline Scenario make_scenario(ScenarioGeometry geometry, const VelocityModel& velocity, const RangeModel& range,
                              const ConnectivityModel& connectivity = {}) {
  Scenario sc;
  const std::size_t na = geometry.num_agents();
  for (std::size_t n = 0; n < geometry.steps(); ++n) {
    for (std::size_t k = 0; k < na; ++k) {
      for (std::size_t j = k + 1; j < geometry.num_nodes(); ++j) {
        if (connectivity.connected(geometry.distance(k, j, n))) sc.links.push_back({n, k, j, range});
      }
    }
  }
  sc.velocity.assign(na, std::vector<VelocityModel>(geometry.steps(), velocity));
  sc.position_prior.assign(na, std::nullopt);
  sc.geometry = std::move(geometry);
  sc.validate();
  return sc;
}

/// The same network with `agent` treated as an anchor (it keeps its trajectory).
inline Scenario with_agent_as_anchor(const Scenario& sc, std::size_t agent) {
  const std::size_t na = sc.num_agents();
  if (agent >= na) throw std::out_of_range("not an agent");
  // new node order: other agents, then the promoted node, then the original anchors
  std::vector<std::size_t> new_index(sc.geometry.num_nodes());
  std::vector<std::vector<Vec2>> positions;
  for (std::size_t k = 0; k < na; ++k) {
    if (k == agent) continue;
    new_index[k] = positions.size();
    positions.push_back(sc.geometry.positions()[k]);
  }
  new_index[agent] = positions.size();
  positions.push_back(sc.geometry.positions()[agent]);
  for (std::size_t j = na; j < sc.geometry.num_nodes(); ++j) {
    new_index[j] = positions.size();
    positions.push_back(sc.geometry.positions()[j]);
  }

  Scenario out;
  out.geometry = ScenarioGeometry(na - 1, std::move(positions));
  for (const auto& link : sc.links) {
    RangeLink l = link;
    if (link.agent == agent || link.peer == agent) {
      const std::size_t other = link.agent == agent ? link.peer : link.agent;
      if (!sc.geometry.is_agent(other)) continue;  // would be anchor-anchor
      l.agent = new_index[other];
      l.peer = new_index[agent];
    } else {
      l.agent = new_index[link.agent];
      l.peer = new_index[link.peer];
    }
    out.links.push_back(l);
  }
  for (std::size_t k = 0; k < na; ++k) {
    if (k == agent) continue;
    out.velocity.push_back(sc.velocity[k]);
    out.position_prior.push_back(sc.position_prior[k]);
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------------------------
// Information blocks

/// S_kj^(n) = lambda R(phi_kj).
inline Spd2 spatial_block(const ScenarioGeometry& geom, std::size_t k, std::size_t j, std::size_t n,
                          const RangeModel& model) {
  const Angle phi = geom.direction(k, j, n);
  if (model.lambda < 0.0) throw std::invalid_argument("negative ranging intensity");
  return Spd2::unchecked(model.lambda * r_dir(phi).sym());
}

/**
 * K_k^(n) for the step (n-1 -> n): the intensity matrix [[lambda, xi], [xi, nu]] expressed in the
 * (along-track, cross-track) basis, i.e. lambda R(phi) + nu R(phi + pi/2) + 2 xi R(phi, phi + pi/2).
 */
inline Spd2 temporal_block(const ScenarioGeometry& geom, std::size_t k, std::size_t n, const VelocityModel& model) {
  if (n == 0) throw std::invalid_argument("temporal block needs a previous step");
  if (!model.valid()) throw NotPositiveDefinite("velocity intensities are not PSD");
  if (geom.step_length(k, n) <= 0.0) {
    if (!model.isotropic()) {
      throw UndefinedDirection("undefined direction: zero displacement with direction-dependent intensity");
    }
    return Spd2::unchecked(model.lambda * Sym2::identity());
  }
  const Angle phi = geom.heading(k, n);
  const Sym2 k_block = model.lambda * r_dir(phi).sym() + model.nu * r_dir(phi + kQuarterTurn).sym() +
                       (2.0 * model.xi) * r_cross(phi);
  return Spd2::unchecked(k_block);
}

/// Per-agent mobility contributions: (n, n) and (n, n+1) blocks of the random-walk information.
struct MobilityBlock {
  std::size_t n = 0;
  std::size_t m = 0;
  Sym2 value;
};

/**
 * Gaussian random walk x(n+1) = x(n) + w, w ~ N(0, step_cov). Each transition contributes
 * Sigma^-1 to both diagonal blocks and -Sigma^-1 to the off-diagonal block. The optional initial
 * prior lands on (0, 0). T = 1 without a prior yields nothing.
 */
inline std::vector<MobilityBlock> mobility_blocks(const MobilityModel& model, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("mobility blocks need at least one step");
  if (!is_pd(model.step_cov)) throw NotPositiveDefinite("singular mobility step covariance");
  const Sym2 info = inverse2(model.step_cov);
  std::vector<MobilityBlock> out;
  if (model.initial_prior) out.push_back({0, 0, *model.initial_prior});
  for (std::size_t n = 0; n + 1 < steps; ++n) {
    out.push_back({n, n, info});
    out.push_back({n + 1, n + 1, info});
    out.push_back({n, n + 1, -1.0 * info});
  }
  return out;
}

}  // namespace navlim

#endif  // NAVLIM_MODELS_HPP
