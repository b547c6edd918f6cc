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
#ifndef NAVLIM_VERIFY_HPP
#define NAVLIM_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "navlim/blockfim.hpp"
#include "navlim/geom2d.hpp"
#include "navlim/models.hpp"
#include "navlim/navinfo.hpp"
#include "navlim/simkit.hpp"

namespace navlim::verify {

// ---------------------------------------------------------------------------------------------
// Random inputs

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::size_t uniform_count(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

/// Random SPD 2x2 with eigenvalues in [lo, hi].
inline Sym2 random_spd(std::mt19937_64& g, double lo = 0.2, double hi = 10.0) {
  const double th = uniform(g, 0.0, std::numbers::pi);
  return uniform(g, lo, hi) * r_dir(Angle(th)).sym() + uniform(g, lo, hi) * r_dir(Angle(th + kQuarterTurn)).sym();
}

inline VelocityModel random_velocity(std::mt19937_64& g) {
  const double l = uniform(g, 0.5, 5.0);
  const double n = uniform(g, 0.5, 5.0);
  return {l, n, uniform(g, -0.9, 0.9) * std::sqrt(l * n)};
}

struct NetworkShape {
  std::size_t min_agents = 1, max_agents = 3;
  std::size_t min_anchors = 0, max_anchors = 3;
  std::size_t min_steps = 1, max_steps = 4;
};

/**
 * Random network with per-link and per-step intensities. Agents start uniform in a 10 m square and
 * move by unit Gaussian steps. Networks without anchors get a weak position prior on every agent
 * when `prior_if_unanchored` is set.
 */
inline Scenario random_network(std::mt19937_64& g, const NetworkShape& shape = {}, bool prior_if_unanchored = false) {
  const std::size_t na = uniform_count(g, shape.min_agents, shape.max_agents);
  const std::size_t nb = uniform_count(g, shape.min_anchors, shape.max_anchors);
  const std::size_t t = uniform_count(g, shape.min_steps, shape.max_steps);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<Vec2>> pos;
  for (std::size_t k = 0; k < na; ++k) {
    std::vector<Vec2> tr{{uniform(g, 0, 10), uniform(g, 0, 10)}};
    for (std::size_t n = 1; n < t; ++n) tr.push_back(tr.back() + Vec2{normal(g), normal(g)});
    pos.push_back(std::move(tr));
  }
  for (std::size_t j = 0; j < nb; ++j) pos.emplace_back(t, Vec2{uniform(g, 0, 10), uniform(g, 0, 10)});
  Scenario sc;
  sc.geometry = ScenarioGeometry(na, std::move(pos));
  for (std::size_t n = 0; n < t; ++n) {
    for (std::size_t k = 0; k < na; ++k) {
      for (std::size_t j = k + 1; j < na + nb; ++j) sc.links.push_back({n, k, j, {uniform(g, 0.5, 5.0)}});
    }
  }
  sc.velocity.assign(na, std::vector<VelocityModel>(t));
  for (auto& v : sc.velocity) {
    for (auto& m : v) m = random_velocity(g);
  }
  sc.position_prior.assign(na, std::nullopt);
  if (nb == 0 && prior_if_unanchored) {
    for (auto& p : sc.position_prior) p = random_spd(g, 0.1, 1.0);
  }
  sc.validate();
  return sc;
}

/// Random nuisance chain with PD local information (so every running block is invertible).
inline ChainBlocks random_chain(std::mt19937_64& g, std::size_t steps, Eigen::Index state_dim, Eigen::Index max_param_dim) {
  std::uniform_int_distribution<Eigen::Index> dim(1, max_param_dim);
  std::vector<Eigen::Index> dg(steps);
  for (auto& d : dg) d = dim(g);
  // Joint information as a sum of PSD factors over (x(n), g(n)) and (g(n), x(n+1), g(n+1)) windows.
  Eigen::Index total = 0;
  std::vector<Eigen::Index> xo(steps), go(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    xo[n] = total;
    total += state_dim;
    go[n] = total;
    total += dg[n];
  }
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(total, total);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto add_factor = [&](const std::vector<std::pair<Eigen::Index, Eigen::Index>>& slots) {
    Eigen::Index d = 0;
    for (const auto& s : slots) d += s.second;
    Eigen::MatrixXd a(d + 1, d);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(g);
    }
    const Eigen::MatrixXd f = a.transpose() * a / static_cast<double>(d + 1);
    Eigen::Index r = 0;
    for (const auto& s1 : slots) {
      Eigen::Index c = 0;
      for (const auto& s2 : slots) {
        full.block(s1.first, s2.first, s1.second, s2.second) += f.block(r, c, s1.second, s2.second);
        c += s2.second;
      }
      r += s1.second;
    }
  };
  for (std::size_t n = 0; n < steps; ++n) {
    add_factor({{xo[n], state_dim}, {go[n], dg[n]}});
    full.block(go[n], go[n], dg[n], dg[n]) += 0.5 * Eigen::MatrixXd::Identity(dg[n], dg[n]);
    if (n + 1 < steps) add_factor({{go[n], dg[n]}, {xo[n + 1], state_dim}, {go[n + 1], dg[n + 1]}});
  }
  ChainBlocks c;
  for (std::size_t n = 0; n < steps; ++n) {
    c.state_info.push_back(full.block(xo[n], xo[n], state_dim, state_dim));
    c.diag_info.push_back(full.block(go[n], go[n], dg[n], dg[n]));
    c.cross_same.push_back(full.block(xo[n], go[n], state_dim, dg[n]));
    if (n + 1 < steps) {
      c.offdiag_info.push_back(full.block(go[n], go[n + 1], dg[n], dg[n + 1]));
      c.cross_next.push_back(full.block(xo[n], go[n + 1], state_dim, dg[n + 1]));
    }
  }
  return c;
}

/// Full (states, chain) information matrix of a chain, states first.
inline Eigen::MatrixXd chain_dense(const ChainBlocks& c, std::vector<Eigen::Index>& state_offsets) {
  const std::size_t t = c.steps();
  Eigen::Index ns = 0, ng = 0;
  std::vector<Eigen::Index> go(t);
  state_offsets.assign(t, 0);
  for (std::size_t n = 0; n < t; ++n) {
    state_offsets[n] = ns;
    ns += c.state_info[n].rows();
  }
  for (std::size_t n = 0; n < t; ++n) {
    go[n] = ns + ng;
    ng += c.diag_info[n].rows();
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ns + ng, ns + ng);
  const auto put = [&m](Eigen::Index r, Eigen::Index col, const Eigen::MatrixXd& b) {
    m.block(r, col, b.rows(), b.cols()) += b;
    if (r != col) m.block(col, r, b.cols(), b.rows()) += b.transpose();
  };
  for (std::size_t n = 0; n < t; ++n) {
    put(state_offsets[n], state_offsets[n], c.state_info[n]);
    put(go[n], go[n], c.diag_info[n]);
    put(state_offsets[n], go[n], c.cross_same[n]);
    if (n + 1 < t) {
      put(go[n], go[n + 1], c.offdiag_info[n]);
      put(state_offsets[n], go[n + 1], c.cross_next[n]);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------------------------
// Identities: each returns an error measure compared against its tolerance.

inline double min_eig_rel(const Eigen::MatrixXd& m, double scale) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(linalg::symmetrize(m));
  return es.eigenvalues().minCoeff() / std::max(1.0, scale);
}

inline double recursion_vs_schur(std::mt19937_64& g) {
  const Scenario sc = random_network(g, {}, true);
  const JointEfim full = assemble_eq19(sc);
  const CarryOverTrace trace = centralized_recursion(sc);
  double worst = 0.0;
  for (std::size_t first = 0; first < sc.steps(); ++first) {
    std::set<std::pair<std::size_t, std::size_t>> keep;
    for (std::size_t n = first; n < sc.steps(); ++n) {
      for (std::size_t k = 0; k < sc.num_agents(); ++k) keep.insert({k, n});
    }
    worst = std::max(worst, linalg::rel_diff(assemble_suffix(sc, first, trace.carry[first]).dense(),
                                             marginal_efim(full, keep).dense()));
  }
  return worst;
}

inline double prop3_weighted_sum(std::mt19937_64& g) {
  const Sym2 k = random_spd(g);
  const Sym2 s = random_spd(g);
  const Sym2 direct = carry_over_step(k, s, Sym2::zero());
  return (decompose_prop3(k, s).carry - direct).frobenius() / direct.frobenius();
}

inline Decomposition4 random_prop4(std::mt19937_64& g, Sym2& k, Sym2& s) {
  const double lambda = uniform(g, 0.2, 10.0);
  const double nu = uniform(g, 0.2, 10.0);
  const Angle psi(uniform(g, -std::numbers::pi, std::numbers::pi));
  s = random_spd(g);
  k = lambda * r_dir(psi).sym() + nu * r_dir(psi + kQuarterTurn).sym();
  return decompose_prop4(lambda, nu, psi, s);
}

inline double prop4_three_terms(std::mt19937_64& g) {
  Sym2 k, s;
  const Decomposition4 d = random_prop4(g, k, s);
  const Sym2 direct = carry_over_step(k, s, Sym2::zero());
  return (d.carry - direct).frobenius() / direct.frobenius();
}

inline double prop4_closed_forms(std::mt19937_64& g) {
  Sym2 k, s;
  const Decomposition4 d = random_prop4(g, k, s);
  const Eigen2 es = eigen2(s);
  const Eigen2 ek = eigen2(k);
  const double kappa_scale = ek.lambda1 * ek.lambda2 * (es.lambda1 - es.lambda2) / (s + k).det();
  return std::max({std::abs(d.zeta1 - d.zeta1_closed) / std::abs(d.zeta1),
                   std::abs(d.zeta2 - d.zeta2_closed) / std::abs(d.zeta2),
                   std::abs(d.kappa - d.kappa_closed) / std::max(std::abs(kappa_scale), 1e-300)});
}

/// Largest |kappa| over the three vanishing cases: isotropic S, psi - beta in {0, pi/2}, lambda nu = 0.
inline double prop4_coupling_vanishes(std::mt19937_64& g) {
  const double lambda = uniform(g, 0.2, 10.0);
  const double nu = uniform(g, 0.2, 10.0);
  const Angle psi(uniform(g, -std::numbers::pi, std::numbers::pi));
  const double mu = uniform(g, 0.2, 10.0);
  const double eta_s = uniform(g, 0.2, 10.0);
  const auto s_at = [&](Angle beta, double a, double b) {
    return a * r_dir(beta).sym() + b * r_dir(beta + kQuarterTurn).sym();
  };
  double worst = 0.0;
  const auto take = [&worst](const Decomposition4& d) {
    worst = std::max({worst, std::abs(d.kappa), std::abs(d.kappa_closed)});
  };
  take(decompose_prop4(lambda, nu, psi, mu * Sym2::identity()));
  take(decompose_prop4(lambda, nu, psi, s_at(psi, mu, eta_s)));
  take(decompose_prop4(lambda, nu, psi, s_at(psi + kQuarterTurn, mu, eta_s)));
  const Sym2 s = s_at(Angle(uniform(g, 0.0, std::numbers::pi)), mu, eta_s);
  take(decompose_prop4(lambda, 0.0, psi, s));
  take(decompose_prop4(0.0, nu, psi, s));
  return worst;
}

/// Violation of 0 <= K_tilde <= K, relative to the scale of K, on a random network's recursion.
inline double carry_over_order(std::mt19937_64& g) {
  const Scenario sc = random_network(g, {1, 3, 0, 3, 2, 5}, true);
  const CarryOverTrace trace = centralized_recursion(sc);
  double worst = 0.0;
  for (std::size_t n = 1; n < sc.steps(); ++n) {
    const Eigen::MatrixXd k = block_diagonal(temporal_blocks(sc, n));
    const double scale = k.norm();
    worst = std::max({worst, -min_eig_rel(k - trace.carry[n], scale), -min_eig_rel(trace.carry[n], scale)});
  }
  return std::max(0.0, worst);
}

/// Relative SPEB change of the other agents when one agent's huge prior is replaced by anchor status.
inline double anchor_equivalence(std::mt19937_64& g) {
  Scenario sc = random_network(g, {2, 3, 0, 3, 1, 4}, true);
  const std::size_t promoted = uniform_count(g, 0, sc.num_agents() - 1);
  sc.position_prior[promoted] = 1e12 * Sym2::identity();
  const Scenario as_anchor = with_agent_as_anchor(sc, promoted);
  const auto with_prior = speb_all(assemble_eq19(sc));
  const auto declared = speb_all(assemble_eq19(as_anchor));
  double worst = 0.0;
  for (std::size_t k = 0, kk = 0; k < sc.num_agents(); ++k) {
    if (k == promoted) continue;
    for (std::size_t n = 0; n < sc.steps(); ++n) {
      const double a = with_prior.at({k, n}).m2;
      const double b = declared.at({kk, n}).m2;
      if (std::isinf(a) && std::isinf(b)) continue;
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    ++kk;
  }
  return worst;
}

/// 1 if any cross-time block with |n - m| > 1 holds a nonzero entry, else 0.
inline double banding(std::mt19937_64& g) {
  const Scenario sc = random_network(g, {1, 3, 0, 3, 3, 6});
  const JointEfim j = assemble_eq19(sc);
  for (const auto& a : j.layout().entries()) {
    for (const auto& b : j.layout().entries()) {
      const std::size_t gap = a.id.time > b.id.time ? a.id.time - b.id.time : b.id.time - a.id.time;
      if (gap > 1 && (j.dense().block(a.offset, b.offset, 2, 2).array() != 0.0).any()) return 1.0;
    }
  }
  return 0.0;
}

inline double chain_elimination(std::mt19937_64& g) {
  const std::size_t t = uniform_count(g, 1, 6);
  const auto ds = static_cast<Eigen::Index>(uniform_count(g, 1, 3));
  const ChainBlocks c = random_chain(g, t, ds, 3);
  std::vector<Eigen::Index> offs;
  const Eigen::MatrixXd m = chain_dense(c, offs);
  const Eigen::Index ns = ds * static_cast<Eigen::Index>(t);
  const Eigen::MatrixXd a = m.topLeftCorner(ns, ns);
  const Eigen::MatrixXd b = m.topRightCorner(ns, m.cols() - ns);
  const Eigen::MatrixXd cc = m.bottomRightCorner(m.rows() - ns, m.cols() - ns);
  const Eigen::MatrixXd dense = a - b * cc.ldlt().solve(b.transpose());
  Eigen::MatrixXd got = Eigen::MatrixXd::Zero(ns, ns);
  for (const auto& [key, v] : eliminate_hmm_chain(c)) {
    got.block(offs[key.first], offs[key.second], ds, ds) = v;
    if (key.first != key.second) got.block(offs[key.second], offs[key.first], ds, ds) = v.transpose();
  }
  return linalg::rel_diff(got, dense);
}

struct Identity {
  std::string name;
  double tolerance;
  std::function<double(std::mt19937_64&)> error;
};

inline const std::vector<Identity>& identities() {
  static const std::vector<Identity> kAll{
      {"recursion_vs_schur", 1e-9, recursion_vs_schur},
      {"prop3_weighted_sum", 1e-10, prop3_weighted_sum},
      {"prop4_three_terms", 1e-10, prop4_three_terms},
      {"prop4_closed_forms", 1e-10, prop4_closed_forms},
      {"prop4_coupling_vanishes", 1e-12, prop4_coupling_vanishes},
      {"carry_over_order", 1e-10, carry_over_order},
      {"anchor_equivalence", 1e-4, anchor_equivalence},
      {"banding", 0.0, banding},
      {"chain_elimination", 1e-9, chain_elimination},
  };
  return kAll;
}

struct IdentityResult {
  std::string name;
  bool passed = true;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  std::optional<std::size_t> failing_case;
  std::string failure;
};

/// Case i draws from rng::trial_seed(seed + identity index, i), so one seed reproduces the whole run.
inline IdentityResult run_identity(const Identity& id, std::size_t index, std::uint64_t seed, std::size_t cases,
                                   std::optional<double> tolerance_override = std::nullopt) {
  IdentityResult r{id.name, true, 0.0, tolerance_override.value_or(id.tolerance), cases, std::nullopt, {}};
  for (std::size_t i = 0; i < cases; ++i) {
    std::mt19937_64 g(rng::trial_seed(seed + index, i));
    double e = 0.0;
    try {
      e = id.error(g);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.failing_case = i;
      r.failure = ex.what();
      break;
    }
    r.max_error = std::max(r.max_error, e);
    if (!(e <= r.tolerance)) {
      r.passed = false;
      if (!r.failing_case) r.failing_case = i;
    }
  }
  return r;
}

}  // namespace navlim::verify

#endif  // NAVLIM_VERIFY_HPP
