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
#ifndef NAVLIM_NAVINFO_HPP
#define NAVLIM_NAVINFO_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "navlim/blockfim.hpp"
#include "navlim/geom2d.hpp"
#include "navlim/models.hpp"

namespace navlim {

/// Which information sources enter the EFIM.
struct Cooperation {
  bool temporal = true;
  bool agent_ranging = true;
  bool anchor_ranging = true;
};

/// Position layout over (agent, time) pairs for steps [first_step, last_step), time-major.
inline BlockLayout position_layout(std::size_t num_agents, std::size_t first_step, std::size_t last_step) {
  BlockLayout layout;
  for (std::size_t n = first_step; n < last_step; ++n) {
    for (std::size_t k = 0; k < num_agents; ++k) layout.add(ParamId::state(k, n), 2);
  }
  return layout;
}

/// EFIM over agent positions; 2x2 blocks per (agent, time).
class JointEfim {
 public:
  JointEfim() = default;
  explicit JointEfim(BlockSymMatrix m) : m_(std::move(m)) {
    for (const auto& e : m_.layout().entries()) {
      if (e.id.kind != ParamKind::PositionalState || e.dim != 2) {
        throw std::invalid_argument("joint EFIM holds 2-D positional states only");
      }
    }
  }

  [[nodiscard]] const BlockSymMatrix& matrix() const { return m_; }
  [[nodiscard]] const Eigen::MatrixXd& dense() const { return m_.dense(); }
  [[nodiscard]] const BlockLayout& layout() const { return m_.layout(); }
  [[nodiscard]] bool contains(std::size_t agent, std::size_t time) const {
    return layout().contains(ParamId::state(agent, time));
  }
  [[nodiscard]] Eigen::Matrix2d block(std::size_t k, std::size_t n, std::size_t j, std::size_t m) const {
    return m_.block(ParamId::state(k, n), ParamId::state(j, m));
  }

  friend JointEfim operator+(const JointEfim& a, const JointEfim& b) { return JointEfim(a.m_ + b.m_); }

 private:
  BlockSymMatrix m_;
};

/// S^(n): ranging information at step n with the pairwise row structure (+S on both own blocks, -S across), plus position priors.
inline Eigen::MatrixXd spatial_matrix(const Scenario& sc, std::size_t n, const Cooperation& coop = {}) {
  const std::size_t na = sc.num_agents();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * static_cast<Eigen::Index>(na), 2 * static_cast<Eigen::Index>(na));
  for (const auto& link : sc.links) {
    if (link.step != n) continue;
    const bool peer_agent = sc.geometry.is_agent(link.peer);
    if (peer_agent ? !coop.agent_ranging : !coop.anchor_ranging) continue;
    const Eigen::Matrix2d b = spatial_block(sc.geometry, link.agent, link.peer, n, link.model).sym().eigen();
    const auto a = 2 * static_cast<Eigen::Index>(link.agent);
    s.block<2, 2>(a, a) += b;
    if (peer_agent) {
      const auto p = 2 * static_cast<Eigen::Index>(link.peer);
      s.block<2, 2>(p, p) += b;
      s.block<2, 2>(a, p) -= b;
      s.block<2, 2>(p, a) -= b;
    }
  }
  for (std::size_t k = 0; k < na; ++k) {
    if (sc.position_prior[k]) {
      const auto a = 2 * static_cast<Eigen::Index>(k);
      s.block<2, 2>(a, a) += sc.position_prior[k]->eigen();
    }
  }
  return s;
}

/// K_k^(n) per agent for the transition (n-1 -> n); zero at n = 0 or when temporal is off.
inline std::vector<Sym2> temporal_blocks(const Scenario& sc, std::size_t n, const Cooperation& coop = {}) {
  std::vector<Sym2> out(sc.num_agents());
  if (n == 0 || !coop.temporal) return out;
  for (std::size_t k = 0; k < sc.num_agents(); ++k) out[k] = temporal_block(sc.geometry, k, n, sc.velocity[k][n]);
  return out;
}

inline Eigen::MatrixXd block_diagonal(const std::vector<Sym2>& blocks) {
  const auto n = static_cast<Eigen::Index>(blocks.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) out.block<2, 2>(2 * k, 2 * k) = blocks[static_cast<std::size_t>(k)].eigen();
  return out;
}

inline Sym2 agent_block(const Eigen::MatrixXd& m, std::size_t k) {
  const auto a = 2 * static_cast<Eigen::Index>(k);
  return Sym2::from_eigen(m.block<2, 2>(a, a));
}

/// The three EFIM addends (mobility, temporal, spatial) and their sum.
struct EfimAddends {
  JointEfim mobility;
  JointEfim temporal;
  JointEfim spatial;
  JointEfim total;
};

namespace detail {

/// Scatters a 2Na x 2Na matrix as the (step n, step m) block, n <= m.
inline void add_step_block(BlockSymMatrix& out, std::size_t n, std::size_t m, const Eigen::MatrixXd& value) {
  const std::size_t na = static_cast<std::size_t>(value.rows()) / 2;
  for (std::size_t k = 0; k < na; ++k) {
    for (std::size_t j = (n == m ? k : 0); j < na; ++j) {
      const Eigen::Matrix2d b =
          value.block<2, 2>(2 * static_cast<Eigen::Index>(k), 2 * static_cast<Eigen::Index>(j));
      if (b.isZero(0.0)) continue;
      out.add_block(ParamId::state(k, n), ParamId::state(j, m), b);
    }
  }
}

inline EfimAddends make_addends(JointEfim mobility, JointEfim temporal, JointEfim spatial) {
  JointEfim total = mobility + temporal + spatial;
  return {std::move(mobility), std::move(temporal), std::move(spatial), std::move(total)};
}

}  // namespace detail

/**
 * @brief EFIM over steps first..T-1 with carry-over information `carry` at step `first`.
 *
 * Diagonal block at n: S^(n) + K^(n) + K^(n+1), where K^(first) is replaced by carry and K^(T)
 * is absent; off-diagonal (n, n+1): -K^(n+1). `carry` is 2Na x 2Na; zero gives the plain horizon EFIM.
 * The carry enters the temporal addend.
 */
inline EfimAddends assemble_suffix_addends(const Scenario& sc, std::size_t first, const Eigen::MatrixXd& carry,
                                           const Cooperation& coop = {}) {
  sc.validate();
  const std::size_t na = sc.num_agents();
  const std::size_t t = sc.steps();
  if (first >= t) throw std::invalid_argument("suffix start beyond horizon");
  if (carry.rows() != 2 * static_cast<Eigen::Index>(na) || carry.cols() != carry.rows()) {
    throw std::invalid_argument("carry-over matrix must be 2Na x 2Na");
  }
  const BlockLayout layout = position_layout(na, first, t);
  BlockSymMatrix temporal(layout);
  BlockSymMatrix spatial(layout);
  detail::add_step_block(temporal, first, first, carry);
  for (std::size_t n = first; n < t; ++n) {
    detail::add_step_block(spatial, n, n, spatial_matrix(sc, n, coop));
    if (n + 1 < t) {
      const Eigen::MatrixXd k_next = block_diagonal(temporal_blocks(sc, n + 1, coop));
      detail::add_step_block(temporal, n, n, k_next);
      detail::add_step_block(temporal, n + 1, n + 1, k_next);
      detail::add_step_block(temporal, n, n + 1, -k_next);
    }
  }
  return detail::make_addends(JointEfim(BlockSymMatrix(layout)), JointEfim(std::move(temporal)),
                              JointEfim(std::move(spatial)));
}

inline JointEfim assemble_suffix(const Scenario& sc, std::size_t first, const Eigen::MatrixXd& carry,
                                 const Cooperation& coop = {}) {
  return assemble_suffix_addends(sc, first, carry, coop).total;
}

inline EfimAddends assemble_eq19_addends(const Scenario& sc, const Cooperation& coop = {}) {
  const auto na = 2 * static_cast<Eigen::Index>(sc.num_agents());
  return assemble_suffix_addends(sc, 0, Eigen::MatrixXd::Zero(na, na), coop);
}

/// Block-tridiagonal EFIM of the deterministic 2-D network with ranging and velocity.
inline JointEfim assemble_eq19(const Scenario& sc, const Cooperation& coop = {}) {
  return assemble_eq19_addends(sc, coop).total;
}

// ---------------------------------------------------------------------------------------------
// Nuisance-parameter variants

/// Independent Gaussian nuisances: one bias per range link, one amplitude bias per velocity step.
struct IndependentNuisance {
  GaussianRange range;
  GaussianVelocity velocity;
  std::optional<MobilityModel> mobility;
};

/// J_e^m: the random-walk prior for every agent, diagonally striped.
inline JointEfim mobility_efim(const MobilityModel& model, std::size_t num_agents, std::size_t steps) {
  BlockSymMatrix m(position_layout(num_agents, 0, steps));
  for (const auto& b : mobility_blocks(model, steps)) {
    for (std::size_t k = 0; k < num_agents; ++k) {
      m.add_block(ParamId::state(k, b.n), ParamId::state(k, b.m), b.value.eigen());
    }
  }
  return JointEfim(std::move(m));
}

/**
 * @brief Independent-parameter EFIM: each block is Psi over the prior-augmented Gaussian likelihood
 * of its own measurement.
 *
 * Ranging intensities of `sc` are replaced by nuisance.range.intensity(), velocity intensities by
 * nuisance.velocity.intensity(d_kk). The spatial addend is block-diagonal in time; the temporal
 * addend couples consecutive steps only through the displacement itself.
 */
inline EfimAddends corollary1_efim(const Scenario& sc, const IndependentNuisance& nuisance) {
  Scenario derived = sc;
  const RangeModel range = nuisance.range.intensity();
  for (auto& link : derived.links) link.model = range;
  for (std::size_t k = 0; k < sc.num_agents(); ++k) {
    for (std::size_t n = 1; n < sc.steps(); ++n) {
      derived.velocity[k][n] = nuisance.velocity.intensity(sc.geometry.step_length(k, n));
    }
  }
  EfimAddends parts = assemble_eq19_addends(derived);
  JointEfim mobility = nuisance.mobility ? mobility_efim(*nuisance.mobility, sc.num_agents(), sc.steps())
                                         : JointEfim(BlockSymMatrix(parts.total.layout()));
  return detail::make_addends(std::move(mobility), std::move(parts.temporal), std::move(parts.spatial));
}

/// Intra-node parameter chain of one agent (state dim 2).
struct AgentChain {
  std::size_t agent = 0;
  ChainBlocks chain;
};

/// Inter-node parameter chain kappa_{agent,peer}; chain states are the relative positions x_agent - x_peer.
struct PairChain {
  std::size_t agent = 0;
  std::size_t peer = 0;
  bool peer_is_anchor = false;
  ChainBlocks chain;
};

/// Bayesian network of positions with HMM nuisance chains.
struct BayesianNetwork {
  std::size_t num_agents = 0;
  std::size_t steps = 0;
  std::optional<MobilityModel> mobility;
  std::vector<AgentChain> intra;
  std::vector<PairChain> inter;
};

/**
 * @brief J_e = J_e^m + J_e^t + J_e^s with the nuisance chains eliminated in time order.
 *
 * Intra chains add K_k^(n,m) at (k,n),(k,m). Inter chains add the pairwise ranging pattern at every
 * (n, m): +G to both agents' own blocks and -G across, where G^(n,m) is the chain's contribution on
 * the relative coordinate. Anchor peers only receive the agent's own block.
 */
inline EfimAddends bayesian_efim(const BayesianNetwork& net) {
  const BlockLayout layout = position_layout(net.num_agents, 0, net.steps);
  JointEfim mobility = net.mobility ? mobility_efim(*net.mobility, net.num_agents, net.steps)
                                    : JointEfim(BlockSymMatrix(layout));
  const auto check_chain = [&](const ChainBlocks& c) {
    if (c.steps() != net.steps) throw std::invalid_argument("chain length differs from the horizon");
    for (const auto& s : c.state_info) {
      if (s.rows() != 2) throw std::invalid_argument("chain states must be 2-D positions");
    }
  };

  BlockSymMatrix temporal(layout);
  for (const auto& ic : net.intra) {
    if (ic.agent >= net.num_agents) throw std::out_of_range("intra chain names an unknown agent");
    check_chain(ic.chain);
    for (const auto& [key, value] : eliminate_hmm_chain(ic.chain)) {
      temporal.add_block(ParamId::state(ic.agent, key.first), ParamId::state(ic.agent, key.second), value);
    }
  }

  BlockSymMatrix spatial(layout);
  for (const auto& pc : net.inter) {
    if (pc.agent >= net.num_agents || (!pc.peer_is_anchor && pc.peer >= net.num_agents) ||
        (!pc.peer_is_anchor && pc.peer == pc.agent)) {
      throw std::out_of_range("inter chain names an invalid pair");
    }
    check_chain(pc.chain);
    for (const auto& [key, g] : eliminate_hmm_chain(pc.chain)) {
      const auto [n, m] = key;
      spatial.add_block(ParamId::state(pc.agent, n), ParamId::state(pc.agent, m), g);
      if (pc.peer_is_anchor) continue;
      spatial.add_block(ParamId::state(pc.peer, n), ParamId::state(pc.peer, m), g);
      spatial.add_block(ParamId::state(pc.agent, n), ParamId::state(pc.peer, m), -g);
      if (n != m) spatial.add_block(ParamId::state(pc.peer, n), ParamId::state(pc.agent, m), -g);
    }
  }
  return detail::make_addends(std::move(mobility), JointEfim(std::move(temporal)), JointEfim(std::move(spatial)));
}

/**
 * Range-bias chains for every measured (agent, peer) pair of a scenario. The bias follows a
 * stationary AR(1) process with correlation `correlation` in (-1, 1) and variance range.sigma_bias^2;
 * correlation 0 gives independent biases per step. Steps without a measurement keep the bias
 * dynamics but carry no measurement information.
 */
inline std::vector<PairChain> range_bias_chains(const Scenario& sc, const GaussianRange& range, double correlation) {
  if (!(std::abs(correlation) < 1.0)) throw std::invalid_argument("bias correlation must lie in (-1, 1)");
  if (!(range.sigma_bias > 0.0) || std::isinf(range.sigma_bias)) {
    throw std::invalid_argument("bias chains need a finite positive bias std");
  }
  const std::size_t t = sc.steps();
  const double w = 1.0 / (range.sigma_r * range.sigma_r);
  const double var = range.sigma_bias * range.sigma_bias;
  const double q = var * (1.0 - correlation * correlation);

  std::map<std::pair<std::size_t, std::size_t>, std::vector<const RangeLink*>> by_pair;
  for (const auto& link : sc.links) {
    auto& slot = by_pair[{link.agent, link.peer}];
    slot.resize(t, nullptr);
    if (slot[link.step]) throw std::invalid_argument("duplicate link for a bias chain");
    slot[link.step] = &link;
  }

  std::vector<PairChain> out;
  for (const auto& [pair, per_step] : by_pair) {
    PairChain pc{pair.first, pair.second, !sc.geometry.is_agent(pair.second), {}};
    ChainBlocks& c = pc.chain;
    for (std::size_t n = 0; n < t; ++n) {
      Eigen::MatrixXd state = Eigen::MatrixXd::Zero(2, 2);
      Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(2, 1);
      double info = (n == 0 ? 1.0 / var : 1.0 / q) + (n + 1 < t ? correlation * correlation / q : 0.0);
      if (per_step[n]) {
        // z = ||x_agent - x_peer|| + b + noise; d/dx of the range is -u_phi
        const Vec2 u = unit_vector(sc.geometry.direction(pair.first, pair.second, n));
        state = w * r_dir(sc.geometry.direction(pair.first, pair.second, n)).sym().eigen();
        cross(0, 0) = -u.x * w;
        cross(1, 0) = -u.y * w;
        info += w;
      }
      c.state_info.push_back(state);
      c.cross_same.push_back(cross);
      c.diag_info.push_back(Eigen::MatrixXd::Constant(1, 1, info));
      if (n + 1 < t) {
        c.offdiag_info.push_back(Eigen::MatrixXd::Constant(1, 1, -correlation / q));
        c.cross_next.push_back(Eigen::MatrixXd::Zero(2, 1));
      }
    }
    out.push_back(std::move(pc));
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Marginalization and SPEB

/// EFIM over the kept (agent, time) positions.
inline JointEfim marginal_efim(const JointEfim& j, const std::set<std::pair<std::size_t, std::size_t>>& keep) {
  std::set<ParamId> ids;
  for (const auto& [agent, time] : keep) ids.insert(ParamId::state(agent, time));
  return JointEfim(schur_complement(j.matrix(), ids));
}

struct Speb {
  double m2 = 0.0;            ///< trace of the position block of J^-1; +inf when unobservable
  std::size_t null_dim = 0;   ///< dimension of J's null space (0 when J is PD)

  [[nodiscard]] bool finite() const { return std::isfinite(m2); }
};

/**
 * @brief SPEB of every (agent, time) in the layout.
 *
 * J is Jacobi-scaled (unit diagonal) first so a huge prior on one node cannot hide small but
 * genuine eigenvalues elsewhere. An LDLT with every pivot above 1e-13 counts as definite;
 * otherwise the scaled matrix is eigendecomposed, eigenvalues below tol::kPinvCutoff * lambda_max
 * span the null space, and a coordinate pair touched by it gets +inf.
 */
inline std::map<std::pair<std::size_t, std::size_t>, Speb> speb_all(const JointEfim& j) {
  const Eigen::MatrixXd m = linalg::symmetrize(j.dense());
  std::map<std::pair<std::size_t, std::size_t>, Speb> out;
  const Eigen::Index dim = m.rows();
  if (dim == 0) return out;

  // coordinates with no information at all are unobservable outright
  std::vector<Eigen::Index> live;
  std::vector<bool> dead(static_cast<std::size_t>(dim), false);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (m(i, i) > 0.0) {
      live.push_back(i);
    } else {
      dead[static_cast<std::size_t>(i)] = true;
    }
  }
  const auto nl = static_cast<Eigen::Index>(live.size());
  const Eigen::VectorXd scale = m.diagonal()(live).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = scale.asDiagonal() * m(live, live) * scale.asDiagonal();

  Eigen::MatrixXd cov_scaled;
  Eigen::MatrixXd null_basis(nl, 0);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
  if (nl > 0 && ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 1e-13) {
    cov_scaled = ldlt.solve(Eigen::MatrixXd::Identity(nl, nl));
  } else if (nl > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
    const auto& ev = es.eigenvalues();
    const double cutoff = tol::kPinvCutoff * std::max(0.0, ev.maxCoeff());
    std::vector<Eigen::Index> null_cols;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(nl);
    for (Eigen::Index i = 0; i < nl; ++i) {
      if (ev(i) > cutoff && ev(i) > 0.0) {
        inv(i) = 1.0 / ev(i);
      } else {
        null_cols.push_back(i);
      }
    }
    const Eigen::MatrixXd& v = es.eigenvectors();
    cov_scaled = v * inv.asDiagonal() * v.transpose();
    null_basis = v(Eigen::all, null_cols);
  }
  const std::size_t null_dim = static_cast<std::size_t>(dim - nl + null_basis.cols());

  // position of each original coordinate among the live ones
  std::vector<Eigen::Index> live_pos(static_cast<std::size_t>(dim), -1);
  for (Eigen::Index i = 0; i < nl; ++i) live_pos[static_cast<std::size_t>(live[static_cast<std::size_t>(i)])] = i;

  for (const auto& e : j.layout().entries()) {
    double value = 0.0;
    bool unobservable = false;
    for (Eigen::Index r = e.offset; r < e.offset + e.dim; ++r) {
      const auto ri = static_cast<std::size_t>(r);
      if (dead[ri]) {
        unobservable = true;
        break;
      }
      const Eigen::Index li = live_pos[ri];
      if (null_basis.cols() > 0 && null_basis.row(li).norm() > 1e-6) unobservable = true;
      value += cov_scaled(li, li) * scale(li) * scale(li);
    }
    out[{e.id.agent, e.id.time}] = {unobservable ? std::numeric_limits<double>::infinity() : value, null_dim};
  }
  return out;
}

inline Speb speb(const JointEfim& j, std::size_t agent, std::size_t time) {
  if (!j.contains(agent, time)) throw std::out_of_range("speb: (agent, time) not in the EFIM");
  return speb_all(j).at({agent, time});
}

// ---------------------------------------------------------------------------------------------
// Carry-over information

/// K_tilde^(n) = K - K (S_prev + K_tilde_prev + K)^-1 K. Works on 2x2 or 2Na x 2Na blocks.
inline Eigen::MatrixXd carry_over_step(const Eigen::MatrixXd& k_n, const Eigen::MatrixXd& s_prev,
                                       const Eigen::MatrixXd& carry_prev) {
  if (k_n.rows() != s_prev.rows() || k_n.rows() != carry_prev.rows()) {
    throw std::invalid_argument("carry_over_step: dimension mismatch");
  }
  const Eigen::MatrixXd inv = linalg::info_inverse(s_prev + carry_prev + k_n);
  return linalg::symmetrize(k_n - k_n * inv * k_n);
}

inline Sym2 carry_over_step(const Sym2& k_n, const Sym2& s_prev, const Sym2& carry_prev) {
  return Sym2::from_eigen(carry_over_step(Eigen::MatrixXd(k_n.eigen()), Eigen::MatrixXd(s_prev.eigen()),
                                          Eigen::MatrixXd(carry_prev.eigen())));
}

/// Individual EFIM of every agent: the Schur complement of F onto that agent's two coordinates.
inline std::vector<Sym2> individual_efims(const Eigen::MatrixXd& f) {
  const std::size_t na = static_cast<std::size_t>(f.rows()) / 2;
  BlockLayout layout;
  for (std::size_t k = 0; k < na; ++k) layout.add(ParamId::state(k, 0), 2);
  const BlockSymMatrix m(layout, f);
  std::vector<Sym2> out;
  for (std::size_t k = 0; k < na; ++k) {
    out.push_back(Sym2::from_eigen(schur_complement(m, {ParamId::state(k, 0)}).dense()));
  }
  return out;
}

/// Per-agent carry-over at one step of the distributed recursion.
struct CarryOver {
  std::size_t step = 0;
  std::vector<Sym2> per_agent;
};

/**
 * Distributed carry-over: S_tilde_k = individual EFIM of S_prev + diag(K_tilde_prev), then
 * K_tilde_k = K_k - K_k (S_tilde_k + K_k)^-1 K_k.
 */
inline std::vector<Sym2> distributed_carry_over(const Eigen::MatrixXd& s_prev_full, const std::vector<Sym2>& carry_prev,
                                                const std::vector<Sym2>& k_n) {
  if (carry_prev.size() != k_n.size() || s_prev_full.rows() != 2 * static_cast<Eigen::Index>(k_n.size())) {
    throw std::invalid_argument("distributed_carry_over: dimension mismatch");
  }
  const std::vector<Sym2> individual = individual_efims(s_prev_full + block_diagonal(carry_prev));
  std::vector<Sym2> out;
  for (std::size_t k = 0; k < k_n.size(); ++k) out.push_back(carry_over_step(k_n[k], individual[k], Sym2::zero()));
  return out;
}

/// Centralized recursion: carry[n] = K_tilde^(n) (2Na x 2Na), filtered[n] = S^(n) + K_tilde^(n).
struct CarryOverTrace {
  std::vector<Eigen::MatrixXd> carry;
  std::vector<Eigen::MatrixXd> filtered;
};

inline CarryOverTrace centralized_recursion(const Scenario& sc, const Cooperation& coop = {}) {
  sc.validate();
  const auto dim = 2 * static_cast<Eigen::Index>(sc.num_agents());
  CarryOverTrace out;
  Eigen::MatrixXd carry = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t n = 0; n < sc.steps(); ++n) {
    if (n > 0) carry = carry_over_step(block_diagonal(temporal_blocks(sc, n, coop)), out.filtered.back() - out.carry.back(), out.carry.back());
    out.carry.push_back(carry);
    out.filtered.push_back(spatial_matrix(sc, n, coop) + carry);
  }
  return out;
}

/// Distributed recursion: per step, the agents' carry-over and individual EFIMs after spatial cooperation.
struct DistributedTrace {
  std::vector<CarryOver> carry;
  std::vector<std::vector<Sym2>> individual;
};

inline DistributedTrace distributed_recursion(const Scenario& sc, const Cooperation& coop = {}) {
  sc.validate();
  DistributedTrace out;
  std::vector<Sym2> carry(sc.num_agents());
  Eigen::MatrixXd s_prev;
  for (std::size_t n = 0; n < sc.steps(); ++n) {
    if (n > 0) carry = distributed_carry_over(s_prev, carry, temporal_blocks(sc, n, coop));
    s_prev = spatial_matrix(sc, n, coop);
    out.carry.push_back({n, carry});
    out.individual.push_back(individual_efims(s_prev + block_diagonal(carry)));
  }
  return out;
}

/// Filtering EFIM over the step-n positions (2Na x 2Na) wrapped as a JointEfim.
inline JointEfim step_efim(const Eigen::MatrixXd& f, std::size_t n) {
  const std::size_t na = static_cast<std::size_t>(f.rows()) / 2;
  return JointEfim(BlockSymMatrix(position_layout(na, n, n + 1), f));
}

// ---------------------------------------------------------------------------------------------
// Geometric decompositions of K_tilde = K - K (S + K)^-1 K

struct Decomposition3 {
  double w_s = 0.0;  ///< |K| / |S + K|
  double w_k = 0.0;  ///< |S| / |S + K|
  Sym2 carry;        ///< w_s S + w_k K
};

inline Decomposition3 decompose_prop3(const Sym2& k, const Sym2& s) {
  const double d = (s + k).det();
  const Sym2 sum = s + k;
  if (!(std::abs(d) > 1e-15 * std::max(1.0, sum.frobenius() * sum.frobenius()))) {
    throw SingularBlock("decompose_prop3: |S + K| = 0");
  }
  Decomposition3 out{k.det() / d, s.det() / d, {}};
  out.carry = out.w_s * s + out.w_k * k;
  return out;
}

/**
 * @brief Three-term decomposition K_tilde = zeta1 C + zeta2 D + kappa R(psi, psi + pi/2).
 *
 * K = C + D with C = lambda R(psi), D = nu R(psi + pi/2). Both the quadratic-form expressions and
 * the 2-D determinant closed forms are returned. S's eigenvalues are mu (direction beta) and eta_s.
 */
struct Decomposition4 {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double kappa = 0.0;
  double zeta1_closed = 0.0;  ///< |S + D| / |S + C + D|
  double zeta2_closed = 0.0;  ///< |S + C| / |S + C + D|
  double kappa_closed = 0.0;  ///< lambda nu (eta_s - mu) sin(2 (psi - beta)) / |S + C + D|
  Sym2 c;
  Sym2 d;
  Sym2 carry;  ///< zeta1 C + zeta2 D + kappa R(psi, psi + pi/2)
};

inline Decomposition4 decompose_prop4(double lambda, double nu, Angle psi, const Sym2& s) {
  Decomposition4 out;
  out.c = lambda * r_dir(psi).sym();
  out.d = nu * r_dir(psi + kQuarterTurn).sym();
  const Vec2 u = unit_vector(psi);
  const Vec2 w = unit_vector(psi + kQuarterTurn);
  const Sym2 sd = s + out.d;
  const Sym2 sc = s + out.c;
  const Sym2 all = s + out.c + out.d;
  out.zeta1 = 1.0 / (1.0 + lambda * inverse2(sd).quad(u));
  out.zeta2 = 1.0 / (1.0 + nu * inverse2(sc).quad(w));
  out.kappa = -2.0 * lambda * nu * u.dot(inverse2(all).apply(w));

  const Eigen2 es = eigen2(s);
  const double mu = es.lambda1;
  const double eta_s = es.lambda2;
  const Angle beta = es.angle1;
  out.zeta1_closed = sd.det() / all.det();
  out.zeta2_closed = sc.det() / all.det();
  out.kappa_closed = lambda * nu * (eta_s - mu) * std::sin(2.0 * (psi.rad - beta.rad)) / all.det();
  out.carry = out.zeta1 * out.c + out.zeta2 * out.d + out.kappa * r_cross(psi);
  return out;
}

}  // namespace navlim

#endif  // NAVLIM_NAVINFO_HPP
