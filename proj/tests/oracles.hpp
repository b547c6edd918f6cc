// SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the test suites. Nothing here calls the library's
// assembly or elimination code; inputs are plain scenario geometry and model parameters.

#ifndef NAVLIM_TESTS_ORACLES_HPP
#define NAVLIM_TESTS_ORACLES_HPP

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "navlim/blockfim.hpp"
#include "navlim/models.hpp"

namespace oracle {

/// Gaussian measurement model with optional bias nuisances (0 std = no nuisance parameter).
struct GaussianModels {
  double sigma_r = 1.0;      // range noise std
  double sigma_b = 0.0;      // range bias prior std, one bias per link
  Eigen::Matrix2d vel_cov = Eigen::Matrix2d::Identity();  // (amplitude, direction) noise
  double sigma_eta = 0.0;    // velocity amplitude bias prior std, one per agent per step
  double dt = 1.0;
};

/// Joint FIM over [positions (time-major, 2 per agent), nuisances]; npos = number of position coordinates.
inline Eigen::MatrixXd full_fim(const navlim::Scenario& sc, const GaussianModels& m, Eigen::Index& npos) {
  const auto na = static_cast<Eigen::Index>(sc.num_agents());
  const auto t = static_cast<Eigen::Index>(sc.steps());
  npos = 2 * na * t;
  const auto pos = [&](std::size_t k, std::size_t n) { return 2 * (static_cast<Eigen::Index>(n) * na + static_cast<Eigen::Index>(k)); };
  Eigen::Index total = npos;
  if (m.sigma_b > 0) total += static_cast<Eigen::Index>(sc.links.size());
  const Eigen::Index eta0 = total;
  if (m.sigma_eta > 0) total += na * (t - 1 > 0 ? t - 1 : 0);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(total, total);

  // range links: mean = |p_a - p_b| + bias
  for (std::size_t l = 0; l < sc.links.size(); ++l) {
    const auto& link = sc.links[l];
    const navlim::Vec2 pa = sc.geometry.position(link.agent, link.step);
    const navlim::Vec2 pb = sc.geometry.position(link.peer, link.step);
    const Eigen::Vector2d g = (pa.eigen() - pb.eigen()) / (pa - pb).norm();
    Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(total);
    h.segment(pos(link.agent, link.step), 2) += g.transpose();
    if (sc.geometry.is_agent(link.peer)) h.segment(pos(link.peer, link.step), 2) -= g.transpose();
    if (m.sigma_b > 0) h(npos + static_cast<Eigen::Index>(l)) = 1.0;
    f += h.transpose() * h / (m.sigma_r * m.sigma_r);
    if (m.sigma_b > 0) f(npos + static_cast<Eigen::Index>(l), npos + static_cast<Eigen::Index>(l)) += 1.0 / (m.sigma_b * m.sigma_b);
  }

  // velocity: amplitude |p_n - p_{n-1}| / dt + eta, direction atan2 of the displacement
  const Eigen::Matrix2d w = m.vel_cov.inverse();
  for (std::size_t k = 0; k < sc.num_agents(); ++k) {
    for (std::size_t n = 1; n < sc.steps(); ++n) {
      const Eigen::Vector2d d = sc.geometry.position(k, n).eigen() - sc.geometry.position(k, n - 1).eigen();
      const double len = d.norm();
      const Eigen::Vector2d d_amp = d / (len * m.dt);
      const Eigen::Vector2d d_dir = Eigen::Vector2d(-d.y(), d.x()) / (len * len);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, total);
      h.block(0, pos(k, n), 1, 2) = d_amp.transpose();
      h.block(0, pos(k, n - 1), 1, 2) = -d_amp.transpose();
      h.block(1, pos(k, n), 1, 2) = d_dir.transpose();
      h.block(1, pos(k, n - 1), 1, 2) = -d_dir.transpose();
      if (m.sigma_eta > 0) {
        const Eigen::Index e = eta0 + static_cast<Eigen::Index>((n - 1) * sc.num_agents() + k);
        h(0, e) = 1.0;
        f(e, e) += 1.0 / (m.sigma_eta * m.sigma_eta);
      }
      f += h.transpose() * w * h;
    }
  }

  for (std::size_t k = 0; k < sc.num_agents(); ++k) {
    if (!sc.position_prior[k]) continue;
    for (std::size_t n = 0; n < sc.steps(); ++n) f.block(pos(k, n), pos(k, n), 2, 2) += sc.position_prior[k]->eigen();
  }
  return f;
}

/// A - B C^-1 B^T keeping the leading `keep` coordinates.
inline Eigen::MatrixXd leading_schur(const Eigen::MatrixXd& m, Eigen::Index keep) {
  const Eigen::Index rest = m.rows() - keep;
  if (rest == 0) return m;
  const Eigen::MatrixXd b = m.topRightCorner(keep, rest);
  return m.topLeftCorner(keep, keep) - b * m.bottomRightCorner(rest, rest).ldlt().solve(b.transpose());
}

/// Schur complement onto the given coordinate indices.
inline Eigen::MatrixXd schur_onto(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& keep) {
  std::vector<bool> kept(static_cast<std::size_t>(m.rows()), false);
  for (auto i : keep) kept[static_cast<std::size_t>(i)] = true;
  std::vector<Eigen::Index> order = keep;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!kept[static_cast<std::size_t>(i)]) order.push_back(i);
  }
  return leading_schur(m(order, order), static_cast<Eigen::Index>(keep.size()));
}

/// EFIM over the states of a nuisance chain, from its dense (states, chain) information matrix.
inline Eigen::MatrixXd chain_efim(const navlim::ChainBlocks& c) {
  const std::size_t t = c.steps();
  std::vector<Eigen::Index> so(t), go(t);
  Eigen::Index ns = 0;
  for (std::size_t n = 0; n < t; ++n) {
    so[n] = ns;
    ns += c.state_info[n].rows();
  }
  Eigen::Index total = ns;
  for (std::size_t n = 0; n < t; ++n) {
    go[n] = total;
    total += c.diag_info[n].rows();
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
  const auto sym = [&m](Eigen::Index r, Eigen::Index col, const Eigen::MatrixXd& b) {
    m.block(r, col, b.rows(), b.cols()) = b;
    m.block(col, r, b.cols(), b.rows()) = b.transpose();
  };
  for (std::size_t n = 0; n < t; ++n) {
    m.block(so[n], so[n], c.state_info[n].rows(), c.state_info[n].cols()) = c.state_info[n];
    m.block(go[n], go[n], c.diag_info[n].rows(), c.diag_info[n].cols()) = c.diag_info[n];
    sym(so[n], go[n], c.cross_same[n]);
    if (n + 1 < t) {
      sym(go[n], go[n + 1], c.offdiag_info[n]);
      sym(so[n], go[n + 1], c.cross_next[n]);
    }
  }
  return leading_schur(m, ns);
}

inline double rel_fro(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// K - K (S + K)^-1 K by a plain dense inverse.
inline Eigen::Matrix2d carry_direct(const Eigen::Matrix2d& k, const Eigen::Matrix2d& s) {
  return k - k * (s + k).inverse() * k;
}

}  // namespace oracle

#endif  // NAVLIM_TESTS_ORACLES_HPP
