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
#ifndef NAVLIM_BLOCKFIM_HPP
#define NAVLIM_BLOCKFIM_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "navlim/geom2d.hpp"

namespace navlim {

/// Eliminated (nuisance) block could not be inverted, even in the pseudo-inverse sense.
class SingularBlock : public std::runtime_error {
 public:
  explicit SingularBlock(const std::string& what) : std::runtime_error(what) {}
};

namespace tol {
/// Pseudo-inverse eigenvalue cutoff relative to lambda_max.
inline constexpr double kPinvCutoff = 1e-12;
/// Cholesky pivots below this fraction of the largest diagonal fall back to the pseudo-inverse.
inline constexpr double kCholeskyPivot = 1e-14;
}  // namespace tol

namespace linalg {

using Eigen::MatrixXd;

/// ||a - b||_F / max(||a||_F, ||b||_F); 0 when both vanish.
inline double rel_diff(const MatrixXd& a, const MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

inline MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Smallest eigenvalue relative test: PSD within tol::kPsd.
inline bool is_psd(const MatrixXd& m) {
  if (m.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return es.eigenvalues().minCoeff() >= -tol::kPsd * std::max(1.0, top);
}

/// Eigen-based pseudo-inverse of a PSD matrix. Throws SingularBlock when indefinite.
inline MatrixXd psd_pseudo_inverse(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m));
  const auto& ev = es.eigenvalues();
  const double top = ev.size() ? ev.maxCoeff() : 0.0;
  if (ev.size() && ev.minCoeff() < -tol::kPsd * std::max(1.0, top)) {
    throw SingularBlock("singular nuisance block: block is indefinite");
  }
  const double cutoff = tol::kPinvCutoff * top;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0.0) inv(i) = 1.0 / ev(i);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

/**
 * @brief Inverse of an information block.
 *
 * Cholesky when the block is comfortably PD, eigen pseudo-inverse otherwise. Non-finite input
 * and indefinite blocks raise SingularBlock.
 */
inline MatrixXd info_inverse(const MatrixXd& m) {
  if (m.size() == 0) return m;
  if (!m.allFinite()) throw SingularBlock("singular nuisance block: non-finite entries");
  const MatrixXd s = symmetrize(m);
  Eigen::LLT<MatrixXd> llt(s);
  if (llt.info() == Eigen::Success) {
    const double top = s.diagonal().maxCoeff();
    const auto l_diag = llt.matrixLLT().diagonal();
    const double min_pivot = l_diag.cwiseProduct(l_diag).minCoeff();
    if (min_pivot > tol::kCholeskyPivot * top) {
      return llt.solve(MatrixXd::Identity(s.rows(), s.cols()));
    }
  }
  return psd_pseudo_inverse(s);
}

}  // namespace linalg

enum class ParamKind { PositionalState = 0, IntraParam = 1, InterParam = 2 };

/**
 * @brief Parameter coordinate: what (kind) of which node (agent) at which step (time).
 *
 * Indices are 0-based. peer is set only for InterParam. The defaulted ordering is time-major,
 * then agent, then kind (states before intra before inter parameters), then peer.
 */
struct ParamId {
  std::size_t time = 0;
  std::size_t agent = 0;
  ParamKind kind = ParamKind::PositionalState;
  std::optional<std::size_t> peer;

  static ParamId state(std::size_t agent, std::size_t time) {
    return {time, agent, ParamKind::PositionalState, std::nullopt};
  }
  static ParamId intra(std::size_t agent, std::size_t time) {
    return {time, agent, ParamKind::IntraParam, std::nullopt};
  }
  static ParamId inter(std::size_t agent, std::size_t peer, std::size_t time) {
    if (peer == agent) throw std::invalid_argument("inter-node parameter with peer == agent");
    return {time, agent, ParamKind::InterParam, peer};
  }

  friend auto operator<=>(const ParamId&, const ParamId&) = default;
  friend bool operator==(const ParamId&, const ParamId&) = default;
};

inline std::string to_string(const ParamId& id) {
  static constexpr const char* kNames[] = {"x", "eta", "kappa"};
  std::string s = kNames[static_cast<int>(id.kind)];
  s += "[agent=" + std::to_string(id.agent);
  if (id.peer) s += ",peer=" + std::to_string(*id.peer);
  s += ",time=" + std::to_string(id.time) + "]";
  return s;
}

/// Ordered list of (ParamId, dim) with contiguous offsets.
class BlockLayout {
 public:
  struct Entry {
    ParamId id;
    Eigen::Index dim = 0;
    Eigen::Index offset = 0;
  };

  BlockLayout() = default;

  /// Entries in insertion order. Use sorted() for the canonical time-major order.
  explicit BlockLayout(const std::vector<std::pair<ParamId, Eigen::Index>>& blocks) {
    for (const auto& [id, dim] : blocks) add(id, dim);
  }

  static BlockLayout sorted(std::vector<std::pair<ParamId, Eigen::Index>> blocks) {
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return BlockLayout(blocks);
  }

  void add(const ParamId& id, Eigen::Index dim) {
    if (dim <= 0) throw std::invalid_argument("block dimension must be positive: " + to_string(id));
    if (index_.contains(id)) throw std::invalid_argument("duplicate parameter " + to_string(id));
    index_.emplace(id, entries_.size());
    entries_.push_back({id, dim, total_});
    total_ += dim;
  }

  [[nodiscard]] Eigen::Index total_dim() const { return total_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
  [[nodiscard]] bool contains(const ParamId& id) const { return index_.contains(id); }

  [[nodiscard]] const Entry& at(const ParamId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown parameter " + to_string(id));
    return entries_[it->second];
  }

  /// Sub-layout of the given ids, in this layout's order.
  [[nodiscard]] BlockLayout subset(const std::set<ParamId>& ids) const {
    BlockLayout out;
    for (const auto& e : entries_) {
      if (ids.contains(e.id)) out.add(e.id, e.dim);
    }
    if (out.size() != ids.size()) throw std::out_of_range("subset names parameters not in layout");
    return out;
  }

 private:
  std::vector<Entry> entries_;
  std::map<ParamId, std::size_t> index_;
  Eigen::Index total_ = 0;
};

/// Dense symmetric matrix indexed by a BlockLayout.
class BlockSymMatrix {
 public:
  BlockSymMatrix() = default;
  explicit BlockSymMatrix(BlockLayout layout)
      : layout_(std::move(layout)), m_(Eigen::MatrixXd::Zero(layout_.total_dim(), layout_.total_dim())) {}
  BlockSymMatrix(BlockLayout layout, Eigen::MatrixXd dense)
      : layout_(std::move(layout)), m_(std::move(dense)) {
    if (m_.rows() != layout_.total_dim() || m_.cols() != layout_.total_dim()) {
      throw std::invalid_argument("dense matrix does not match layout dimension");
    }
  }

  [[nodiscard]] const BlockLayout& layout() const { return layout_; }
  [[nodiscard]] const Eigen::MatrixXd& dense() const { return m_; }
  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }

  [[nodiscard]] Eigen::MatrixXd block(const ParamId& row, const ParamId& col) const {
    const auto& r = layout_.at(row);
    const auto& c = layout_.at(col);
    return m_.block(r.offset, c.offset, r.dim, c.dim);
  }

  /// Adds value at (row, col) and its transpose at (col, row); a diagonal block is added once.
  void add_block(const ParamId& row, const ParamId& col, const Eigen::MatrixXd& value) {
    const auto& r = layout_.at(row);
    const auto& c = layout_.at(col);
    if (value.rows() != r.dim || value.cols() != c.dim) {
      throw std::invalid_argument("dimension mismatch for block (" + to_string(row) + ", " +
                                  to_string(col) + ")");
    }
    if (row == col) {
      m_.block(r.offset, r.offset, r.dim, r.dim) += value;
    } else {
      m_.block(r.offset, c.offset, r.dim, c.dim) += value;
      m_.block(c.offset, r.offset, c.dim, r.dim) += value.transpose();
    }
  }

  [[nodiscard]] bool is_symmetric(double rel = 1e-12) const {
    const double scale = std::max(1.0, m_.norm());
    return (m_ - m_.transpose()).norm() <= rel * scale;
  }

  friend BlockSymMatrix operator+(const BlockSymMatrix& a, const BlockSymMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("adding matrices of different layouts");
    return BlockSymMatrix(a.layout_, a.m_ + b.m_);
  }

 private:
  BlockLayout layout_;
  Eigen::MatrixXd m_;
};

struct Contribution {
  ParamId row;
  ParamId col;
  Eigen::MatrixXd value;
};

/// Additive scatter of contributions into a zero matrix over layout.
inline BlockSymMatrix assemble(const BlockLayout& layout, const std::vector<Contribution>& contributions) {
  BlockSymMatrix out(layout);
  for (const auto& c : contributions) out.add_block(c.row, c.col, c.value);
  return out;
}

/**
 * Schur complement A - B C^-1 B^T onto the kept coordinates; C (the eliminated block) inverts via
 * linalg::info_inverse. The result's layout preserves the input ordering of the kept ids.
 */
inline BlockSymMatrix schur_complement(const BlockSymMatrix& m, const std::set<ParamId>& keep) {
  const BlockLayout kept = m.layout().subset(keep);
  std::vector<Eigen::Index> keep_idx;
  std::vector<Eigen::Index> drop_idx;
  for (const auto& e : m.layout().entries()) {
    auto& dst = keep.contains(e.id) ? keep_idx : drop_idx;
    for (Eigen::Index i = 0; i < e.dim; ++i) dst.push_back(e.offset + i);
  }
  const Eigen::MatrixXd& full = m.dense();
  Eigen::MatrixXd a = full(keep_idx, keep_idx);
  if (drop_idx.empty()) return BlockSymMatrix(kept, a);
  const Eigen::MatrixXd b = full(keep_idx, drop_idx);
  const Eigen::MatrixXd c = full(drop_idx, drop_idx);
  a -= b * linalg::info_inverse(c) * b.transpose();
  return BlockSymMatrix(kept, linalg::symmetrize(a));
}

/// Psi^gamma_{alpha,beta} = Phi_ab - Phi_ag Phi_gg^-1 Phi_gb.
inline Eigen::MatrixXd psi(const Eigen::MatrixXd& phi_ab, const Eigen::MatrixXd& phi_ag,
                           const Eigen::MatrixXd& phi_gg, const Eigen::MatrixXd& phi_gb) {
  if (phi_ag.rows() != phi_ab.rows() || phi_gb.cols() != phi_ab.cols() ||
      phi_ag.cols() != phi_gg.rows() || phi_gb.rows() != phi_gg.cols()) {
    throw std::invalid_argument("psi: dimension mismatch");
  }
  return phi_ab - phi_ag * linalg::info_inverse(phi_gg) * phi_gb;
}

/**
 * @brief One nuisance chain gamma^(1..T) hanging off the states x^(1..T).
 *
 * Per step n (0-based):
 *  - state_info[n]        Phi_{x(n),x(n)} before elimination
 *  - diag_info[n]         Phi_{g(n),g(n)}          (B^(n,n) or C^(n,n))
 *  - offdiag_info[n]      Phi_{g(n),g(n+1)}        (B^(n,n+1)), n < T-1
 *  - cross_same[n]        Phi_{x(n),g(n)}          (D^(n,n) or E^(n,n))
 *  - cross_next[n]        Phi_{x(n),g(n+1)}        (D^(n,n+1)), n < T-1
 */
struct ChainBlocks {
  std::vector<Eigen::MatrixXd> state_info;
  std::vector<Eigen::MatrixXd> diag_info;
  std::vector<Eigen::MatrixXd> offdiag_info;
  std::vector<Eigen::MatrixXd> cross_same;
  std::vector<Eigen::MatrixXd> cross_next;

  [[nodiscard]] std::size_t steps() const { return diag_info.size(); }

  void validate() const {
    const std::size_t t = steps();
    if (t == 0) throw std::invalid_argument("chain: at least one step required");
    if (state_info.size() != t || cross_same.size() != t || offdiag_info.size() != t - 1 ||
        cross_next.size() != t - 1) {
      throw std::invalid_argument("chain: inconsistent number of blocks");
    }
    for (std::size_t n = 0; n < t; ++n) {
      const auto ds = state_info[n].rows();
      const auto dg = diag_info[n].rows();
      if (state_info[n].cols() != ds || diag_info[n].cols() != dg || cross_same[n].rows() != ds ||
          cross_same[n].cols() != dg) {
        throw std::invalid_argument("chain: block dimensions inconsistent at step " + std::to_string(n));
      }
      if (n + 1 < t) {
        const auto dg_next = diag_info[n + 1].rows();
        if (offdiag_info[n].rows() != dg || offdiag_info[n].cols() != dg_next ||
            cross_next[n].rows() != ds || cross_next[n].cols() != dg_next) {
          throw std::invalid_argument("chain: link dimensions inconsistent at step " + std::to_string(n));
        }
      }
    }
  }
};

/// Keyed by (n, m) with n <= m: state-state information after eliminating the whole chain.
using ChainContribution = std::map<std::pair<std::size_t, std::size_t>, Eigen::MatrixXd>;

/**
 * @brief Eliminates a nuisance chain in time order.
 *
 * Running quantities after gamma^(0..n-1) are gone:
 *   Bt(n)      = B(n,n) - B(n-1,n)^T Bt(n-1)^-1 B(n-1,n)
 *   Dt(i, n)   cross-information between x^(i) (i <= n) and gamma^(n)
 *   Dt(i, n+1) = [i == n] D(n,n+1) - Dt(i,n) Bt(n)^-1 B(n,n+1)
 * Eliminating gamma^(n) subtracts Dt(i,n) Bt(n)^-1 Dt(j,n)^T from every state pair (i, j <= n).
 *
 * Throws SingularBlock naming the step when a running block Bt(n) cannot be inverted.
 */
inline ChainContribution eliminate_hmm_chain(const ChainBlocks& chain) {
  chain.validate();
  const std::size_t t = chain.steps();
  ChainContribution out;
  for (std::size_t n = 0; n < t; ++n) {
    for (std::size_t m = n; m < t; ++m) {
      const auto rows = chain.state_info[n].rows();
      const auto cols = chain.state_info[m].rows();
      out[{n, m}] = n == m ? chain.state_info[n] : Eigen::MatrixXd::Zero(rows, cols);
    }
  }

  Eigen::MatrixXd running = chain.diag_info[0];
  std::vector<Eigen::MatrixXd> cross{chain.cross_same[0]};  // Dt(i, n) for i = 0..n
  for (std::size_t n = 0; n < t; ++n) {
    Eigen::MatrixXd running_inv;
    try {
      running_inv = linalg::info_inverse(running);
    } catch (const SingularBlock& e) {
      throw SingularBlock(std::string(e.what()) + " (chain step " + std::to_string(n) + ")");
    }
    for (std::size_t i = 0; i <= n; ++i) {
      const Eigen::MatrixXd left = cross[i] * running_inv;
      for (std::size_t j = i; j <= n; ++j) out[{i, j}] -= left * cross[j].transpose();
    }
    if (n + 1 == t) break;

    const Eigen::MatrixXd& link = chain.offdiag_info[n];
    std::vector<Eigen::MatrixXd> next(n + 2);
    for (std::size_t i = 0; i <= n; ++i) next[i] = -cross[i] * running_inv * link;
    next[n] += chain.cross_next[n];
    next[n + 1] = chain.cross_same[n + 1];
    running = chain.diag_info[n + 1] - link.transpose() * running_inv * link;
    cross = std::move(next);
  }
  for (auto& [key, value] : out) {
    if (key.first == key.second) value = linalg::symmetrize(value);
  }
  return out;
}

}  // namespace navlim

#endif  // NAVLIM_BLOCKFIM_HPP
