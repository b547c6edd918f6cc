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
#ifndef NAVLIM_GEOM2D_HPP
#define NAVLIM_GEOM2D_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace navlim {

/// Raised when a 2x2 information matrix fails a definiteness requirement.
class NotPositiveDefinite : public std::domain_error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : std::domain_error(what) {}
};

namespace tol {
/// Eigenvalues >= -kPsd * max(1, lambda_max) count as PSD.
inline constexpr double kPsd = 1e-10;
/// Relative gap under which two eigenvalues are a tie (angle reported as 0).
inline constexpr double kEigenTie = 1e-12;
}  // namespace tol

/**
 * @brief Angle in radians.
 *
 * Stored raw. Normalization to [0, 2pi) is explicit via canonical(); differences of angles
 * are never wrapped behind the caller's back.
 */
struct Angle {
  double rad = 0.0;

  constexpr Angle() = default;
  constexpr explicit Angle(double radians) : rad(radians) {}

  [[nodiscard]] Angle canonical() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(rad, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return Angle(r);
  }

  friend constexpr Angle operator+(Angle a, Angle b) { return Angle(a.rad + b.rad); }
  friend constexpr Angle operator-(Angle a, Angle b) { return Angle(a.rad - b.rad); }
  friend constexpr Angle operator+(Angle a, double b) { return Angle(a.rad + b); }
  friend constexpr Angle operator-(Angle a, double b) { return Angle(a.rad - b); }
  friend constexpr bool operator==(Angle, Angle) = default;
};

inline constexpr double kQuarterTurn = std::numbers::pi / 2.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  [[nodiscard]] constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  [[nodiscard]] double norm() const { return std::hypot(x, y); }
  /// Direction of the vector; meaningless for the zero vector.
  [[nodiscard]] Angle heading() const { return Angle(std::atan2(y, x)); }
  [[nodiscard]] Eigen::Vector2d eigen() const { return {x, y}; }
};

/// Symmetric 2x2 matrix, upper triangle stored.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static constexpr Sym2 zero() { return {}; }
  static constexpr Sym2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
  /// Symmetric part of a general 2x2 matrix.
  static Sym2 from_eigen(const Eigen::Matrix2d& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
  }

  [[nodiscard]] constexpr double det() const { return a11 * a22 - a12 * a12; }
  [[nodiscard]] constexpr double trace() const { return a11 + a22; }
  [[nodiscard]] constexpr double quad(Vec2 u) const {
    return a11 * u.x * u.x + 2.0 * a12 * u.x * u.y + a22 * u.y * u.y;
  }
  [[nodiscard]] constexpr Vec2 apply(Vec2 u) const {
    return {a11 * u.x + a12 * u.y, a12 * u.x + a22 * u.y};
  }
  [[nodiscard]] double frobenius() const {
    return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22);
  }
  [[nodiscard]] Eigen::Matrix2d eigen() const {
    Eigen::Matrix2d m;
    m << a11, a12, a12, a22;
    return m;
  }
  [[nodiscard]] bool is_finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a22);
  }

  friend constexpr Sym2 operator+(Sym2 a, Sym2 b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22};
  }
  friend constexpr Sym2 operator-(Sym2 a, Sym2 b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
  }
  friend constexpr Sym2 operator*(double s, Sym2 a) { return {s * a.a11, s * a.a12, s * a.a22}; }
  constexpr Sym2& operator+=(Sym2 o) { return *this = *this + o; }
  friend constexpr bool operator==(Sym2, Sym2) = default;
};

/// Eigen-decomposition of a Sym2: lambda1 >= lambda2, angle1 is the lambda1 eigenvector direction.
struct Eigen2 {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Angle angle1;
};

/// Closed-form 2x2 symmetric eigendecomposition. Ties report angle 0.
inline Eigen2 eigen2(const Sym2& m) {
  const double mean = 0.5 * (m.a11 + m.a22);
  const double half_gap = 0.5 * (m.a11 - m.a22);
  const double radius = std::hypot(half_gap, m.a12);
  Eigen2 e{mean + radius, mean - radius, Angle(0.0)};
  const double scale = std::max(std::abs(e.lambda1), std::abs(e.lambda2));
  if (radius > tol::kEigenTie * scale) e.angle1 = Angle(0.5 * std::atan2(m.a12, half_gap));
  return e;
}

inline bool is_psd(const Sym2& m) {
  const Eigen2 e = eigen2(m);
  return m.is_finite() && e.lambda2 >= -tol::kPsd * std::max(1.0, e.lambda1);
}

inline bool is_pd(const Sym2& m) {
  const Eigen2 e = eigen2(m);
  return m.is_finite() && e.lambda2 > tol::kPsd * std::max(1.0, e.lambda1);
}

/**
 * @brief A Sym2 known to be positive semidefinite (to tol::kPsd).
 *
 * checked() validates; unchecked() is for values PSD by construction (projectors, sums of PSD
 * terms) where the eigenvalue test would only cost time.
 */
class Spd2 {
 public:
  Spd2() = default;

  static Spd2 checked(const Sym2& m) {
    if (!is_psd(m)) throw NotPositiveDefinite("matrix is not positive semidefinite");
    return Spd2(m);
  }
  static constexpr Spd2 unchecked(const Sym2& m) { return Spd2(m); }

  [[nodiscard]] constexpr const Sym2& sym() const { return m_; }
  constexpr operator const Sym2&() const { return m_; }  // NOLINT(google-explicit-constructor)
  [[nodiscard]] bool is_definite() const { return is_pd(m_); }

  friend constexpr Spd2 operator+(const Spd2& a, const Spd2& b) { return Spd2(a.m_ + b.m_); }

 private:
  constexpr explicit Spd2(const Sym2& m) : m_(m) {}
  Sym2 m_;
};

inline Vec2 unit_vector(Angle phi) { return {std::cos(phi.rad), std::sin(phi.rad)}; }

/// Ranging direction matrix u_phi u_phi^T.
inline Spd2 r_dir(Angle phi) {
  const Vec2 u = unit_vector(phi);
  return Spd2::unchecked({u.x * u.x, u.x * u.y, u.y * u.y});
}

/// Coupling matrix (u_phi u_perp^T + u_perp u_phi^T) / 2. Trace 0, eigenvalues +-1/2.
inline Sym2 r_cross(Angle phi) {
  const Vec2 u = unit_vector(phi);
  const Vec2 w = unit_vector(phi + kQuarterTurn);
  return {u.x * w.x, 0.5 * (u.x * w.y + u.y * w.x), u.y * w.y};
}

inline Sym2 adjugate2(const Sym2& m) { return {m.a22, -m.a12, m.a11}; }

/// Inverse via the adjugate; throws on a numerically singular matrix.
inline Sym2 inverse2(const Sym2& m) {
  const double d = m.det();
  const double scale = std::max({std::abs(m.a11), std::abs(m.a22), std::abs(m.a12)});
  if (!(std::abs(d) > 1e-300) || std::abs(d) <= 1e-15 * scale * scale) {
    throw NotPositiveDefinite("2x2 matrix is singular");
  }
  return (1.0 / d) * adjugate2(m);
}

/// Semi-axes in information units (sqrt of eigenvalues of J), major along the top eigenvector.
struct Ellipse {
  double semi_axis_major = 0.0;
  double semi_axis_minor = 0.0;
  Angle orientation;
};

/// Information ellipse {p : p^T J^-1 p = 1}.
inline Ellipse info_ellipse(const Sym2& j) {
  if (!is_pd(j)) throw NotPositiveDefinite("information ellipse: not positive definite");
  const Eigen2 e = eigen2(j);
  return {std::sqrt(e.lambda1), std::sqrt(e.lambda2), e.angle1};
}

}  // namespace navlim

#endif  // NAVLIM_GEOM2D_HPP
