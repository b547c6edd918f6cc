// SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "navlim/geom2d.hpp"

using namespace navlim;

namespace {

constexpr double kPi = std::numbers::pi;

Sym2 random_sym(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  return {u(g), u(g), u(g)};
}

void expect_sym_near(const Sym2& a, const Sym2& b, double tol) {
  EXPECT_NEAR(a.a11, b.a11, tol);
  EXPECT_NEAR(a.a12, b.a12, tol);
  EXPECT_NEAR(a.a22, b.a22, tol);
}

}  // namespace

TEST(UnitVector, CardinalDirections) {
  EXPECT_DOUBLE_EQ(unit_vector(Angle(0.0)).x, 1.0);
  EXPECT_DOUBLE_EQ(unit_vector(Angle(0.0)).y, 0.0);
  EXPECT_NEAR(unit_vector(Angle(kPi / 2)).x, 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(unit_vector(Angle(kPi / 2)).y, 1.0);
  EXPECT_NEAR(unit_vector(Angle(kPi / 4)).x, 0.70710678118654752, 1e-15);
  EXPECT_NEAR(unit_vector(Angle(kPi / 4)).y, 0.70710678118654752, 1e-15);
}

TEST(Angle, CanonicalIsExplicit) {
  const Angle a(-kPi / 2);
  EXPECT_DOUBLE_EQ(a.rad, -kPi / 2);
  EXPECT_NEAR(a.canonical().rad, 3 * kPi / 2, 1e-15);
  EXPECT_NEAR(Angle(5 * kPi).canonical().rad, kPi, 1e-12);
  EXPECT_EQ(Angle(0.0).canonical().rad, 0.0);
}

TEST(RangingDirection, ProjectorsOnAxes) {
  expect_sym_near(r_dir(Angle(0.0)), {1, 0, 0}, 1e-16);
  expect_sym_near(r_dir(Angle(kPi / 2)), {0, 0, 1}, 1e-16);
}

TEST(RangingDirection, OrthogonalPairSumsToIdentity) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> th(-10, 10);
  for (int i = 0; i < 500; ++i) {
    const Angle phi(th(g));
    const Sym2 r = r_dir(phi);
    expect_sym_near(r + r_dir(phi + kQuarterTurn).sym(), Sym2::identity(), 1e-14);
    EXPECT_NEAR(r.trace(), 1.0, 1e-14);
    EXPECT_NEAR(r.det(), 0.0, 1e-14);
    EXPECT_TRUE(is_psd(r));
  }
}

TEST(CouplingMatrix, ValueAtZero) { expect_sym_near(r_cross(Angle(0.0)), {0, 0.5, 0}, 1e-16); }

TEST(CouplingMatrix, TraceFreeWithHalfEigenvalues) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> th(-10, 10);
  for (int i = 0; i < 500; ++i) {
    const Angle phi(th(g));
    const Sym2 c = r_cross(phi);
    EXPECT_NEAR(c.trace(), 0.0, 1e-15);
    EXPECT_NEAR(c.det(), -0.25, 1e-15);
    const Eigen2 e = eigen2(c);
    EXPECT_NEAR(e.lambda1, 0.5, 1e-15);
    EXPECT_NEAR(e.lambda2, -0.5, 1e-15);
  }
}

TEST(CouplingMatrix, DoubleAngleForm) {
  // expanding (u w^T + w u^T) / 2 with u = (cos, sin), w = (-sin, cos)
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> th(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const double phi = th(g);
    const Sym2 want{-0.5 * std::sin(2 * phi), 0.5 * std::cos(2 * phi), 0.5 * std::sin(2 * phi)};
    expect_sym_near(r_cross(Angle(phi)), want, 1e-15);
  }
}

TEST(Eigen2, IdentityTieReportsZeroAngle) {
  const Eigen2 e = eigen2(Sym2::identity());
  EXPECT_EQ(e.lambda1, 1.0);
  EXPECT_EQ(e.lambda2, 1.0);
  EXPECT_EQ(e.angle1.rad, 0.0);
}

TEST(Eigen2, BuiltFromProjectors) {
  const Angle th(kPi / 3);
  const Eigen2 e = eigen2(2.0 * r_dir(th).sym() + 1.0 * r_dir(th + kQuarterTurn).sym());
  EXPECT_NEAR(e.lambda1, 2.0, 1e-14);
  EXPECT_NEAR(e.lambda2, 1.0, 1e-14);
  EXPECT_NEAR(e.angle1.rad, kPi / 3, 1e-14);
}

TEST(Eigen2, RoundTripOnRandomMatrices) {
  std::mt19937_64 g(4);
  for (int i = 0; i < 2000; ++i) {
    const Sym2 m = random_sym(g);
    const Eigen2 e = eigen2(m);
    EXPECT_GE(e.lambda1, e.lambda2);
    const Sym2 back = e.lambda1 * r_dir(e.angle1).sym() + e.lambda2 * r_dir(e.angle1 + kQuarterTurn).sym();
    EXPECT_LE((back - m).frobenius(), 1e-12 * std::max(1.0, m.frobenius()));
  }
}

TEST(Eigen2, AgreesWithEigenSolver) {
  std::mt19937_64 g(5);
  for (int i = 0; i < 500; ++i) {
    const Sym2 m = random_sym(g);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.eigen());
    const Eigen2 e = eigen2(m);
    EXPECT_NEAR(e.lambda1, es.eigenvalues()(1), 1e-12);
    EXPECT_NEAR(e.lambda2, es.eigenvalues()(0), 1e-12);
  }
}

TEST(Adjugate, Examples) {
  expect_sym_near(adjugate2({2, 1, 3}), {3, -1, 2}, 0.0);
  expect_sym_near(adjugate2(Sym2::identity()), Sym2::identity(), 0.0);
  std::mt19937_64 g(6);
  std::uniform_real_distribution<double> th(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const Angle phi(th(g));
    expect_sym_near(adjugate2(r_dir(phi)), r_dir(phi + kQuarterTurn), 1e-15);
  }
}

TEST(Adjugate, ProductIsDeterminantTimesIdentity) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 500; ++i) {
    const Sym2 m = random_sym(g);
    const Eigen::Matrix2d p = m.eigen() * adjugate2(m).eigen();
    EXPECT_LE((p - m.det() * Eigen::Matrix2d::Identity()).norm(), 1e-13 * std::max(1.0, p.norm()));
  }
}

TEST(Inverse2, InvertsAndRejectsSingular) {
  const Sym2 m{4, 1, 3};
  EXPECT_LE((m.eigen() * inverse2(m).eigen() - Eigen::Matrix2d::Identity()).norm(), 1e-15);
  EXPECT_THROW(inverse2(r_dir(Angle(0.3))), NotPositiveDefinite);
  EXPECT_THROW(inverse2(Sym2::zero()), NotPositiveDefinite);
}

TEST(Definiteness, ToleranceBand) {
  EXPECT_TRUE(is_psd({1, 0, -1e-12}));
  EXPECT_FALSE(is_psd({1, 0, -1e-8}));
  EXPECT_FALSE(is_pd({1, 0, 0}));
  EXPECT_TRUE(is_pd({1, 0, 1e-3}));
  EXPECT_THROW(Spd2::checked({1, 2, 1}), NotPositiveDefinite);
  EXPECT_NO_THROW(Spd2::checked({2, 1, 1}));
}

TEST(InfoEllipse, Examples) {
  const Ellipse c = info_ellipse(4.0 * Sym2::identity());
  EXPECT_DOUBLE_EQ(c.semi_axis_major, 2.0);
  EXPECT_DOUBLE_EQ(c.semi_axis_minor, 2.0);

  const Ellipse d = info_ellipse(Sym2::diag(9, 1));
  EXPECT_DOUBLE_EQ(d.semi_axis_major, 3.0);
  EXPECT_DOUBLE_EQ(d.semi_axis_minor, 1.0);
  EXPECT_EQ(d.orientation.rad, 0.0);

  const Angle th(kPi / 6);
  const Ellipse e = info_ellipse(5.0 * r_dir(th).sym() + 2.0 * r_dir(th + kQuarterTurn).sym());
  EXPECT_NEAR(e.semi_axis_major, std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(e.semi_axis_minor, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(e.orientation.rad, kPi / 6, 1e-14);
}

TEST(InfoEllipse, RejectsRankDeficient) { EXPECT_THROW(info_ellipse(r_dir(Angle(1.0))), NotPositiveDefinite); }
