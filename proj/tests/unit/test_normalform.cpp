#include <gtest/gtest.h>

#include <cmath>

#include "divischan/normalform.hpp"

using namespace divischan;

namespace {
Mat3 rz(double th) {
  Mat3 r;
  r << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
  return r;
}
}  // namespace

TEST(SpecialOrthogonal, Identity) {
  const auto f = special_orthogonal_form(PauliTransferMatrix());
  EXPECT_LT((f.lambdas - Vec3::Ones()).norm(), 1e-14);
  EXPECT_LT(f.gamma.norm(), 1e-14);
  EXPECT_LT((f.r1 - Mat3::Identity()).norm(), 1e-14);
}

TEST(SpecialOrthogonal, RotatedDiagonal) {
  const double th = 0.4;
  const Mat3 delta = rz(th) * Vec3(0.9, 0.8, 0.6).asDiagonal();
  const auto e = PauliTransferMatrix::affine(Vec3::Zero(), delta);
  const auto f = special_orthogonal_form(e);
  EXPECT_LT((f.lambdas - Vec3(0.9, 0.8, 0.6)).norm(), 1e-12);
  // reconstruct: Delta = R1 diag R2^T
  EXPECT_LT((f.r1 * f.lambdas.asDiagonal() * f.r2.transpose() - delta).norm(), 1e-12);
  EXPECT_NEAR(f.r1.determinant(), 1.0, 1e-12);
  EXPECT_LT((f.r1 - rz(th)).norm(), 1e-10);
}

TEST(SpecialOrthogonal, NotGateKeepsSign) {
  const auto f = special_orthogonal_form(PauliTransferMatrix::diagonal(-1.0 / 3, -1.0 / 3, -1.0 / 3));
  EXPECT_LT((f.lambdas - Vec3::Constant(-1.0 / 3)).norm(), 1e-14);
  EXPECT_NEAR(f.r1.determinant(), 1.0, 1e-12);
  EXPECT_NEAR(f.r2.determinant(), 1.0, 1e-12);
}

TEST(SpecialOrthogonal, ReconstructsNonUnital) {
  const auto e = PauliTransferMatrix::affine(Vec3(0.1, -0.2, 0.3), rz(1.1) * Vec3(0.5, 0.4, -0.3).asDiagonal() * rz(-0.3).transpose());
  const auto f = special_orthogonal_form(e);
  const auto back = compose(f.u1, compose(f.d(), f.u2));
  EXPECT_LT((back.m - e.m).norm(), 1e-12);
}

TEST(Lorentz, UnitalMatchesLambdas) {
  const auto e = PauliTransferMatrix::diagonal(0.9, 0.8, 0.6);
  const auto f = lorentz_normal_form(e);
  ASSERT_TRUE(f.is_diagonal);
  Vec3 a = f.channel_lambdas().cwiseAbs();
  std::sort(a.data(), a.data() + 3);
  EXPECT_LT((a - Vec3(0.6, 0.8, 0.9)).norm(), 1e-12);
}

TEST(Lorentz, FullRankNonUnitalReconstructs) {
  const auto e = PauliTransferMatrix::affine(Vec3(0.5, 0, 0), Vec3(0.3, 0.3, 0.2).asDiagonal());
  const auto f = lorentz_normal_form(e);
  EXPECT_TRUE(f.is_diagonal);
  EXPECT_LT((f.l1 * f.sigma * f.l2.transpose() - e.m * phi_t()).norm(), 1e-9);
  EXPECT_TRUE(is_proper_orthochronous(f.l1));
  EXPECT_TRUE(is_proper_orthochronous(f.l2));
}

TEST(Lorentz, RankThreeNonUnitalIsNonDiagonal) {
  Mat4 m;
  m << 1, 0, 0, 0, 0, -1.0 / 3, 0, 0, 0, 0, -1.0 / 3, 0, 2.0 / 3, 0, 0, 1.0 / 3;
  const auto f = lorentz_normal_form(PauliTransferMatrix(m));
  EXPECT_FALSE(f.is_diagonal);
  EXPECT_GT(std::abs(f.b), 1e-6);
  EXPECT_TRUE(is_proper_orthochronous(f.l1));
  EXPECT_TRUE(is_proper_orthochronous(f.l2));
  EXPECT_LT((f.l1 * f.sigma * f.l2.transpose() - m * phi_t()).norm(), 1e-9);
  EXPECT_NEAR(f.sigma(3, 3), f.a + f.c - f.b, 1e-10);
}

TEST(Lorentz, ProperOrthochronous) {
  EXPECT_TRUE(is_proper_orthochronous(Mat4::Identity()));
  EXPECT_FALSE(is_proper_orthochronous(Vec4(1, 1, 1, -1).asDiagonal().toDenseMatrix()));
  const double u = 0.7;
  Mat4 boost = Mat4::Identity();
  boost(0, 0) = boost(1, 1) = std::cosh(u);
  boost(0, 1) = boost(1, 0) = std::sinh(u);
  EXPECT_TRUE(is_proper_orthochronous(boost));
}

TEST(PauliProbabilities, Corners) {
  EXPECT_LT((pauli_probabilities(Vec3(1, 1, 1)) - Vec4(1, 0, 0, 0)).norm(), 1e-15);
  EXPECT_LT((pauli_probabilities(Vec3::Constant(-1.0 / 3)) - Vec4(0, 1.0 / 3, 1.0 / 3, 1.0 / 3)).norm(), 1e-15);
  EXPECT_LT((pauli_probabilities(Vec3(1, -1, -1)) - Vec4(0, 1, 0, 0)).norm(), 1e-15);
}
