#include <gtest/gtest.h>

#include <random>

#include "divischan/chanrep.hpp"
#include "helpers.hpp"

using namespace divischan;

TEST(Chanrep, IdentityKraus) {
  KrausSet ks{{Mat2c::Identity()}};
  EXPECT_LT((ptm_from_kraus(ks).m - Mat4::Identity()).norm(), 1e-15);
}

TEST(Chanrep, NotGateKraus) {
  KrausSet ks;
  for (int j = 1; j <= 3; ++j) ks.ops.push_back(pauli(j) / std::sqrt(3.0));
  const Mat4 m = ptm_from_kraus(ks).m;
  EXPECT_LT((m - PauliTransferMatrix::diagonal(-1.0 / 3, -1.0 / 3, -1.0 / 3).m).norm(), 1e-15);
}

TEST(Chanrep, DephasingMixture) {
  const double p = 0.75;
  KrausSet ks{{std::sqrt(p) * pauli(0), std::sqrt(1 - p) * pauli(3)}};
  EXPECT_LT((ptm_from_kraus(ks).m - PauliTransferMatrix::diagonal(0.5, 0.5, 1).m).norm(), 1e-15);
}

TEST(Chanrep, NonTpKrausDiagnostic) {
  KrausSet ks{{2.0 * pauli(0)}};
  std::string diag;
  ptm_from_kraus(ks, &diag);
  EXPECT_FALSE(diag.empty());
}

TEST(Chanrep, ChoiOfIdentityIsOmega) {
  const ChoiState c = choi_from_ptm(PauliTransferMatrix());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(c.m);
  EXPECT_NEAR(es.eigenvalues()(3), 1.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues().head<3>().cwiseAbs().maxCoeff(), 0.0, 1e-14);
  EXPECT_NEAR(c.m.trace().real(), 1.0, 1e-14);
}

TEST(Chanrep, ChoiOfPauliChannelMatchesClosedForm) {
  // diag(1, l1, l2, l3): entries (1 + l3)/4 on the outer diagonal, (l1 + l2)/4 on the anti-corner.
  const double l1 = 0.3, l2 = -0.2, l3 = 0.5;
  const Mat4c c = choi_from_ptm(PauliTransferMatrix::diagonal(l1, l2, l3)).m;
  EXPECT_NEAR(c(0, 0).real(), (1 + l3) / 4, 1e-15);
  EXPECT_NEAR(c(1, 1).real(), (1 - l3) / 4, 1e-15);
  EXPECT_NEAR(c(0, 3).real(), (l1 + l2) / 4, 1e-15);
  EXPECT_NEAR(c(1, 2).real(), (l1 - l2) / 4, 1e-15);
}

TEST(Chanrep, RankThreeNonUnitalChoiTrace) {
  const PauliTransferMatrix e = PauliTransferMatrix::affine(Vec3(0, 0, 2.0 / 3), Vec3(-1.0 / 3, -1.0 / 3, 1.0 / 3).asDiagonal());
  const ChoiState c = choi_from_ptm(e);
  Eigen::SelfAdjointEigenSolver<Mat4c> es(c.m);
  EXPECT_NEAR(es.eigenvalues().sum(), 1.0, 1e-14);
  EXPECT_EQ(is_cptp(e).kraus_rank, 3);
}

TEST(Chanrep, KrausFromChoiRoundTrip) {
  std::mt19937 rng(11);
  for (int k = 0; k < 50; ++k) {
    const PauliTransferMatrix e = test::random_channel(rng, 1 + k % 4);
    const KrausSet ks = kraus_from_choi(choi_from_ptm(e));
    EXPECT_LT((ptm_from_kraus(ks).m - e.m).norm(), 1e-10);
    EXPECT_LT((ks.completeness() - Mat2c::Identity()).norm(), 1e-10);
  }
}

TEST(Chanrep, NotGateKrausRankThree) {
  const KrausSet ks = kraus_from_choi(choi_from_ptm(PauliTransferMatrix::diagonal(-1.0 / 3, -1.0 / 3, -1.0 / 3)));
  ASSERT_EQ(ks.ops.size(), 3u);
  // The three Choi eigenvalues coincide, so the basis inside the eigenspace
  // is arbitrary. Only the missing identity component is fixed.
  Mat2c sum = Mat2c::Zero();
  for (const auto& k : ks.ops) {
    EXPECT_LT(std::abs(k.trace()), 1e-10);
    sum += k.adjoint() * k;
  }
  EXPECT_LT((sum - Mat2c::Identity()).norm(), 1e-10);
}

TEST(Chanrep, TotalDepolarizingFullRank) {
  EXPECT_EQ(kraus_from_choi(choi_from_ptm(PauliTransferMatrix::diagonal(0, 0, 0))).ops.size(), 4u);
}

TEST(Chanrep, CptpChecks) {
  const CptpReport id = is_cptp(PauliTransferMatrix());
  EXPECT_TRUE(id.tp && id.cp && id.unital);
  EXPECT_EQ(id.kraus_rank, 1);
  EXPECT_NEAR(id.det, 1.0, 1e-15);
  EXPECT_FALSE(is_cptp(PauliTransferMatrix::diagonal(1, 1, -1)).cp);
  const CptpReport anot = is_cptp(PauliTransferMatrix::diagonal(-1.0 / 3, -1.0 / 3, -1.0 / 3));
  EXPECT_TRUE(anot.cp);
  EXPECT_EQ(anot.kraus_rank, 3);
}

TEST(Chanrep, Apply) {
  DensityMatrix rho = DensityMatrix::from_bloch(Vec3(0.3, -0.4, 0.5));
  EXPECT_LT((apply(PauliTransferMatrix(), rho).m - rho.m).norm(), 1e-15);
  EXPECT_LT((apply(PauliTransferMatrix::diagonal(0, 0, 0), rho).m - Mat2c::Identity() / 2.0).norm(), 1e-15);
  const double x = std::exp(-0.7);
  const DensityMatrix out = apply(PauliTransferMatrix::diagonal(x, x, 1), rho);
  EXPECT_NEAR(std::abs(out.m(0, 1) - x * rho.m(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.m(0, 0) - rho.m(0, 0)), 0.0, 1e-15);
}

TEST(Chanrep, Compose) {
  const PauliTransferMatrix e = PauliTransferMatrix::diagonal(0.2, 0.3, 0.4);
  EXPECT_LT((compose(e, PauliTransferMatrix()).m - e.m).norm(), 1e-15);
  const PauliTransferMatrix uz = PauliTransferMatrix::diagonal(-1, -1, 1);
  EXPECT_LT((compose(uz, e).m - PauliTransferMatrix::diagonal(-0.2, -0.3, 0.4).m).norm(), 1e-15);
  std::mt19937 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto a = test::random_channel(rng, 3), b = test::random_channel(rng, 2);
    EXPECT_NEAR(compose(a, b).det(), a.det() * b.det(), 1e-13);
  }
}

TEST(Chanrep, Adjoint) {
  std::mt19937 rng(6);
  const auto e = test::random_channel(rng, 4);
  EXPECT_LT((adjoint(adjoint(e)).m - e.m).norm(), 1e-15);
  const auto shifted = PauliTransferMatrix::affine(Vec3(0.5, 0, 0), Mat3::Identity() * 0.4);
  const auto adj = adjoint(shifted);
  EXPECT_TRUE(adj.is_unital());
  EXPECT_FALSE(adj.is_tp());
  EXPECT_EQ(adjoint(PauliTransferMatrix::diagonal(0.1, 0.2, 0.3)).m.col(0), Vec4(1, 0, 0, 0));
}

TEST(Chanrep, UnitaryChannel) {
  const auto u = unitary_channel(pauli(3));
  EXPECT_LT((u.m - PauliTransferMatrix::diagonal(-1, -1, 1).m).norm(), 1e-15);
}
