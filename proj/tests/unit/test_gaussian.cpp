#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "divischan/gaussian.hpp"

using namespace divischan;

namespace {

GaussianForm delta1(double alpha, double beta, double e1, double e2) {
  GaussianForm f;
  f.kind = FormKind::DeltaI;
  f.alpha = alpha;
  f.beta = beta;
  f.e = {e1, e2, 0};
  return f;
}

GaussianForm delta2(double alpha, double beta, double gamma, double eta) {
  GaussianForm f;
  f.kind = FormKind::DeltaII;
  f.alpha = alpha;
  f.beta = beta;
  f.gamma = gamma;
  f.eta = eta;
  return f;
}

}  // namespace

TEST(TpHp, DeltaI) {
  GaussianForm f = delta1(1, 1, 1, 1);
  f.d = {0.4, -0.2};
  const auto g = enforce_tp_hp(f);
  EXPECT_DOUBLE_EQ(g.e[2], 0.25);
  // d1 is an output displacement and is kept; d2 follows from it
  EXPECT_EQ(g.d[0], 0.4);
  EXPECT_DOUBLE_EQ(g.d[1], 0.2);
}

TEST(TpHp, DeltaIIEtaZero) {
  GaussianForm f = delta2(1, 1, 1, 0);
  f.e = {1, 0.5, 3};
  f.d = {0.3, 0.7};
  const auto g = enforce_tp_hp(f);
  EXPECT_EQ(g.e[2], 0);
  EXPECT_EQ(g.d[1], 0);
}

TEST(TpHp, InvalidForms) {
  GaussianForm gf;
  EXPECT_THROW(enforce_tp_hp(gf), InvalidForm);  // b3 = 0
  gf.b = {0, 1, 1, 0};
  gf.e = {1, 0, 0};
  EXPECT_THROW(enforce_tp_hp(gf), InvalidForm);
  EXPECT_THROW(enforce_tp_hp(delta1(1, 0, 1, 0)), InvalidForm);
  EXPECT_THROW(enforce_tp_hp(delta1(1, 1, 0, 0)), InvalidForm);
  EXPECT_THROW(enforce_tp_hp(delta2(1, 1, 0, 1)), InvalidForm);
}

TEST(Tuple, DeltaIIParity) {
  const auto t = tuple_from_form(enforce_tp_hp(delta2(1, 1, 1, 1)));
  EXPECT_LT((t.t + Mat2::Identity()).norm(), 1e-15);
  EXPECT_LT(t.n.norm(), 1e-15);
  EXPECT_LT(t.tau.norm(), 1e-15);
  EXPECT_LT(cp_matrix(t).norm(), 1e-15);
  EXPECT_TRUE(is_gaussian_unitary(delta2(1, 1, 1, 1)));
}

TEST(Tuple, SingularForms) {
  GaussianForm gf;
  gf.b = {0.3, 0, 1.2, -0.4};
  EXPECT_EQ(singular_class(tuple_from_form(gf)), SingularClass::A2);
  GaussianForm a1 = delta1(0, 1, 1, 0);
  a1.a = {2, 0, 0};
  a1.b = {0.5, 0, 0.3, 0.1};
  EXPECT_EQ(singular_class(tuple_from_form(enforce_tp_hp(a1))), SingularClass::A1);
  EXPECT_EQ(singular_class(GaussianTuple{Mat2::Zero(), Mat2::Zero(), Vec2::Zero()}), SingularClass::A1);
}

TEST(Cp, IdentityAndA1Rule) {
  EXPECT_TRUE(is_cp(GaussianTuple{}));
  GaussianForm f = delta1(0, 1, 2, 0);
  f.a = {1, 0, 0};
  EXPECT_FALSE(is_cp(tuple_from_form(enforce_tp_hp(f))));
  EXPECT_EQ(is_cp_closed_form(enforce_tp_hp(f)), std::optional<bool>(false));
  f.e[0] = 1;
  f.a[0] = 2;
  EXPECT_TRUE(is_cp(tuple_from_form(enforce_tp_hp(f))));
  EXPECT_EQ(is_cp_closed_form(enforce_tp_hp(f)), std::optional<bool>(true));
}

TEST(Cp, ClosedFormAgreesOnRandomDeltaI) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  int agree = 0, total = 0;
  for (int k = 0; k < 2000; ++k) {
    GaussianForm f = delta1(u(rng), u(rng), std::abs(u(rng)) + 0.05, u(rng));
    if (std::abs(f.beta) < 0.05) continue;
    f.a = {u(rng), u(rng), u(rng)};
    f.b = {u(rng), u(rng), u(rng), u(rng)};
    f = enforce_tp_hp(f);
    const double margin = cp_margin(tuple_from_form(f));
    if (std::abs(margin) < 1e-9) continue;
    ++total;
    agree += (margin > 0) == *is_cp_closed_form(f);
  }
  EXPECT_EQ(agree, total);
}

TEST(Apply, A1MapsToSingleState) {
  GaussianForm f = delta1(0, 1, 1, 0);
  f.a = {2, 0, 0};
  f.b = {0.5, 0, 0.3, 0.1};
  f.c = {0.7, 0.2};
  f = enforce_tp_hp(f);
  const auto t = tuple_from_form(f);
  GaussianState s;
  s.sigma << 2, 0.3, 0.3, 1;
  s.d << 1, -1;
  const auto out = apply_to_gaussian(t, s);
  EXPECT_LT((out.sigma - t.n).norm(), 1e-14);
  EXPECT_LT((out.d - Vec2(0, -0.7)).norm(), 1e-14);
}

TEST(Apply, A2ClosedFormEntries) {
  // DeltaI with e2 = 0: first row of the final covariance is independent of the input
  GaussianForm f = delta1(0.6, 1.3, 1.7, 0);
  f.a = {0.4, 0.2, 0.5};
  f.b = {0.3, -0.2, 0.8, 0.1};
  f = enforce_tp_hp(f);
  const double ab = f.alpha / f.beta, e1 = f.e[0];
  const auto out = apply_to_gaussian(tuple_from_form(f), GaussianState{});
  EXPECT_NEAR(out.sigma(0, 0), 1 / (2 * e1), 1e-14);
  EXPECT_NEAR(out.sigma(0, 1), -ab * f.b[2] / (2 * e1) - f.b[0] / (2 * e1), 1e-14);
}

TEST(Unitary, Lemma) {
  EXPECT_FALSE(is_gaussian_unitary(delta1(1, 1, 1, 0)));
  EXPECT_TRUE(is_gaussian_unitary(delta2(2, 1, 1, 0.5)));
  EXPECT_FALSE(is_gaussian_unitary(delta2(2, 1, 1, 0.7)));
  GaussianForm gf;
  gf.b = {0.4, 1.1, 1.1, -0.3};
  EXPECT_TRUE(is_gaussian_unitary(gf));
  gf.a[0] = 0.1;
  EXPECT_FALSE(is_gaussian_unitary(gf));
}

TEST(Concat, Homomorphism) {
  GaussianForm gf;
  gf.a = {0.4, 0.1, 0.6};
  gf.b = {0.3, -0.5, 0.9, 0.2};
  gf.c = {0.1, -0.3};
  GaussianForm d1 = delta1(0.5, 1.2, 0.8, 0.3);
  d1.a = {0.7, -0.2, 0.9};
  d1.b = {0.1, 0.4, -0.3, 0.6};
  d1.c = {0.2, 0.5};
  for (const auto& [x, y] : {std::pair{gf, d1}, {d1, gf}, {d1, d1}, {gf, gf}}) {
    const GaussianForm f = concat(x, y);
    const auto want = compose(tuple_from_form(enforce_tp_hp(x)), tuple_from_form(enforce_tp_hp(y)));
    const auto got = tuple_from_form(f);
    EXPECT_LT((got.t - want.t).norm(), 1e-12);
    EXPECT_LT((got.n - want.n).norm(), 1e-12);
    EXPECT_LT((got.tau - want.tau).norm(), 1e-12);
  }
}

TEST(Concat, TableRowsOneAndTwo) {
  GaussianForm au;
  au.b = {0.3, 0.8, 0.8, -0.2};
  au.c = {0.1, 0.4};
  GaussianForm da = delta1(0, 1, 1.1, 0.4);
  da.a = {0.5, 0, 0};
  da.b = {0.2, 0.6, 0, 0};
  EXPECT_EQ(form_label(au), "A_U");
  EXPECT_EQ(form_label(enforce_tp_hp(da)), "delta_A2^alpha");
  EXPECT_EQ(form_label(concat(da, au)), "A_A2");
  EXPECT_EQ(form_label(concat(au, da)), "delta_A2^alpha");
}

TEST(Concat, UndampedIntermediateRejected) {
  // a position-only delta followed by a kernel with no damping in the sum coordinate
  GaussianForm gf;
  gf.b = {0, 1, 1, 0};
  gf.a = {0, 0, 0};
  GaussianForm bad = gf;
  bad.a = {0, 0, -1};  // growing Gaussian in the intermediate position
  EXPECT_THROW(concat(bad, bad), NonIntegrable);
}

TEST(Master, ConstantDeltaII) {
  std::vector<FormSample> path;
  for (int k = 0; k < 5; ++k) {
    GaussianForm f = delta2(1.5, 1, 1, 2);
    f.a = {0.3, 0.1, 0.2};
    f.b = {0.4, 0.1, 0.2, 0.3};
    path.push_back({0.1 * k, f});
  }
  const auto r = master_equation(FormKind::DeltaII, path);
  ASSERT_TRUE(r.exists);
  for (const auto& col : r.coefficients.values)
    for (const cplx& v : col) EXPECT_LT(std::abs(v), 1e-12);
}

TEST(Master, RatioViolated) {
  std::vector<FormSample> path;
  for (int k = 0; k < 5; ++k) {
    GaussianForm f = delta1(2, 1, 1, 1);
    f.c = {0.1 * k, 0};
    path.push_back({0.1 * k, f});
  }
  EXPECT_FALSE(master_equation(FormKind::DeltaI, path).exists);
}

TEST(Master, DeltaILinearE1) {
  std::vector<FormSample> path;
  const double h = 0.01;
  for (int k = 0; k <= 100; ++k) path.push_back({h * k, delta1(2, 1, 1 + h * k, 1)});
  const auto r = master_equation(FormKind::DeltaI, path);
  ASSERT_TRUE(r.exists);
  for (size_t i = 0; i < path.size(); ++i) {
    const double t = path[i].t;
    EXPECT_NEAR(r.coefficients.values[0][i].real(), 1 / (1 + t), 1e-12);  // L_c
    EXPECT_NEAR(r.coefficients.values[7][i].real(), 1 / (1 + t), 1e-12);  // Y_rr
    EXPECT_NEAR(r.coefficients.values[3][i].real(), 1 / (4 * (1 + t) * (1 + t)), 1e-12);  // X_rr
  }
}

TEST(Master, SingularSampleHasNone) {
  std::vector<FormSample> path;
  for (int k = 0; k < 3; ++k) path.push_back({0.1 * k, delta1(0, 1, 1, 0)});
  const auto r = master_equation(FormKind::DeltaI, path);
  EXPECT_FALSE(r.exists);
  EXPECT_NE(r.reason.find("singular"), std::string::npos);
}
