#include "divischan/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace divischan {

const char* to_string(FormKind k) {
  switch (k) {
    case FormKind::GF: return "gf";
    case FormKind::DeltaI: return "delta1";
    case FormKind::DeltaII: return "delta2";
  }
  return "?";
}

const char* to_string(SingularClass s) {
  switch (s) {
    case SingularClass::NonSingular: return "nonsingular";
    case SingularClass::A1: return "A1";
    case SingularClass::A2: return "A2";
  }
  return "?";
}

Mat2 symplectic_omega() {
  Mat2 o;
  o << 0, 1, -1, 0;
  return o;
}

double GaussianForm::normalization() const {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case FormKind::GF: return std::abs(b[2]) / (2 * pi);
    case FormKind::DeltaI: return std::abs(beta) * std::sqrt(e[0] / pi) * std::exp(-d[0] * d[0] / (4 * e[0]));
    case FormKind::DeltaII: return std::abs(beta * gamma);
  }
  return 0;
}

bool GaussianState::valid(double tol) const {
  if (std::abs(sigma(0, 1) - sigma(1, 0)) > tol) return false;
  Eigen::Matrix2cd m = sigma.cast<cplx>() + cplx(0, 0.5) * symplectic_omega().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

GaussianForm enforce_tp_hp(const GaussianForm& raw) {
  GaussianForm f = raw;
  switch (f.kind) {
    case FormKind::GF:
      if (f.b[2] == 0) throw InvalidForm("gf: b3 must be nonzero");
      for (double v : f.e)
        if (v != 0) throw InvalidForm("gf: e coefficients are not allowed");
      for (double v : f.d)
        if (v != 0) throw InvalidForm("gf: d coefficients are not allowed");
      f.alpha = f.beta = f.gamma = f.eta = 0;
      break;
    case FormKind::DeltaI:
      if (f.beta == 0) throw InvalidForm("delta1: beta must be nonzero");
      if (!(f.e[0] > 0)) throw InvalidForm("delta1: e1 must be positive");
      f.e[2] = f.e[1] * f.e[1] / (4 * f.e[0]);
      // d1 survives as a displacement of the output position
      f.d[1] = f.e[1] * f.d[0] / (2 * f.e[0]);
      f.gamma = f.eta = 0;
      break;
    case FormKind::DeltaII: {
      if (f.beta == 0 || f.gamma == 0) throw InvalidForm("delta2: beta and gamma must be nonzero");
      const double q = f.eta / f.gamma;
      f.e[2] = -(f.e[0] * q * q + f.e[1] * q);
      f.d[1] = -f.d[0] * q;
      break;
    }
  }
  return f;
}

GaussianTuple tuple_from_form(const GaussianForm& f) {
  GaussianTuple out;
  const auto& [a1, a2, a3] = f.a;
  const auto& [b1, b2, b3, b4] = f.b;
  const auto& [c1, c2] = f.c;
  switch (f.kind) {
    case FormKind::GF: {
      if (b3 == 0) throw InvalidForm("gf: b3 must be nonzero");
      out.t << -b4 / b3, 1 / b3, b1 * b4 / b3 - b2, -b1 / b3;
      const double n12 = a2 / b3 - 2 * a3 * b1 / (b3 * b3);
      out.n << 2 * a3 / (b3 * b3), n12, n12, -2 * (-a3 * b1 * b1 / (b3 * b3) + a2 * b1 / b3 - a1);
      out.tau << -c2 / b3, b1 * c2 / b3 - c1;
      break;
    }
    case FormKind::DeltaI: {
      if (f.beta == 0 || !(f.e[0] > 0)) throw InvalidForm("delta1: needs beta != 0 and e1 > 0");
      const double e1 = f.e[0], e2 = f.e[1];
      const double ab = f.alpha / f.beta;
      const double p11 = -(ab * ab * (a3 + b3 * b3 / (4 * e1)) + ab * (a2 + 0.5 * b1 * b3 / e1) + a1 + b1 * b1 / (4 * e1));
      const double p12 = -(ab * b3 / (2 * e1) + b1 / (2 * e1));
      const double p22 = -1 / (4 * e1);
      const double phi1 = ab * (b4 - b3 * e2 / (2 * e1)) - b1 * e2 / (2 * e1) + b2;
      out.t << e2 / (2 * e1), 0, phi1, -ab;
      // The off-diagonal entry is P12 itself; see the notes in the README.
      out.n << -2 * p22, p12, p12, -2 * p11;
      out.tau << -f.d[0] / (2 * e1), (b1 + ab * b3) * f.d[0] / (2 * e1) - (ab * c2 + c1);
      break;
    }
    case FormKind::DeltaII: {
      if (f.beta == 0 || f.gamma == 0) throw InvalidForm("delta2: needs beta, gamma != 0");
      const double ab = f.alpha / f.beta, q = f.eta / f.gamma;
      const double p11 = -(ab * ab * a3 + ab * a2 + a1);
      const double phi1 = ab * q * b3 + ab * b4 + q * b1 + b2;
      out.t << -q, 0, phi1, -ab;
      out.n << 0, 0, 0, -2 * p11;
      out.tau << 0, -(ab * c2 + c1);
      break;
    }
  }
  return out;
}

Eigen::Matrix2cd cp_matrix(const GaussianTuple& t) {
  const Mat2 om = symplectic_omega();
  return t.n.cast<cplx>() + cplx(0, 1) * om.cast<cplx>() - cplx(0, 1) * (t.t * om * t.t.transpose()).cast<cplx>();
}

double cp_margin(const GaussianTuple& t) {
  Eigen::Matrix2cd c = cp_matrix(t);
  c = (0.5 * (c + c.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_cp(const GaussianTuple& t, double tol) { return cp_margin(t) >= -tol; }

std::optional<bool> is_cp_closed_form(const GaussianForm& f) {
  const auto& [a1, a2, a3] = f.a;
  const double b1 = f.b[0], b3 = f.b[2];
  const double ab = f.alpha / f.beta;
  if (f.kind == FormKind::DeltaI) {
    const double e1 = f.e[0], e2 = f.e[1];
    const double al = f.alpha, be = f.beta;
    const double p11 = -(ab * ab * (a3 + b3 * b3 / (4 * e1)) + ab * (a2 + 0.5 * b1 * b3 / e1) + a1 + b1 * b1 / (4 * e1));
    const double p12 = -(ab * b3 / (2 * e1) + b1 / (2 * e1));
    const double p22 = -1 / (4 * e1);
    // P12 enters squared without the factor 4, matching N12 = P12.
    const double root = std::sqrt(al * al * e2 * e2 + 4 * al * be * e2 * e1 +
                                  4 * be * be * e1 * e1 * (p12 * p12 + sqr(p11 - p22) + 1)) /
                        (2 * be * e1);
    const double rhs = p11 + p22;
    return root >= rhs && -root >= rhs;
  }
  if (f.kind == FormKind::DeltaII) {
    const double be = f.beta, ga = f.gamma;
    const double p11 = -(ab * ab * a3 + ab * a2 + a1);
    const double root = std::sqrt(sqr(be * ga - f.alpha * f.eta) + be * be * ga * ga * p11 * p11) / (be * ga);
    return root - p11 >= 0 && -root - p11 >= 0;
  }
  return std::nullopt;
}

GaussianState apply_to_gaussian(const GaussianTuple& t, const GaussianState& s) {
  GaussianState out;
  out.sigma = t.t * s.sigma * t.t.transpose() + t.n;
  out.d = t.t * s.d + t.tau;
  return out;
}

SingularClass singular_class(const GaussianTuple& t, double rank_tol) {
  Eigen::JacobiSVD<Mat2> svd(t.t);
  const Vec2 sv = svd.singularValues();
  if (sv(0) == 0) return SingularClass::A1;
  const int rank = static_cast<int>((sv.array() >= rank_tol * sv(0)).count());
  if (rank == 2) return SingularClass::NonSingular;
  return rank == 1 ? SingularClass::A2 : SingularClass::A1;
}

bool is_gaussian_unitary(const GaussianForm& f, double tol) {
  if (f.kind == FormKind::DeltaI) return false;
  for (double v : f.a)
    if (std::abs(v) > tol) return false;
  if (f.kind == FormKind::GF) return std::abs(f.b[1] - f.b[2]) <= tol * std::max(1.0, std::abs(f.b[2]));
  return std::abs(f.alpha * f.eta - f.beta * f.gamma) <= tol * std::max(1.0, std::abs(f.beta * f.gamma));
}

GaussianTuple compose(const GaussianTuple& t1, const GaussianTuple& t2) {
  GaussianTuple out;
  out.t = t1.t * t2.t;
  out.n = t1.t * t2.n * t1.t.transpose() + t1.n;
  out.tau = t1.t * t2.tau + t1.tau;
  return out;
}

std::string form_label(const GaussianForm& f, double tol) {
  auto zero = [&](double v) { return std::abs(v) <= tol; };
  switch (f.kind) {
    case FormKind::GF:
      if (is_gaussian_unitary(f, tol)) return "A_U";
      return zero(f.b[1]) ? "A_A2" : "GF";
    case FormKind::DeltaII:
      return is_gaussian_unitary(f, tol) ? "delta_U" : "delta2";
    case FormKind::DeltaI: {
      const bool za = zero(f.alpha), ze = zero(f.e[1]);
      if (za && ze && zero(f.b[1])) return "delta_A1";
      if (za && ze) return "delta_A2^alpha,e2";
      if (za) return "delta_A2^alpha";
      if (ze) return "delta_A2^e2";
      return "delta1";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Master equations

namespace {

std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& f) {
  const size_t n = t.size();
  std::vector<double> df(n);
  for (size_t i = 0; i < n; ++i) {
    if (i == 0)
      df[i] = (f[1] - f[0]) / (t[1] - t[0]);
    else if (i + 1 == n)
      df[i] = (f[n - 1] - f[n - 2]) / (t[n - 1] - t[n - 2]);
    else
      df[i] = (f[i + 1] - f[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  return df;
}

}  // namespace

MasterEquationResult master_equation(FormKind kind, const std::vector<FormSample>& path) {
  MasterEquationResult res;
  if (kind == FormKind::GF) throw InvalidForm("master_equation: only delta forms are supported");
  if (path.size() < 2) throw InvalidForm("master_equation: need at least two samples");
  const size_t n = path.size();
  std::vector<double> t(n), A(n), B(n), a1(n), a2(n), a3(n), e1(n), e2(n), l1(n), l2(n), l3(n), lam(n);
  for (size_t i = 0; i < n; ++i) {
    const GaussianForm& f = path[i].form;
    if (f.kind != kind) throw InvalidForm("master_equation: sample kind differs from the requested kind");
    if (singular_class(tuple_from_form(f)) != SingularClass::NonSingular) {
      res.reason = "singular sample at t = " + std::to_string(path[i].t);
      return res;
    }
    t[i] = path[i].t;
    A[i] = f.alpha / f.beta;
    B[i] = kind == FormKind::DeltaII ? f.gamma / f.eta : 0.0;
    a1[i] = f.a[0];
    a2[i] = f.a[1];
    a3[i] = f.a[2];
    e1[i] = f.e[0];
    e2[i] = f.e[1];
    l1[i] = f.b[0] + A[i] * f.b[2];
    l2[i] = f.b[1] + A[i] * f.b[3];
    l3[i] = f.a[0] + A[i] * f.a[1] + A[i] * A[i] * f.a[2];
    lam[i] = f.b[0] + A[i] * f.b[2] + B[i] * (f.b[1] + A[i] * f.b[3]);
  }

  // c(t) = c1 + A c2 must be proportional to A(t).
  const double r0 = (path[0].form.c[0] + A[0] * path[0].form.c[1]) / A[0];
  for (size_t i = 1; i < n; ++i) {
    const double r = (path[i].form.c[0] + A[i] * path[i].form.c[1]) / A[i];
    if (std::abs(r - r0) > 1e-6 * std::max(1.0, std::abs(r0))) {
      res.reason = "c(t) is not proportional to A(t)";
      return res;
    }
  }
  res.exists = true;
  res.ratio = r0;

  const auto dA = derivative(t, A), dB = derivative(t, B), da1 = derivative(t, a1), da2 = derivative(t, a2),
             da3 = derivative(t, a3), de1 = derivative(t, e1), de2 = derivative(t, e2), dl1 = derivative(t, l1),
             dl2 = derivative(t, l2), dl3 = derivative(t, l3), dlam = derivative(t, lam);
  auto& v = res.coefficients.values;
  res.coefficients.t = t;
  for (auto& col : v) col.assign(n, cplx(0));
  const cplx I(0, 1);
  enum { Lc, Xxx, Xxr, Xrr, Yxx, Yxr, Yrx, Yrr, Zxx, Zxr, Zrr };
  for (size_t i = 0; i < n; ++i) {
    const double ra = dA[i] / A[i];
    v[Yxx][i] = ra;
    if (kind == FormKind::DeltaI) {
      const double E1 = e1[i], E2 = e2[i];
      v[Lc][i] = v[Yrr][i] = de1[i] / E1 - de2[i] / E2;
      v[Xrr][i] = de1[i] / (4 * E1 * E1) - de2[i] / (2 * E1 * E2);
      v[Yxr][i] = I * (l1[i] * de2[i] / (E1 * E2) + l2[i] * dA[i] / (E2 * A[i]) - l1[i] * de1[i] / (2 * E1 * E1) -
                       dl2[i] / E2);
      v[Zxx][i] = 0.5 * l1[i] * l1[i] * (de2[i] / (E1 * E2) - de1[i] / (2 * E1 * E1)) +
                  l1[i] / E2 * (l2[i] * ra - dl2[i]) + 2 * l3[i] * ra - dl3[i];
      v[Zxr][i] = I * (ra * (E1 * l2[i] / E2 - 0.5 * l1[i]) + 0.5 * dl1[i] - dl2[i] * E1 / E2 +
                       0.5 * l2[i] * (de2[i] / E2 - de1[i] / E1));
    } else {
      v[Yrr][i] = dB[i] / B[i];
      // the squared A multiplies the derivative of a3
      v[Zxx][i] = a2[i] * dA[i] + 2 * a1[i] * ra - A[i] * A[i] * da3[i] - A[i] * da2[i] - da1[i];
      v[Zxr][i] = I * (0.5 * dlam[i] - 0.5 * lam[i] * (ra + dB[i] / B[i]));
    }
  }
  return res;
}

}  // namespace divischan
