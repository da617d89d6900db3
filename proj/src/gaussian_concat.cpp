// Closed-form composition of kernels. The integrand is kept as
//   prefactor * exp(u^T M u) * prod_k delta(d_k . u)
// over the augmented vector u = (xf, rf, xi, ri, x', r', 1). Each
// intermediate variable is removed either by solving a delta, by completing
// the square, or by a Fourier integral that produces a new delta.
#include <cmath>
#include <numbers>
#include <vector>

#include "divischan/gaussian.hpp"

namespace divischan {

namespace {

constexpr int kXf = 0, kRf = 1, kXi = 2, kRi = 3, kXp = 4, kRp = 5, kOne = 6, kN = 7;
constexpr double kZero = 1e-12;

using MatA = Eigen::Matrix<cplx, kN, kN>;
using VecA = Eigen::Matrix<double, kN, 1>;

struct Integrand {
  cplx prefactor = 1;
  MatA m = MatA::Zero();
  std::vector<VecA> deltas;

  void add(int p, int q, cplx c) {
    if (p == q) {
      m(p, p) += c;
    } else {
      m(p, q) += 0.5 * c;
      m(q, p) += 0.5 * c;
    }
  }

  // u -> S u'
  void substitute(const Eigen::Matrix<double, kN, kN>& s) {
    const MatA sc = s.cast<cplx>();
    m = (sc.transpose() * m * sc).eval();
    for (auto& d : deltas) d = (s.transpose() * d).eval();
  }

  double scale() const {
    double s = 0;
    for (int i = 0; i < kN; ++i)
      for (int j = 0; j < kN; ++j) s = std::max(s, std::abs(m(i, j)));
    return std::max(s, 1.0);
  }
};

// Embed a form as a physical kernel K(out; in). The standard delta forms use
// the mirrored input coordinates, so their inputs enter with a sign flip.
void embed(Integrand& g, const GaussianForm& f, int fx, int fr, int ix, int ir) {
  const double s = f.kind == FormKind::GF ? 1.0 : -1.0;
  const cplx I(0, 1);
  const auto& [a1, a2, a3] = f.a;
  const auto& [b1, b2, b3, b4] = f.b;
  const auto& [e1, e2, e3] = f.e;
  g.add(fx, fr, I * b1);
  g.add(fx, ir, I * s * b2);
  g.add(ix, fr, I * s * b3);
  g.add(ix, ir, I * b4);
  g.add(fx, kOne, I * f.c[0]);
  g.add(ix, kOne, I * s * f.c[1]);
  g.add(fx, fx, -a1);
  g.add(fx, ix, -s * a2);
  g.add(ix, ix, -a3);
  g.add(fr, fr, -e1);
  g.add(fr, ir, -s * e2);
  g.add(ir, ir, -e3);
  g.add(fr, kOne, -f.d[0]);
  g.add(ir, kOne, -s * f.d[1]);
  g.prefactor *= f.normalization();
  if (f.kind != FormKind::GF) {
    VecA d = VecA::Zero();
    d(fx) = f.alpha;
    d(ix) = -f.beta * s;
    g.deltas.push_back(d);
  }
  if (f.kind == FormKind::DeltaII) {
    VecA d = VecA::Zero();
    d(fr) = f.gamma;
    d(ir) = -f.eta * s;
    g.deltas.push_back(d);
  }
}

// Replace variable v by -(sum_{w != v} d_w u_w) / d_v.
void solve_delta(Integrand& g, int v, size_t k) {
  const VecA d = g.deltas[k];
  g.deltas.erase(g.deltas.begin() + static_cast<long>(k));
  Eigen::Matrix<double, kN, kN> s = Eigen::Matrix<double, kN, kN>::Identity();
  s.row(v) = -d.transpose() / d(v);
  s(v, v) = 0;
  g.substitute(s);
  g.prefactor /= std::abs(d(v));
}

void integrate(Integrand& g, int v) {
  const double sc = g.scale();
  // a delta containing v
  size_t best = g.deltas.size();
  double big = 0;
  for (size_t k = 0; k < g.deltas.size(); ++k) {
    const double c = std::abs(g.deltas[k](v)) / std::max(1.0, g.deltas[k].cwiseAbs().maxCoeff());
    if (c > kZero && c > big) {
      big = c;
      best = k;
    }
  }
  if (best < g.deltas.size()) {
    solve_delta(g, v, best);
    return;
  }

  const cplx q = -g.m(v, v);
  if (q.real() > kZero * sc) {
    // int exp(-q v^2 + B v) dv = sqrt(pi/q) exp(B^2 / 4q), B = 2 sum_w M_vw u_w
    const Eigen::Matrix<cplx, kN, 1> mv = g.m.col(v);
    for (int i = 0; i < kN; ++i)
      for (int j = 0; j < kN; ++j)
        if (i != v && j != v) g.m(i, j) += mv(i) * mv(j) / q;
    g.m.row(v).setZero();
    g.m.col(v).setZero();
    g.prefactor *= std::sqrt(std::numbers::pi / q);
    return;
  }
  if (std::abs(q) <= kZero * sc) {
    // purely oscillating in v: a Fourier integral gives 2 pi delta(k . u)
    VecA d = VecA::Zero();
    for (int w = 0; w < kN; ++w) {
      if (w == v) continue;
      const cplx c = 2.0 * g.m(v, w);
      if (std::abs(c.real()) > kZero * sc)
        throw NonIntegrable("concat: the intermediate integrand grows or decays linearly along a Fourier direction");
      d(w) = c.imag();
    }
    g.m.row(v).setZero();
    g.m.col(v).setZero();
    g.prefactor *= 2 * std::numbers::pi;
    if (d.head<kOne>().cwiseAbs().maxCoeff() <= kZero)
      throw NonIntegrable("concat: Fourier integral produced a delta at the origin");
    g.deltas.push_back(d);
    return;
  }
  throw NonIntegrable("concat: intermediate quadratic form is not damped");
}

void read_exponent(const Integrand& g, GaussianForm& f, double tol) {
  const MatA& m = g.m;
  auto two = [&](int p, int q) { return p == q ? m(p, p) : 2.0 * m(p, q); };
  auto real_part = [&](cplx v, const char* what) {
    if (std::abs(v.imag()) > tol) throw InvalidForm(std::string("concat: unexpected imaginary ") + what);
    return v.real();
  };
  auto imag_part = [&](cplx v, const char* what) {
    if (std::abs(v.real()) > tol) throw InvalidForm(std::string("concat: unexpected real ") + what);
    return v.imag();
  };
  f.a = {-real_part(two(kXf, kXf), "a1"), -real_part(two(kXf, kXi), "a2"), -real_part(two(kXi, kXi), "a3")};
  f.e = {-real_part(two(kRf, kRf), "e1"), -real_part(two(kRf, kRi), "e2"), -real_part(two(kRi, kRi), "e3")};
  f.b = {imag_part(two(kXf, kRf), "b1"), imag_part(two(kXf, kRi), "b2"), imag_part(two(kXi, kRf), "b3"),
         imag_part(two(kXi, kRi), "b4")};
  f.c = {imag_part(two(kXf, kOne), "c1"), imag_part(two(kXi, kOne), "c2")};
  f.d = {-real_part(two(kRf, kOne), "d1"), -real_part(two(kRi, kOne), "d2")};
  // x-r couplings must be purely oscillating; x-x and r-r purely damped
  for (auto [p, q] : {std::pair{kXf, kRf}, {kXf, kRi}, {kXi, kRf}, {kXi, kRi}})
    (void)imag_part(two(p, q), "x-r coupling");
}

}  // namespace

GaussianForm concat(const GaussianForm& f1_raw, const GaussianForm& f2_raw) {
  const GaussianForm f1 = enforce_tp_hp(f1_raw);
  const GaussianForm f2 = enforce_tp_hp(f2_raw);
  Integrand g;
  embed(g, f1, kXf, kRf, kXp, kRp);
  embed(g, f2, kXp, kRp, kXi, kRi);

  // Deltas first, then damped Gaussians, then Fourier integrals.
  std::vector<int> left = {kXp, kRp};
  while (!left.empty()) {
    size_t pick = 0;
    int rank = 3;
    for (size_t k = 0; k < left.size(); ++k) {
      const int v = left[k];
      int r = 2;
      for (const auto& d : g.deltas)
        if (std::abs(d(v)) > kZero) r = 0;
      if (r == 2 && -g.m(v, v).real() > kZero * g.scale()) r = 1;
      if (r < rank) {
        rank = r;
        pick = k;
      }
    }
    integrate(g, left[pick]);
    left.erase(left.begin() + static_cast<long>(pick));
  }

  for (const auto& d : g.deltas) {
    if (std::abs(d(kOne)) > kZero * std::max(1.0, d.cwiseAbs().maxCoeff()))
      throw InvalidForm("concat: resulting delta carries a displacement");
  }

  GaussianForm out;
  const double tol = 1e-9 * g.scale();
  Eigen::Matrix<double, kN, kN> s = Eigen::Matrix<double, kN, kN>::Identity();

  if (g.deltas.empty()) {
    out.kind = FormKind::GF;
  } else if (g.deltas.size() == 1) {
    const VecA d = g.deltas[0];
    if (std::abs(d(kRf)) > kZero || std::abs(d(kRi)) > kZero)
      throw InvalidForm("concat: single delta must constrain positions only");
    if (std::abs(d(kXi)) <= kZero) throw InvalidForm("concat: delta does not involve the input position");
    out.kind = FormKind::DeltaI;
    out.alpha = d(kXf) / d(kXi);
    out.beta = 1;
    g.prefactor /= std::abs(d(kXi));
    s(kXi, kXi) = 0;
    s(kXi, kXf) = -out.alpha;
  } else if (g.deltas.size() == 2) {
    // Solve (xi, rf) in terms of (xf, ri).
    Mat2 ds, dr;
    ds << g.deltas[0](kXi), g.deltas[0](kRf), g.deltas[1](kXi), g.deltas[1](kRf);
    dr << g.deltas[0](kXf), g.deltas[0](kRi), g.deltas[1](kXf), g.deltas[1](kRi);
    const double det = ds.determinant();
    if (std::abs(det) <= kZero) throw InvalidForm("concat: deltas cannot be solved for the input position and output sum");
    const Mat2 k = ds.inverse() * dr;
    if (std::abs(k(0, 1)) > kZero || std::abs(k(1, 0)) > kZero)
      throw InvalidForm("concat: deltas mix position and sum coordinates");
    out.kind = FormKind::DeltaII;
    out.alpha = k(0, 0);
    out.beta = 1;
    out.gamma = 1;
    out.eta = k(1, 1);
    g.prefactor /= std::abs(det);
    s(kXi, kXi) = 0;
    s(kXi, kXf) = -out.alpha;
    s(kRf, kRf) = 0;
    s(kRf, kRi) = -out.eta;
  } else {
    throw InvalidForm("concat: more than two deltas remain");
  }
  g.deltas.clear();
  if (out.kind != FormKind::GF) {
    g.substitute(s);
    // back to the mirrored input coordinates of the standard forms
    Eigen::Matrix<double, kN, kN> flip = Eigen::Matrix<double, kN, kN>::Identity();
    flip(kXi, kXi) = -1;
    flip(kRi, kRi) = -1;
    g.substitute(flip);
  }
  read_exponent(g, out, tol);
  if (out.kind == FormKind::GF) {
    for (double v : out.e)
      if (std::abs(v) > tol) throw InvalidForm("concat: GF result has sum-coordinate damping");
    for (double v : out.d)
      if (std::abs(v) > tol) throw InvalidForm("concat: GF result has sum-coordinate drift");
    out.e = {0, 0, 0};
    out.d = {0, 0};
  }

  const cplx norm = g.prefactor * std::exp(g.m(kOne, kOne));
  const double expect = out.normalization();
  if (std::abs(norm - expect) > 1e-6 * std::max(expect, 1e-300))
    throw InvalidForm("concat: result is not trace preserving");
  return out;
}

}  // namespace divischan
