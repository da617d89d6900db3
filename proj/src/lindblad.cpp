#include "divischan/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace divischan {

namespace {

constexpr double kPi = std::numbers::pi;

// One block of the real Jordan-like decomposition of Delta.
struct SpecBlock {
  enum Kind { positive, negative_pair, complex_pair, positive_pair } kind;
  double modulus;  // |eigenvalue|
  double phase;    // arg for complex pairs
  int col;         // first column in the real basis
};

struct RealSpectrum {
  Mat3 basis = Mat3::Identity();
  std::vector<SpecBlock> blocks;
  CulverScreen screen;
};

RealSpectrum analyse(const Mat3& delta, const Tolerance& tol) {
  RealSpectrum rs;
  Eigen::EigenSolver<Mat3> es(delta);
  const Eigen::Vector3cd ev = es.eigenvalues();
  const Eigen::Matrix3cd vec = es.eigenvectors();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  for (int i = 0; i < 3; ++i)
    if (std::abs(ev(i)) <= 1e-12 * scale) {
      rs.screen.singular = true;
      rs.screen.reason = "singular spectrum";
      return rs;
    }

  std::array<bool, 3> used{false, false, false};
  int col = 0;
  auto put_real = [&](int i) {
    Vec3 v = vec.col(i).real();
    if (v.norm() < 1e-12) v = vec.col(i).imag();
    rs.basis.col(col) = v.normalized();
  };

  // complex conjugate pairs
  for (int i = 0; i < 3; ++i) {
    if (used[i] || std::abs(ev(i).imag()) <= tol.pair_tol * std::abs(ev(i))) continue;
    int j = -1;
    for (int k = 0; k < 3; ++k)
      if (k != i && !used[k] && std::abs(ev(k) - std::conj(ev(i))) <= tol.pair_tol * std::abs(ev(i))) j = k;
    if (j < 0) {
      rs.screen.reason = "unpaired complex eigenvalue";
      return rs;
    }
    const int up = ev(i).imag() > 0 ? i : j;
    used[i] = used[j] = true;
    rs.basis.col(col) = vec.col(up).real();
    rs.basis.col(col + 1) = vec.col(up).imag();
    rs.blocks.push_back({SpecBlock::complex_pair, std::abs(ev(up)), std::arg(ev(up)), col});
    col += 2;
  }

  // negative eigenvalues must pair up
  std::vector<int> neg, pos;
  for (int i = 0; i < 3; ++i) {
    if (used[i]) continue;
    (ev(i).real() < 0 ? neg : pos).push_back(i);
  }
  std::sort(neg.begin(), neg.end(), [&](int a, int b) { return ev(a).real() < ev(b).real(); });
  if (neg.size() % 2 == 1) {
    rs.screen.reason = "negative eigenvalue with odd multiplicity";
    return rs;
  }
  for (size_t p = 0; p + 1 < neg.size(); p += 2) {
    const double a = ev(neg[p]).real(), b = ev(neg[p + 1]).real();
    if (std::abs(a - b) > tol.pair_tol * std::abs(a)) {
      rs.screen.reason = "negative eigenvalues not degenerate";
      return rs;
    }
    // orthonormal pair spanning the degenerate eigenspace
    Eigen::Matrix<double, 3, 2> sub;
    sub.col(0) = vec.col(neg[p]).real();
    sub.col(1) = vec.col(neg[p + 1]).real();
    Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>> qr(sub);
    Eigen::Matrix<double, 3, 2> q = qr.householderQ() * Eigen::Matrix<double, 3, 2>::Identity();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> sv(sub);
    if (sv.singularValues()(1) < 1e-8 * sv.singularValues()(0)) {
      rs.screen.diagonalizable = false;
      rs.screen.reason = "defective negative eigenvalue";
      return rs;
    }
    // Gram-Schmidt in the given order keeps the result close to the
    // solver's eigenvectors; for a diagonal channel this is the unit basis.
    Vec3 x = sub.col(0).normalized();
    Vec3 y = (sub.col(1) - x.dot(sub.col(1)) * x).normalized();
    (void)q;
    rs.basis.col(col) = x;
    rs.basis.col(col + 1) = y;
    rs.blocks.push_back({SpecBlock::negative_pair, std::abs(0.5 * (a + b)), kPi, col});
    col += 2;
  }

  // positive eigenvalues; a degenerate couple can host rotation branches
  std::sort(pos.begin(), pos.end(), [&](int a, int b) { return ev(a).real() > ev(b).real(); });
  int paired = -1;
  for (size_t p = 0; p + 1 < pos.size(); ++p) {
    const double a = ev(pos[p]).real(), b = ev(pos[p + 1]).real();
    if (std::abs(a - b) <= tol.pair_tol * std::abs(a)) {
      paired = static_cast<int>(p);
      break;
    }
  }
  for (size_t p = 0; p < pos.size(); ++p) {
    if (paired >= 0 && static_cast<int>(p) == paired) {
      Vec3 x = vec.col(pos[p]).real().normalized();
      Vec3 y = vec.col(pos[p + 1]).real();
      y = (y - x.dot(y) * x).normalized();
      rs.basis.col(col) = x;
      rs.basis.col(col + 1) = y;
      rs.blocks.push_back({SpecBlock::positive_pair, 0.5 * (ev(pos[p]).real() + ev(pos[p + 1]).real()), 0, col});
      col += 2;
      ++p;
      continue;
    }
    put_real(pos[p]);
    rs.blocks.push_back({SpecBlock::positive, ev(pos[p]).real(), 0, col});
    col += 1;
  }

  Eigen::JacobiSVD<Mat3> svd(rs.basis);
  const double cond = svd.singularValues()(0) / std::max(svd.singularValues()(2), 1e-300);
  if (cond > 1e10) {
    rs.screen.diagonalizable = false;
    rs.screen.reason = "channel is not diagonalizable";
    return rs;
  }
  rs.screen.has_real_log = true;
  return rs;
}

// Block-diagonal logarithm in the real basis for a given branch offset.
Mat3 block_log(const RealSpectrum& rs, int k, bool& rotates) {
  Mat3 b = Mat3::Zero();
  rotates = false;
  for (const auto& blk : rs.blocks) {
    const int c = blk.col;
    const double l = std::log(blk.modulus);
    switch (blk.kind) {
      case SpecBlock::positive:
        b(c, c) = l;
        break;
      case SpecBlock::negative_pair:
      case SpecBlock::complex_pair:
      case SpecBlock::positive_pair: {
        double th = 0;
        if (blk.kind == SpecBlock::negative_pair) th = (2 * k + 1) * kPi;
        if (blk.kind == SpecBlock::complex_pair) th = blk.phase + 2 * kPi * k;
        if (blk.kind == SpecBlock::positive_pair) th = 2 * kPi * k;
        rotates = true;
        b(c, c) = b(c + 1, c + 1) = l;
        b(c, c + 1) = th;
        b(c + 1, c) = -th;
        break;
      }
    }
  }
  return b;
}

// phi(A) = sum_n A^n/(n+1)!, read off the exponential of an augmented matrix.
Mat3 phi_matrix(const Mat3& a) {
  Eigen::Matrix<double, 6, 6> aug = Eigen::Matrix<double, 6, 6>::Zero();
  aug.topLeftCorner<3, 3>() = a;
  aug.topRightCorner<3, 3>() = Mat3::Identity();
  Eigen::Matrix<double, 6, 6> ex = aug.exp();
  return ex.topRightCorner<3, 3>();
}

}  // namespace

CulverScreen culver_screen(const PauliTransferMatrix& e, const Tolerance& tol) {
  return analyse(e.delta(), tol).screen;
}

std::vector<GeneratorMatrix> real_logarithms(const PauliTransferMatrix& e, int k_window, const Tolerance& tol) {
  const RealSpectrum rs = analyse(e.delta(), tol);
  if (rs.screen.singular) throw SingularChannel("real_logarithms: " + rs.screen.reason);
  if (!rs.screen.diagonalizable) throw NonDiagonalizable("real_logarithms: " + rs.screen.reason);
  std::vector<GeneratorMatrix> out;
  if (!rs.screen.has_real_log) return out;

  const Mat3 pinv = rs.basis.inverse();
  const Vec3 t = e.t();
  auto make = [&](int k, bool tagged) {
    bool rot = false;
    Mat3 a = rs.basis * block_log(rs, k, rot) * pinv;
    GeneratorMatrix g;
    // exp([[0,0],[s,A]]) = [[1,0],[phi(A)s, e^A]]
    Vec3 s = phi_matrix(a).fullPivLu().solve(t);
    g.m.setZero();
    g.m.block<3, 1>(1, 0) = s;
    g.m.block<3, 3>(1, 1) = a;
    if (tagged) g.branch = k;
    return g;
  };

  bool rot = false;
  block_log(rs, 0, rot);
  if (!rot) {
    out.push_back(make(0, false));
    return out;
  }
  bool has_positive_pair_only = true;
  for (const auto& blk : rs.blocks)
    if (blk.kind == SpecBlock::negative_pair || blk.kind == SpecBlock::complex_pair) has_positive_pair_only = false;
  if (has_positive_pair_only) out.push_back(make(0, false));
  for (int k = -k_window; k <= k_window; ++k) {
    if (has_positive_pair_only && k == 0) continue;
    out.push_back(make(k, true));
  }
  return out;
}

double ccp_margin(const Mat4& l) {
  const Mat4c tau = choi_matrix(l);
  Eigen::Matrix<cplx, 4, 3> q = Eigen::Matrix<cplx, 4, 3>::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  q(0, 0) = r;
  q(3, 0) = -r;
  q(1, 1) = 1;
  q(2, 2) = 1;
  Mat3c proj = q.adjoint() * tau * q;
  proj = 0.5 * (proj + proj.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat3c> es(proj, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_ccp(const GeneratorMatrix& l, const Tolerance& tol) { return ccp_margin(l.m) >= -tol.tol; }

GeneratorMatrix build_generator(const Mat2c& h, const Mat3c& g) {
  const double r = 1.0 / std::sqrt(2.0);
  GeneratorMatrix out;
  out.m = pauli_matrix_of([&](const Mat2c& rho) {
    const cplx I(0, 1);
    Mat2c y = I * (rho * h - h * rho);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (g(i, j) == cplx(0)) continue;
        const Mat2c fi = r * pauli(i + 1), fj = r * pauli(j + 1);
        const Mat2c fjfi = fj.adjoint() * fi;
        y += g(i, j) * (fi * rho * fj.adjoint() - 0.5 * (fjfi * rho + rho * fjfi));
      }
    return y;
  });
  out.m.row(0).setZero();
  return out;
}

namespace {

// Parameters: h = sum_k p_k sigma_k (k = 1..3), then G diagonal (3 reals),
// then Re/Im of G_01, G_02, G_12.
void params_to_hg(const Eigen::Matrix<double, 12, 1>& p, Mat2c& h, Mat3c& g) {
  h = p(0) * pauli(1) + p(1) * pauli(2) + p(2) * pauli(3);
  g.setZero();
  for (int i = 0; i < 3; ++i) g(i, i) = p(3 + i);
  const int off[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    cplx z(p(6 + 2 * k), p(7 + 2 * k));
    g(off[k][0], off[k][1]) = z;
    g(off[k][1], off[k][0]) = std::conj(z);
  }
}

Eigen::Matrix<double, 12, 1> lower_rows(const Mat4& m) {
  Eigen::Matrix<double, 12, 1> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) v(4 * i + j) = m(i + 1, j);
  return v;
}

const Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>>& hg_solver() {
  static const Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>> lu = [] {
    Eigen::Matrix<double, 12, 12> a;
    for (int c = 0; c < 12; ++c) {
      Eigen::Matrix<double, 12, 1> p = Eigen::Matrix<double, 12, 1>::Unit(c);
      Mat2c h;
      Mat3c g;
      params_to_hg(p, h, g);
      a.col(c) = lower_rows(build_generator(h, g).m);
    }
    return Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>>(a);
  }();
  return lu;
}

}  // namespace

LindbladData hg_decomposition(const GeneratorMatrix& l) {
  const Eigen::Matrix<double, 12, 1> p = hg_solver().solve(lower_rows(l.m));
  LindbladData d;
  params_to_hg(p, d.h, d.g);
  Eigen::SelfAdjointEigenSolver<Mat3c> es(d.g, Eigen::EigenvaluesOnly);
  d.rates = es.eigenvalues().reverse();
  return d;
}

PauliTransferMatrix exp_generator(const GeneratorMatrix& l, double t) {
  Mat4 e = (t * l.m).exp();
  e.row(0) = Vec4(1, 0, 0, 0).transpose();
  return PauliTransferMatrix(e);
}

}  // namespace divischan
