#include "divischan/normalform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace divischan {

PauliTransferMatrix SpecialOrthogonalForm::d() const {
  return PauliTransferMatrix::affine(gamma, lambdas.asDiagonal().toDenseMatrix());
}

Vec3 LorentzForm::channel_lambdas() const {
  Mat4 ch = alpha * sigma * phi_t();
  return Vec3(ch(1, 1), ch(2, 2), ch(3, 3));
}

Mat4 minkowski() { return Vec4(1, -1, -1, -1).asDiagonal().toDenseMatrix(); }

PauliTransferMatrix rotation_ptm(const Mat3& r) {
  return PauliTransferMatrix::affine(Vec3::Zero(), r);
}

namespace {

// Rotation W in SO(k) maximising tr(A W) (orthogonal Procrustes with det fix).
Eigen::MatrixXd best_rotation(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd u = svd.matrixU(), v = svd.matrixV();
  Eigen::MatrixXd w = v * u.transpose();
  if (w.determinant() < 0) {
    v.col(v.cols() - 1) *= -1;
    w = v * u.transpose();
  }
  return w;
}

struct SoCandidate {
  Mat3 r1, r2;
  Vec3 lam;
  double score;
};

void align_degenerate(SoCandidate& c) {
  const double scale = std::max(1.0, c.lam.cwiseAbs().maxCoeff());
  std::vector<std::vector<int>> groups;
  std::array<bool, 3> used{false, false, false};
  for (int i = 0; i < 3; ++i) {
    if (used[i]) continue;
    std::vector<int> g{i};
    used[i] = true;
    for (int j = i + 1; j < 3; ++j)
      if (!used[j] && std::abs(c.lam(i) - c.lam(j)) <= 1e-12 * scale) {
        g.push_back(j);
        used[j] = true;
      }
    if (g.size() > 1) groups.push_back(g);
  }
  for (const auto& g : groups) {
    const int k = static_cast<int>(g.size());
    Eigen::MatrixXd a(k, k);
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q) a(p, q) = c.r1(g[p], g[q]) + c.r2(g[q], g[p]);
    Eigen::MatrixXd w = best_rotation(a);
    Mat3 big = Mat3::Identity();
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q) big(g[p], g[q]) = w(p, q);
    c.r1 = c.r1 * big;
    c.r2 = big.transpose() * c.r2;
  }
}

}  // namespace

SpecialOrthogonalForm special_orthogonal_form(const PauliTransferMatrix& e) {
  const Mat3 delta = e.delta();
  Eigen::JacobiSVD<Mat3> svd(delta, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU(), v = svd.matrixV();
  Vec3 lam = svd.singularValues();
  // Push reflections into the sign of the smallest entry.
  if (u.determinant() < 0) {
    u.col(2) *= -1;
    lam(2) *= -1;
  }
  if (v.determinant() < 0) {
    v.col(2) *= -1;
    lam(2) *= -1;
  }

  static const std::array<Vec3, 4> flips = {Vec3(1, 1, 1), Vec3(-1, -1, 1), Vec3(-1, 1, -1), Vec3(1, -1, -1)};
  SoCandidate best{Mat3::Identity(), Mat3::Identity(), lam, -1e300};
  for (const auto& fu : flips) {
    for (const auto& fv : flips) {
      SoCandidate c;
      c.r1 = u * fu.asDiagonal();
      c.r2 = (v * fv.asDiagonal()).transpose();
      c.lam = lam.cwiseProduct(fu).cwiseProduct(fv);
      align_degenerate(c);
      c.score = c.r1.trace() + c.r2.trace();
      if (c.score > best.score + 1e-12) best = c;
    }
  }

  SpecialOrthogonalForm f;
  f.lambdas = best.lam;
  f.r1 = best.r1;
  f.r2 = best.r2;
  f.gamma = best.r1.transpose() * e.t();
  f.u1 = rotation_ptm(best.r1);
  f.u2 = rotation_ptm(best.r2);
  return f;
}

bool is_proper_orthochronous(const Mat4& l, double tol) {
  const Mat4 eta = minkowski();
  if ((l.transpose() * eta * l - eta).cwiseAbs().maxCoeff() > tol) return false;
  return l.determinant() > 0 && l(0, 0) > 0;
}

Vec4 pauli_probabilities(const Vec3& l) {
  return Vec4((1 + l(0) + l(1) + l(2)) / 4, (1 + l(0) - l(1) - l(2)) / 4, (1 - l(0) + l(1) - l(2)) / 4,
              (1 - l(0) - l(1) + l(2)) / 4);
}

// ---------------------------------------------------------------------------
// Lorentz normal form

namespace {

double eta_dot(const Vec4& a, const Vec4& b) { return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3); }

struct EtaVector {
  Vec4 v;
  double eig;     // eigenvalue of R eta R^T eta it belongs to
  bool timelike;
};

struct SpectralSplit {
  std::vector<EtaVector> vecs;   // eta-normalised, one per dimension
  bool ok = false;               // false: complex spectrum or null direction met
  double defective_eig = 0;      // eigenvalue of the offending group when !ok
  bool real_spectrum = true;
};

// Eigenvectors of the eta-self-adjoint matrix m, eta-orthonormalised inside
// each eigenvalue cluster.
SpectralSplit eta_eigenbasis(const Mat4& m) {
  SpectralSplit out;
  Eigen::EigenSolver<Mat4> es(m);
  const auto ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < 4; ++i)
    if (std::abs(ev(i).imag()) > 1e-7 * scale) {
      out.real_spectrum = false;
      return out;
    }
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ev(a).real() > ev(b).real(); });

  std::vector<std::vector<int>> groups;
  for (int i : idx) {
    if (!groups.empty() && std::abs(ev(groups.back().front()).real() - ev(i).real()) <= 1e-6 * scale)
      groups.back().push_back(i);
    else
      groups.push_back({i});
  }
  out.ok = true;
  for (const auto& g : groups) {
    const int k = static_cast<int>(g.size());
    double mean = 0;
    Eigen::MatrixXd b(4, k);
    for (int p = 0; p < k; ++p) {
      b.col(p) = es.eigenvectors().col(g[p]).real();
      if (b.col(p).norm() < 1e-12) b.col(p) = es.eigenvectors().col(g[p]).imag();
      mean += ev(g[p]).real() / k;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
    const auto sv = svd.singularValues();
    if (sv(k - 1) < 1e-6 * sv(0)) {
      out.ok = false;
      out.defective_eig = mean;
      continue;
    }
    Eigen::MatrixXd q = svd.matrixU();
    Eigen::MatrixXd eta = minkowski();
    Eigen::MatrixXd gram = q.transpose() * eta * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(gram);
    for (int p = k - 1; p >= 0; --p) {
      const double gnorm = gs.eigenvalues()(p);
      if (std::abs(gnorm) < 1e-6) {
        out.ok = false;
        out.defective_eig = mean;
        continue;
      }
      Vec4 y = q * gs.eigenvectors().col(p) / std::sqrt(std::abs(gnorm));
      out.vecs.push_back({y, mean, gnorm > 0});
    }
  }
  return out;
}

Vec4 eta_complete(const std::vector<Vec4>& existing) {
  for (int c = 1; c < 4; ++c) {
    Vec4 v = Vec4::Unit(c);
    for (const auto& w : existing) v -= eta_dot(w, v) / eta_dot(w, w) * w;
    const double n = eta_dot(v, v);
    if (n < -1e-6) return v / std::sqrt(-n);
  }
  throw DecompositionFailed("lorentz_normal_form: cannot complete spacelike frame");
}

Mat4 eta_inverse(const Mat4& l) {
  const Mat4 eta = minkowski();
  return eta * l.transpose() * eta;
}

// Second factor from the rows of L1^{-1} R. Missing (zero) rows are completed
// with spacelike directions orthogonal to everything found so far.
void right_factor(const Mat4& sp, Mat4& l2, Vec4& s, const std::vector<int>& rows, double thresh) {
  std::vector<Vec4> cols;
  std::vector<int> missing;
  for (int i : rows) {
    Vec4 row = sp.row(i).transpose();
    double n = eta_dot(row, row);
    if (i == 0) {
      s(0) = std::sqrt(std::max(n, 0.0));
      if (s(0) <= thresh) throw DecompositionFailed("lorentz_normal_form: vanishing timelike singular value");
      if (row(0) < 0) s(0) = -s(0);
      l2.col(0) = row / s(0);
    } else {
      s(i) = std::sqrt(std::max(-n, 0.0));
      if (s(i) <= thresh) {
        s(i) = 0;
        missing.push_back(i);
        continue;
      }
      l2.col(i) = row / s(i);
    }
    cols.push_back(l2.col(i));
  }
  for (int i : missing) {
    Vec4 v = eta_complete(cols);
    l2.col(i) = v;
    cols.push_back(v);
  }
}

LorentzForm diagonal_attempt(const Mat4& r, const SpectralSplit& sp1, bool& ok) {
  ok = false;
  LorentzForm f;
  std::vector<EtaVector> time, space;
  for (const auto& v : sp1.vecs) (v.timelike ? time : space).push_back(v);
  if (time.size() != 1 || space.size() != 3) return f;
  Mat4 l1;
  l1.col(0) = time[0].v(0) > 0 ? time[0].v : Vec4(-time[0].v);
  for (int i = 0; i < 3; ++i) l1.col(i + 1) = space[i].v;
  if (l1.determinant() < 0) l1.col(3) *= -1;

  const Mat4 spr = eta_inverse(l1) * r;
  Mat4 l2 = Mat4::Identity();
  Vec4 s = Vec4::Zero();
  const double thresh = 1e-9 * std::max(1.0, r.cwiseAbs().maxCoeff());
  right_factor(spr, l2, s, {0, 1, 2, 3}, thresh);
  if (l2.determinant() < 0) {
    l2.col(3) *= -1;
    s(3) *= -1;
  }
  Mat4 sigma = s.asDiagonal();
  const double resid = (l1 * sigma * l2.transpose() - r).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * std::max(1.0, r.cwiseAbs().maxCoeff())) return f;
  if (!is_proper_orthochronous(l1, 1e-8) || !is_proper_orthochronous(l2, 1e-8)) return f;
  f.sigma = sigma;
  f.l1 = l1;
  f.l2 = l2;
  f.s = s.tail<3>();
  f.alpha = 1.0 / s(0);
  f.is_diagonal = true;
  ok = true;
  return f;
}

// Null pair (v, v') spanning the defective generalised eigenspace of m at mu,
// normalised so that eta(v, v') = 1 and v future pointing.
std::pair<Vec4, Vec4> null_pair(const Mat4& m, double mu) {
  const Mat4 shifted = m - mu * Mat4::Identity();
  Eigen::JacobiSVD<Mat4> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec4 v = svd.matrixV().col(3);
  if (v(0) < 0) v = -v;
  Vec4 w = svd.solve(v);
  double vw = eta_dot(v, w);
  if (std::abs(vw) < 1e-10) throw DecompositionFailed("lorentz_normal_form: degenerate Jordan chain");
  Vec4 vp = w - eta_dot(w, w) / (2 * vw) * v;
  vp /= eta_dot(v, vp);
  return {v, vp};
}

Mat4 lightcone_block(const Mat4& sigma) {
  Mat2 x;
  x << sigma(0, 0), sigma(0, 3), sigma(3, 0), sigma(3, 3);
  Mat2 p;
  p << 1, 1, 1, -1;
  p /= std::sqrt(2.0);
  Mat2 k = p * x * p;
  Mat4 out = Mat4::Zero();
  out.block<2, 2>(0, 0) = k;
  return out;
}

LorentzForm jordan_fallback(const Mat4& r, const SpectralSplit& sp1) {
  const Mat4 eta = minkowski();
  const Mat4 m1 = r * eta * r.transpose() * eta;
  const Mat4 m2 = r.transpose() * eta * r * eta;
  const double mu = sp1.defective_eig;

  std::vector<Vec4> trans;
  for (const auto& v : sp1.vecs) {
    if (v.timelike) throw DecompositionFailed("lorentz_normal_form: timelike vector outside the null block");
    trans.push_back(v.v);
  }
  if (trans.size() != 2) throw DecompositionFailed("lorentz_normal_form: unsupported Jordan structure");

  // With the light-cone block K lower triangular, the null eigenvector of
  // R eta R^T eta sits in the second light-cone slot of L1 and the one of
  // R^T eta R eta in the first slot of L2.
  auto [v1p, v1] = null_pair(m1, mu);
  auto [w2, w2p] = null_pair(m2, mu);

  auto build = [](const Vec4& v, const Vec4& vp, const Vec4& t1, const Vec4& t2, double lam) {
    Mat4 l;
    l.col(0) = (lam * v + vp / lam) / std::sqrt(2.0);
    l.col(1) = t1;
    l.col(2) = t2;
    l.col(3) = (lam * v - vp / lam) / std::sqrt(2.0);
    if (l.determinant() < 0) l.col(2) *= -1;
    return l;
  };

  double lam1 = 1, lam2 = 1;
  Mat4 l1, l2, sigma;
  auto assemble = [&]() {
    l1 = build(v1, v1p, trans[0], trans[1], lam1);
    // transverse directions of the right factor follow from the rows
    const Mat4 spr = eta_inverse(l1) * r;
    Vec4 s = Vec4::Zero();
    Mat4 tmp = Mat4::Identity();
    right_factor(spr, tmp, s, {1, 2}, 1e-12);
    l2 = build(w2, w2p, tmp.col(1), tmp.col(2), lam2);
    sigma = eta_inverse(l1) * r * eta_inverse(l2).transpose();
    return lightcone_block(sigma);
  };
  Mat4 k = assemble();
  if (std::abs(k(0, 1)) > std::abs(k(1, 0))) {
    std::swap(v1, v1p);
    std::swap(w2, w2p);
    k = assemble();
  }
  // Gauge: the two null boosts are fixed by |K_uu| = |K_vv| and
  // |K_vu| = sqrt|K_uu K_vv|. Under the boosts K_uu -> K_uu/(l1 l2),
  // K_vv -> K_vv l1 l2 and K_vu -> K_vu l1/l2.
  const double kuu = std::abs(k(0, 0)), kvv = std::abs(k(1, 1)), kvu = std::abs(k(1, 0));
  if (kuu > 1e-12 && kvv > 1e-12 && kvu > 1e-12) {
    const double p = std::sqrt(kuu / kvv);
    const double q = std::sqrt(kuu * kvv) / kvu;
    lam1 = std::sqrt(p * q);
    lam2 = std::sqrt(p / q);
    assemble();
  }
  sigma = eta_inverse(l1) * r * eta_inverse(l2).transpose();

  LorentzForm f;
  f.is_diagonal = false;
  f.sigma = sigma;
  f.l1 = l1;
  f.l2 = l2;
  f.a = sigma(0, 0);
  f.b = sigma(0, 3);
  f.c = sigma(3, 0);
  f.d = sigma(1, 1);
  f.alpha = 1.0 / f.a;
  f.s = Vec3(sigma(1, 1), sigma(2, 2), sigma(3, 3));
  const double shape =
      std::abs(sigma(3, 3) - (f.a + f.c - f.b)) + std::abs(sigma(1, 2)) + std::abs(sigma(2, 1)) +
      sigma.block<2, 1>(1, 0).cwiseAbs().sum() + sigma.block<2, 1>(1, 3).cwiseAbs().sum() +
      sigma.block<1, 2>(0, 1).cwiseAbs().sum() + sigma.block<1, 2>(3, 1).cwiseAbs().sum();
  const double resid = (l1 * sigma * l2.transpose() - r).cwiseAbs().maxCoeff();
  if (shape > 1e-8 || resid > 1e-8 || !is_proper_orthochronous(l1, 1e-8) || !is_proper_orthochronous(l2, 1e-8))
    throw DecompositionFailed("lorentz_normal_form: non-diagonal form did not reach the canonical shape");
  return f;
}

}  // namespace

LorentzForm lorentz_normal_form(const PauliTransferMatrix& e) {
  const Mat4 r = e.m * phi_t();
  const Mat4 eta = minkowski();
  const Mat4 m1 = r * eta * r.transpose() * eta;
  SpectralSplit sp1 = eta_eigenbasis(m1);
  if (!sp1.real_spectrum) throw DecompositionFailed("lorentz_normal_form: complex spectrum of R eta R^T eta");
  if (sp1.ok) {
    bool ok = false;
    LorentzForm f = diagonal_attempt(r, sp1, ok);
    if (ok) return f;
    throw DecompositionFailed("lorentz_normal_form: diagonal reconstruction failed");
  }
  return jordan_fallback(r, sp1);
}

}  // namespace divischan
