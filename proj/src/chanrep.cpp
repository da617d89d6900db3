#include "divischan/chanrep.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace divischan {

DensityMatrix DensityMatrix::from_bloch(const Vec3& r) {
  DensityMatrix d;
  d.m = 0.5 * (pauli(0) + r(0) * pauli(1) + r(1) * pauli(2) + r(2) * pauli(3));
  return d;
}

Vec3 DensityMatrix::bloch() const {
  Vec3 r;
  for (int k = 0; k < 3; ++k) r(k) = (pauli(k + 1) * m).trace().real();
  return r;
}

double DensityMatrix::purity() const { return (m * m).trace().real(); }

bool DensityMatrix::valid(double tol) const {
  if ((m - m.adjoint()).norm() > tol) return false;
  if (std::abs(m.trace() - cplx(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
  return es.eigenvalues().minCoeff() >= -tol;
}

PauliTransferMatrix PauliTransferMatrix::diagonal(double l1, double l2, double l3) {
  return PauliTransferMatrix(Vec4(1, l1, l2, l3).asDiagonal().toDenseMatrix());
}

PauliTransferMatrix PauliTransferMatrix::affine(const Vec3& t, const Mat3& delta) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m.block<3, 1>(1, 0) = t;
  m.block<3, 3>(1, 1) = delta;
  return PauliTransferMatrix(m);
}

bool PauliTransferMatrix::is_tp(double tol) const {
  return std::abs(m(0, 0) - 1) <= tol && m.block<1, 3>(0, 1).cwiseAbs().maxCoeff() <= tol;
}

bool PauliTransferMatrix::is_unital(double tol) const {
  return m.block<3, 1>(1, 0).cwiseAbs().maxCoeff() <= tol;
}

Mat4 phi_t() { return Vec4(1, 1, -1, 1).asDiagonal().toDenseMatrix(); }

Mat2c KrausSet::completeness() const {
  Mat2c s = Mat2c::Zero();
  for (const auto& k : ops) s += k.adjoint() * k;
  return s;
}

Mat4c pauli_matrix_of_complex(const std::function<Mat2c(const Mat2c&)>& map) {
  Mat4c out;
  for (int j = 0; j < 4; ++j) {
    Mat2c img = map(pauli(j));
    for (int i = 0; i < 4; ++i) out(i, j) = 0.5 * (pauli(i) * img).trace();
  }
  return out;
}

Mat4 pauli_matrix_of(const std::function<Mat2c(const Mat2c&)>& map) {
  return pauli_matrix_of_complex(map).real();
}

PauliTransferMatrix ptm_from_kraus(const KrausSet& ks, std::string* diagnostic) {
  if (ks.ops.empty()) throw Error("ptm_from_kraus: empty Kraus set");
  if (diagnostic) {
    double dev = (ks.completeness() - Mat2c::Identity()).norm();
    diagnostic->clear();
    if (dev > 1e-9) *diagnostic = "NotTracePreserving: |sum K^dag K - 1| = " + std::to_string(dev);
  }
  return PauliTransferMatrix(pauli_matrix_of([&](const Mat2c& x) {
    Mat2c y = Mat2c::Zero();
    for (const auto& k : ks.ops) y += k * x * k.adjoint();
    return y;
  }));
}

namespace {

// E[|i><j|] from the Pauli-basis matrix (complex entries allowed).
Mat2c image_of_unit(const Mat4c& m, int i, int j) {
  Mat2c unit = Mat2c::Zero();
  unit(i, j) = 1;
  Mat2c out = Mat2c::Zero();
  for (int b = 0; b < 4; ++b) {
    cplx coef = 0.5 * (pauli(b) * unit).trace();
    if (coef == cplx(0)) continue;
    for (int a = 0; a < 4; ++a) out += coef * m(a, b) * pauli(a);
  }
  return out;
}

}  // namespace

Mat4c choi_matrix(const Mat4& m) {
  Mat4c mc = m.cast<cplx>();
  Mat4c tau = Mat4c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tau.block<2, 2>(2 * i, 2 * j) = 0.5 * image_of_unit(mc, i, j);
  return tau;
}

ChoiState choi_from_ptm(const PauliTransferMatrix& e) {
  ChoiState c;
  c.m = choi_matrix(e.m);
  c.r_matrix = e.m * phi_t();
  return c;
}

PauliTransferMatrix ptm_from_choi(const ChoiState& c) {
  Mat2c img[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) img[i][j] = 2.0 * c.m.block<2, 2>(2 * i, 2 * j);
  return PauliTransferMatrix(pauli_matrix_of([&](const Mat2c& x) {
    Mat2c y = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) y += x(i, j) * img[i][j];
    return y;
  }));
}

KrausSet kraus_from_choi(const ChoiState& c, const Tolerance& tol) {
  // 2 tau = sum_k |k><k| with <(i,a)|k> = (K_k)_{a i}.
  Mat4c herm = c.m + c.m.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(herm);
  const Vec4 mu = es.eigenvalues();
  if (mu.minCoeff() < -2 * tol.tol)
    throw NotCompletelyPositive("kraus_from_choi: Choi eigenvalue " + std::to_string(mu.minCoeff() / 2));
  const double cut = tol.rank_tol * std::max(mu.maxCoeff(), 0.0);
  KrausSet ks;
  for (int k = 3; k >= 0; --k) {
    if (mu(k) <= cut) continue;
    Mat2c op;
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) op(a, i) = std::sqrt(mu(k)) * es.eigenvectors()(2 * i + a, k);
    // gauge: largest-magnitude entry real and positive
    Eigen::Index r = 0, col = 0;
    op.cwiseAbs().maxCoeff(&r, &col);
    cplx ph = op(r, col) / std::abs(op(r, col));
    op /= ph;
    op(r, col) = std::abs(op(r, col));
    ks.ops.push_back(op);
  }
  return ks;
}

CptpReport is_cptp(const PauliTransferMatrix& e, const Tolerance& tol) {
  CptpReport rep;
  rep.tp = e.is_tp(tol.tol);
  rep.unital = e.is_unital(tol.tol);
  rep.det = e.det();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(choi_matrix(e.m), Eigen::EigenvaluesOnly);
  const Vec4 ev = es.eigenvalues();
  rep.min_eigenvalue = ev.minCoeff();
  rep.cp = rep.min_eigenvalue >= -tol.tol;
  const double cut = tol.rank_tol * std::max(ev.maxCoeff(), 0.0);
  rep.kraus_rank = static_cast<int>((ev.array() > cut).count());
  return rep;
}

DensityMatrix apply(const PauliTransferMatrix& e, const DensityMatrix& rho) {
  const Vec3 r = rho.bloch();
  const double tr = rho.m.trace().real();
  // r' = Delta r + t, with the trace carried along for unnormalised inputs
  Vec3 rp = e.delta() * r + tr * e.t();
  DensityMatrix out = DensityMatrix::from_bloch(rp);
  out.m *= tr;
  return out;
}

PauliTransferMatrix compose(const PauliTransferMatrix& e2, const PauliTransferMatrix& e1) {
  return PauliTransferMatrix(e2.m * e1.m);
}

PauliTransferMatrix adjoint(const PauliTransferMatrix& e) { return PauliTransferMatrix(e.m.transpose()); }

PauliTransferMatrix unitary_channel(const Mat2c& u) {
  return PauliTransferMatrix(pauli_matrix_of([&](const Mat2c& x) -> Mat2c { return u * x * u.adjoint(); }));
}

Mat4c partial_transpose_first(const Mat4c& m) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * j, 2 * i);
  return out;
}

}  // namespace divischan
