#include "divischan/dynmaps.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "divischan/io.hpp"
#include "divischan/normalform.hpp"

namespace divischan {

PauliTransferMatrix a_not() { return PauliTransferMatrix::diagonal(-1.0 / 3, -1.0 / 3, -1.0 / 3); }

PauliTransferMatrix approx_transposition() { return PauliTransferMatrix::diagonal(1.0 / 3, -1.0 / 3, 1.0 / 3); }

PauliTransferMatrix collision_not_map(double t) {
  static const Mat4 f = pauli_matrix_of([](const Mat2c& rho) -> Mat2c {
    Mat2c y = Mat2c::Zero();
    for (int j = 1; j <= 3; ++j) y += pauli(j) * rho - rho * pauli(j);
    return cplx(0, 1.0 / 3.0) * y;
  });
  const double c = std::cos(t), s = std::sin(t);
  Mat4 m = c * c * Mat4::Identity() + s * s * a_not().m + 0.5 * std::sin(2 * t) * f;
  m.row(0) = Vec4(1, 0, 0, 0).transpose();
  return PauliTransferMatrix(m);
}

PauliTransferMatrix dephasing_map(double t, double gamma) {
  const double x = std::exp(-gamma * t);
  return PauliTransferMatrix::diagonal(x, x, 1.0);
}

// ---------------------------------------------------------------------------
// Jaynes-Cummings

int JcParams::cutoff() const {
  if (n_fock > 0) return n_fock;
  const double a = std::abs(alpha);
  return static_cast<int>(std::ceil(a * a + 6 * a + 10));
}

JcModel::JcModel(const JcParams& p) : p_(p), nf_(p.cutoff()) {
  const int n = 2 * nf_;
  // index q * nf + k, q = 0 excited, q = 1 ground
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < nf_; ++k) {
    h(k, k) = 0.5 * p.omega_a + p.omega_f * (k + 0.5);
    h(nf_ + k, nf_ + k) = -0.5 * p.omega_a + p.omega_f * (k + 0.5);
  }
  // g (sigma_- a^dag + h.c.): |e,k> <-> |g,k+1> with amplitude g sqrt(k+1)
  for (int k = 0; k + 1 < nf_; ++k) {
    const double c = p.g * std::sqrt(k + 1.0);
    h(nf_ + k + 1, k) = c;
    h(k, nf_ + k + 1) = c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  vals_ = es.eigenvalues();
  vecs_ = es.eigenvectors().cast<cplx>();

  coherent_.resize(nf_);
  cplx c = std::exp(-0.5 * std::norm(p.alpha));
  for (int k = 0; k < nf_; ++k) {
    coherent_(k) = c;
    c *= p.alpha / std::sqrt(k + 1.0);
  }
  coherent_.normalize();
}

std::vector<Eigen::VectorXcd> JcModel::evolved(double t) const {
  const int n = 2 * nf_;
  Eigen::VectorXcd phase(n);
  for (int i = 0; i < n; ++i) phase(i) = std::exp(cplx(0, -vals_(i) * t));
  std::vector<Eigen::VectorXcd> out;
  for (int q = 0; q < 2; ++q) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi.segment(q * nf_, nf_) = coherent_;
    Eigen::VectorXcd c = vecs_.adjoint() * psi;
    out.push_back(vecs_ * phase.cwiseProduct(c));
  }
  return out;
}

double JcModel::leakage(double t) const {
  double worst = 0;
  for (const auto& psi : evolved(t)) {
    double pop = 0;
    for (int q = 0; q < 2; ++q)
      for (int k = nf_ - 2; k < nf_; ++k) pop += std::norm(psi(q * nf_ + k));
    worst = std::max(worst, pop);
  }
  return worst;
}

PauliTransferMatrix JcModel::channel(double t) const {
  const auto psi = evolved(t);
  const double leak = leakage(t);
  if (leak > 1e-6)
    throw TruncationInsufficient("jc_channel: population " + std::to_string(leak) + " in the top Fock levels");
  // E(|i><j|) = tr_F |psi_i><psi_j|
  Mat2c img[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          img[i][j](a, b) = psi[j].segment(b * nf_, nf_).dot(psi[i].segment(a * nf_, nf_));
  Mat4 m = pauli_matrix_of([&](const Mat2c& x) {
    Mat2c y = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) y += x(i, j) * img[i][j];
    return y;
  });
  return PauliTransferMatrix(m);
}

PauliTransferMatrix jc_channel(double t, const JcParams& p) { return JcModel(p).channel(t); }

double jc_excited_probability(double t, const JcParams& p, int n_terms) {
  const double d = p.detuning();
  const double nbar = std::norm(p.alpha);
  double sz = 0;
  double logp = -nbar;  // log P_n, P_0 = e^{-|alpha|^2}
  for (int n = 0; n < n_terms; ++n) {
    if (n > 0) logp += std::log(nbar) - std::log(static_cast<double>(n));
    const double pn = nbar == 0 ? (n == 0 ? 1.0 : 0.0) : std::exp(logp);
    const double om2 = d * d / 4 + p.g * p.g * n;
    const double r = om2 == 0 ? 1.0 : d * d / (4 * om2);
    sz -= pn * (r + (1 - r) * std::cos(2 * std::sqrt(om2) * t));
  }
  return 0.5 * (sz + 1);
}

// ---------------------------------------------------------------------------

std::vector<TrajectoryPoint> sweep(const std::function<PauliTransferMatrix(double)>& map, double t0, double t1,
                                   int steps, const Tolerance& tol) {
  if (steps < 2) throw std::invalid_argument("sweep: steps must be at least 2");
  std::vector<TrajectoryPoint> pts(steps);
  for (int i = 0; i < steps; ++i) {
    TrajectoryPoint& p = pts[i];
    p.t = t0 + i * (t1 - t0) / (steps - 1);
    try {
      const PauliTransferMatrix e = map(p.t);
      p.report = classify(e, tol);
      const SpecialOrthogonalForm so = special_orthogonal_form(e);
      p.lambdas = so.lambdas;
      p.tau = so.gamma;
    } catch (const TruncationInsufficient&) {
      throw;
    } catch (const std::exception& ex) {
      p.error = ex.what();
    }
  }
  return pts;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& pts) {
  os << "t,delta,chi,det,lambda1,lambda2,lambda3,tau1,tau2,tau3\n";
  for (const auto& p : pts) {
    os << format_double(p.t);
    if (p.error) {
      for (int k = 0; k < 9; ++k) os << ",nan";
      os << '\n';
      continue;
    }
    os << ',' << format_double(p.report.delta) << ',' << p.report.chi << ',' << format_double(p.report.det);
    for (int k = 0; k < 3; ++k) os << ',' << format_double(p.lambdas(k));
    for (int k = 0; k < 3; ++k) os << ',' << format_double(p.tau(k));
    os << '\n';
  }
}

GeneratorMatrix exact_first_order_generator(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& rho_e) {
  const Eigen::Index de = rho_e.rows();
  if (rho_e.cols() != de || h.rows() != 2 * de || h.cols() != 2 * de)
    throw DimensionMismatch("exact_first_order_generator: H must be (2 dE) x (2 dE) for a dE x dE environment state");
  GeneratorMatrix g;
  g.m = pauli_matrix_of([&](const Mat2c& rho) {
    Eigen::MatrixXcd joint = Eigen::kroneckerProduct(rho, rho_e);
    Eigen::MatrixXcd comm = cplx(0, 1) * (joint * h - h * joint);
    Mat2c out;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out(a, b) = comm.block(a * de, b * de, de, de).trace();
    return out;
  });
  g.m.row(0).setZero();
  return g;
}

}  // namespace divischan
