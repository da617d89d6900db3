#pragma once

#include <functional>
#include <vector>

#include "divischan/core.hpp"

namespace divischan {

struct DensityMatrix {
  Mat2c m = Mat2c::Identity() / 2.0;

  static DensityMatrix from_bloch(const Vec3& r);
  Vec3 bloch() const;
  double purity() const;
  bool valid(double tol = 1e-9) const;
};

// Pauli transfer matrix, entry (i,j) = tr(sigma_i E[sigma_j]) / 2.
struct PauliTransferMatrix {
  Mat4 m = Mat4::Identity();

  PauliTransferMatrix() = default;
  explicit PauliTransferMatrix(const Mat4& mm) : m(mm) {}

  static PauliTransferMatrix diagonal(double l1, double l2, double l3);
  static PauliTransferMatrix affine(const Vec3& t, const Mat3& delta);

  Vec3 t() const { return m.block<3, 1>(1, 0); }
  Mat3 delta() const { return m.block<3, 3>(1, 1); }
  double det() const { return m.determinant(); }
  bool is_tp(double tol = 1e-9) const;
  bool is_unital(double tol = 1e-9) const;
};

using Ptm = PauliTransferMatrix;

// Phi_T = diag(1, 1, -1, 1): transposition in the Pauli basis.
Mat4 phi_t();

// tau = (id (x) E)[|Omega><Omega|], input on the first tensor factor.
// In terms of R = E Phi_T this reads tau = 1/4 sum_ij R_ij sigma_j (x) sigma_i.
struct ChoiState {
  Mat4c m = Mat4c::Zero();
  Mat4 r_matrix = Mat4::Zero();
};

struct KrausSet {
  std::vector<Mat2c> ops;

  Mat2c completeness() const;  // sum K^dagger K
};

struct CptpReport {
  bool tp = false;
  bool cp = false;
  double min_eigenvalue = 0.0;
  int kraus_rank = 0;
  bool unital = false;
  double det = 0.0;
  // Non-empty when the Kraus set fed to ptm_from_kraus was not trace preserving.
  std::string diagnostic;
};

// Pauli-basis matrix of an arbitrary linear qubit map. Imaginary parts are
// dropped; they vanish for Hermiticity-preserving maps.
Mat4 pauli_matrix_of(const std::function<Mat2c(const Mat2c&)>& map);
Mat4c pauli_matrix_of_complex(const std::function<Mat2c(const Mat2c&)>& map);

PauliTransferMatrix ptm_from_kraus(const KrausSet& ks, std::string* diagnostic = nullptr);
ChoiState choi_from_ptm(const PauliTransferMatrix& e);
// Same construction for any real 4x4 Pauli-basis matrix (generators included).
Mat4c choi_matrix(const Mat4& m);
PauliTransferMatrix ptm_from_choi(const ChoiState& c);
KrausSet kraus_from_choi(const ChoiState& c, const Tolerance& tol = {});
CptpReport is_cptp(const PauliTransferMatrix& e, const Tolerance& tol = {});
DensityMatrix apply(const PauliTransferMatrix& e, const DensityMatrix& rho);
PauliTransferMatrix compose(const PauliTransferMatrix& e2, const PauliTransferMatrix& e1);
PauliTransferMatrix adjoint(const PauliTransferMatrix& e);

// Unitary conjugation rho -> U rho U^dagger as a Pauli transfer matrix.
PauliTransferMatrix unitary_channel(const Mat2c& u);

// Partial transpose on the first factor of a two-qubit operator.
Mat4c partial_transpose_first(const Mat4c& m);

}  // namespace divischan
