#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divischan/chanrep.hpp"

namespace divischan {

struct GeneratorMatrix {
  Mat4 m = Mat4::Zero();
  // Branch offset of the rotation blocks; empty for the principal logarithm
  // of a positive spectrum.
  std::optional<int> branch;

  std::string branch_tag() const { return branch ? std::to_string(*branch) : "principal"; }
};

// L[rho] = i[rho, H] + sum_ij G_ij (F_i rho F_j^dag - {F_j^dag F_i, rho}/2),
// F_i = sigma_i / sqrt(2).
struct LindbladData {
  Mat2c h = Mat2c::Zero();
  Mat3c g = Mat3c::Zero();
  Vec3 rates = Vec3::Zero();  // eigenvalues of g, descending
};

std::vector<GeneratorMatrix> real_logarithms(const PauliTransferMatrix& e, int k_window, const Tolerance& tol = {});
bool is_ccp(const GeneratorMatrix& l, const Tolerance& tol = {});
// Smallest eigenvalue of omega_perp tau_L omega_perp on the complement of |Omega>.
double ccp_margin(const Mat4& l);
LindbladData hg_decomposition(const GeneratorMatrix& l);
PauliTransferMatrix exp_generator(const GeneratorMatrix& l, double t);
GeneratorMatrix build_generator(const Mat2c& h, const Mat3c& g);

// Spectral screening of the existence of a real logarithm: negative
// eigenvalues come in equal pairs, spectrum nonsingular and diagonalizable.
struct CulverScreen {
  bool has_real_log = false;
  bool singular = false;
  bool diagonalizable = true;
  std::string reason;
};
CulverScreen culver_screen(const PauliTransferMatrix& e, const Tolerance& tol = {});

}  // namespace divischan
