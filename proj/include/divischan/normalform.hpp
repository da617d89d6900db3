#pragma once

#include "divischan/chanrep.hpp"

namespace divischan {

struct SpecialOrthogonalForm {
  Vec3 lambdas = Vec3::Ones();
  Vec3 gamma = Vec3::Zero();
  Mat3 r1 = Mat3::Identity();
  Mat3 r2 = Mat3::Identity();
  PauliTransferMatrix u1, u2;

  // D-hat: row 0 = (1,0,0,0), block (gamma, diag lambdas).
  PauliTransferMatrix d() const;
};

// R = l1 * sigma * l2^T with l1, l2 proper orthochronous Lorentz matrices.
struct LorentzForm {
  Mat4 sigma = Mat4::Identity();
  Mat4 l1 = Mat4::Identity();
  Mat4 l2 = Mat4::Identity();
  double alpha = 1.0;
  bool is_diagonal = true;
  // Diagonal case: sigma = diag(s0, s[0], s[1], s[2]).
  Vec3 s = Vec3::Ones();
  // Non-diagonal case: coefficients of the rank-deficient shape
  // [[a,0,0,b],[0,d,0,0],[0,0,-d,0],[c,0,0,a+c-b]].
  double a = 0, b = 0, c = 0, d = 0;

  // Nontrivial diagonal of the channel normal form alpha * sigma * Phi_T.
  Vec3 channel_lambdas() const;
};

Mat4 minkowski();

SpecialOrthogonalForm special_orthogonal_form(const PauliTransferMatrix& e);
LorentzForm lorentz_normal_form(const PauliTransferMatrix& e);
bool is_proper_orthochronous(const Mat4& l, double tol = 1e-9);
Vec4 pauli_probabilities(const Vec3& lambdas);

// Rotation block embedded as a unitary-conjugation PTM.
PauliTransferMatrix rotation_ptm(const Mat3& r);

}  // namespace divischan
