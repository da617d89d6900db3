#pragma once

#include <string>
#include <vector>

#include "divischan/chanrep.hpp"

namespace divischan {

struct DivisibilityReport {
  bool in_c = false;
  Tri in_div = Tri::undecided;
  bool in_p = false;
  Tri in_cp = Tri::undecided;
  Tri in_l = Tri::undecided;
  Tri in_infty_pauli = Tri::undecided;
  bool eb = false;
  double delta = 0.0;
  int chi = 0;
  double det = 0.0;
  int kraus_rank = 0;
  std::vector<std::string> diagnostics;
};

Tri is_divisible(const PauliTransferMatrix& e, const Tolerance& tol = {});
bool is_p_divisible(const PauliTransferMatrix& e, const Tolerance& tol = {});
Tri is_cp_divisible(const PauliTransferMatrix& e, const Tolerance& tol = {});
Tri is_l_divisible(const PauliTransferMatrix& e, const Tolerance& tol = {});
bool is_infinitely_divisible_pauli(const Vec3& lambdas, const Tolerance& tol = {});
bool is_entanglement_breaking(const PauliTransferMatrix& e, const Tolerance& tol = {});
DivisibilityReport classify(const PauliTransferMatrix& e, const Tolerance& tol = {});

// Closed-form L-divisibility of the Pauli channel diag(1, lambdas), singular
// points included through the closure of the nonsingular set.
bool pauli_l_divisible(const Vec3& lambdas, const Tolerance& tol = {});

// The four faces of the CP tetrahedron, each must be >= 0.
Vec4 tetrahedron_margins(const Vec3& lambdas);

// True when every off-diagonal entry of the PTM vanishes within tol.
bool is_pauli_channel(const PauliTransferMatrix& e, double tol = 1e-12);

// Value of delta for a report whose flags are already set.
double delta_value(const DivisibilityReport& r);

}  // namespace divischan
