#include "divischan/divisibility.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "divischan/lindblad.hpp"
#include "divischan/normalform.hpp"

namespace divischan {

namespace {

void require_cptp(const PauliTransferMatrix& e, const Tolerance& tol, const char* who) {
  const CptpReport r = is_cptp(e, tol);
  if (!r.tp || !r.cp) throw NotCPTP(std::string(who) + ": input is not CPTP");
}

// Shape of the unital complex-eigenvalue family
// [[c,0,0],[0,a,-b],[0,b,a]] in the lower block.
bool complex_family(const PauliTransferMatrix& e, double& a, double& b, double& c) {
  const Mat3 d = e.delta();
  const double z = 1e-12;
  if (e.t().cwiseAbs().maxCoeff() > z) return false;
  if (std::abs(d(0, 1)) > z || std::abs(d(0, 2)) > z || std::abs(d(1, 0)) > z || std::abs(d(2, 0)) > z) return false;
  if (std::abs(d(1, 1) - d(2, 2)) > z || std::abs(d(1, 2) + d(2, 1)) > z) return false;
  if (std::abs(d(2, 1)) <= z) return false;
  c = d(0, 0);
  a = d(1, 1);
  b = d(2, 1);
  return c > 0;
}

}  // namespace

Vec4 tetrahedron_margins(const Vec3& l) {
  return Vec4(1 + l(0) + l(1) + l(2), 1 + l(0) - l(1) - l(2), 1 - l(0) + l(1) - l(2), 1 - l(0) - l(1) + l(2));
}

bool is_pauli_channel(const PauliTransferMatrix& e, double tol) {
  Mat4 off = e.m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

Tri is_divisible(const PauliTransferMatrix& e, const Tolerance& tol) {
  const CptpReport r = is_cptp(e, tol);
  if (!r.tp || !r.cp) throw NotCPTP("is_divisible: input is not CPTP");
  if (r.kraus_rank == 4) return Tri::yes;
  if (r.kraus_rank == 3) return r.unital ? Tri::no : Tri::undecided;
  return Tri::yes;
}

bool is_p_divisible(const PauliTransferMatrix& e, const Tolerance& tol) {
  require_cptp(e, tol, "is_p_divisible");
  return e.det() >= -tol.tol;
}

Tri is_cp_divisible(const PauliTransferMatrix& e, const Tolerance& tol) {
  require_cptp(e, tol, "is_cp_divisible");
  LorentzForm f;
  try {
    f = lorentz_normal_form(e);
  } catch (const DecompositionFailed&) {
    return Tri::undecided;
  }
  if (!f.is_diagonal) return Tri::undecided;
  const Vec3 l = f.channel_lambdas();
  const double smin = l.cwiseAbs().minCoeff();
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  const int rank = static_cast<int>((l.cwiseAbs().array() > tol.rank_tol * scale).count());
  if (rank < 3) return Tri::yes;
  const double prod = l.prod();
  return (prod > 0 && smin * smin - prod >= -tol.tol) ? Tri::yes : Tri::no;
}

bool pauli_l_divisible(const Vec3& l, const Tolerance& tol) {
  // lambda_i / (lambda_j lambda_k) >= 1, written without the division so the
  // singular points of the closure are covered: |lambda_i| >= |lambda_j
  // lambda_k| together with a non-negative product.
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    if (std::abs(l(i)) - std::abs(l(j) * l(k)) < -tol.tol) return false;
  }
  if (l.prod() < -tol.tol) return false;
  // a real logarithm needs the negative entries as an equal pair
  std::vector<double> neg;
  for (int i = 0; i < 3; ++i)
    if (l(i) < -tol.tol) neg.push_back(l(i));
  if (neg.empty()) return true;
  if (neg.size() != 2) return false;
  return std::abs(neg[0] - neg[1]) <= std::max(tol.pair_tol * std::abs(neg[0]), tol.tol);
}

bool is_infinitely_divisible_pauli(const Vec3& lambdas, const Tolerance& tol) {
  return pauli_l_divisible(lambdas, tol);
}

Tri is_l_divisible(const PauliTransferMatrix& e, const Tolerance& tol) {
  require_cptp(e, tol, "is_l_divisible");
  if (is_pauli_channel(e)) return pauli_l_divisible(e.m.diagonal().tail<3>(), tol) ? Tri::yes : Tri::no;

  double a = 0, b = 0, c = 0;
  if (complex_family(e, a, b, c)) return (a * a + b * b - c <= tol.tol && c <= 1 + tol.tol) ? Tri::yes : Tri::no;

  const CulverScreen screen = culver_screen(e, tol);
  if (screen.singular || !screen.diagonalizable) return Tri::undecided;
  if (!screen.has_real_log) return Tri::no;

  std::vector<GeneratorMatrix> logs;
  try {
    logs = real_logarithms(e, 3, tol);
  } catch (const Error&) {
    return Tri::undecided;
  }
  for (const auto& g : logs)
    if (is_ccp(g, tol)) return Tri::yes;
  // A single untagged logarithm means the real logarithm is unique.
  if (logs.size() == 1 && !logs.front().branch) return Tri::no;
  return Tri::undecided;
}

bool is_entanglement_breaking(const PauliTransferMatrix& e, const Tolerance& tol) {
  require_cptp(e, tol, "is_entanglement_breaking");
  Mat4c pt = partial_transpose_first(choi_matrix(e.m));
  pt = (0.5 * (pt + pt.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.tol;
}

double delta_value(const DivisibilityReport& r) {
  if (!r.in_c) return 0.0;
  if (r.in_l == Tri::yes) return 1.0;
  if (r.in_cp == Tri::yes) return 2.0 / 3.0;
  if (r.in_p) return 1.0 / 3.0;
  return 0.0;
}

DivisibilityReport classify(const PauliTransferMatrix& e, const Tolerance& tol) {
  DivisibilityReport rep;
  const CptpReport c = is_cptp(e, tol);
  rep.det = c.det;
  rep.kraus_rank = c.kraus_rank;
  rep.in_c = c.tp && c.cp;
  if (!rep.in_c) {
    rep.diagnostics.push_back(!c.tp ? "not trace preserving" : "not completely positive");
    return rep;
  }
  if (std::abs(c.min_eigenvalue) <= tol.tol && c.min_eigenvalue < 0)
    rep.diagnostics.push_back("boundary: Choi eigenvalue within tolerance of zero");

  rep.in_div = is_divisible(e, tol);
  if (rep.in_div == Tri::undecided) rep.diagnostics.push_back("divisibility of non-unital Kraus rank three channel not decided");

  rep.in_p = is_p_divisible(e, tol);
  if (std::abs(rep.det) <= tol.tol) rep.diagnostics.push_back("boundary: determinant within tolerance of zero");

  rep.in_cp = rep.in_p ? is_cp_divisible(e, tol) : Tri::no;
  if (rep.in_cp == Tri::undecided) rep.diagnostics.push_back("non-diagonal Lorentz normal form: CP-divisibility undecided");

  rep.in_l = rep.in_cp == Tri::no ? Tri::no : is_l_divisible(e, tol);
  if (rep.in_l == Tri::yes && rep.in_cp != Tri::yes) {
    rep.in_cp = Tri::yes;
    rep.diagnostics.push_back("CP-divisibility inferred from a Lindblad generator");
  }
  if (rep.in_l == Tri::undecided) rep.diagnostics.push_back("no ccp logarithm in the searched branch window (K = 1)");

  if (is_pauli_channel(e))
    rep.in_infty_pauli = is_infinitely_divisible_pauli(e.m.diagonal().tail<3>(), tol) ? Tri::yes : Tri::no;

  rep.eb = is_entanglement_breaking(e, tol);
  rep.chi = rep.eb ? 1 : 0;
  rep.delta = delta_value(rep);
  return rep;
}

}  // namespace divischan
