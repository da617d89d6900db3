#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "divischan/core.hpp"

namespace divischan {

enum class FormKind { GF, DeltaI, DeltaII };
const char* to_string(FormKind k);

// Position-representation kernel in difference/sum coordinates (x, r):
//   exponent = i(b1 xf rf + b2 xf ri + b3 xi rf + b4 xi ri + c1 xf + c2 xi)
//              - a1 xf^2 - a2 xf xi - a3 xi^2 - e1 rf^2 - e2 rf ri - e3 ri^2 - d1 rf - d2 ri
// DeltaI carries delta(alpha xf - beta xi), DeltaII additionally
// delta(gamma rf - eta ri).
struct GaussianForm {
  FormKind kind = FormKind::GF;
  std::array<double, 3> a{0, 0, 0};
  std::array<double, 4> b{0, 0, 0, 0};
  std::array<double, 2> c{0, 0};
  std::array<double, 3> e{0, 0, 0};
  std::array<double, 2> d{0, 0};
  double alpha = 0, beta = 0, gamma = 0, eta = 0;

  // Prefactor fixed by trace preservation.
  double normalization() const;
};

struct GaussianTuple {
  Mat2 t = Mat2::Identity();
  Mat2 n = Mat2::Zero();
  Vec2 tau = Vec2::Zero();
};

struct GaussianState {
  Mat2 sigma = 0.5 * Mat2::Identity();
  Vec2 d = Vec2::Zero();

  // sigma + (i/2) Omega >= 0
  bool valid(double tol = 1e-9) const;
};

enum class SingularClass { NonSingular, A1, A2 };
const char* to_string(SingularClass s);

Mat2 symplectic_omega();

GaussianForm enforce_tp_hp(const GaussianForm& raw);
GaussianTuple tuple_from_form(const GaussianForm& f);
// C = N + i Omega - i T Omega T^T
Eigen::Matrix2cd cp_matrix(const GaussianTuple& t);
double cp_margin(const GaussianTuple& t);
bool is_cp(const GaussianTuple& t, double tol = 1e-9);
// Closed-form inequalities for the delta forms; empty for GF.
std::optional<bool> is_cp_closed_form(const GaussianForm& f);
GaussianState apply_to_gaussian(const GaussianTuple& t, const GaussianState& s);
SingularClass singular_class(const GaussianTuple& t, double rank_tol = 1e-10);
bool is_gaussian_unitary(const GaussianForm& f, double tol = 1e-12);

// Tuple composition: first t2, then t1.
GaussianTuple compose(const GaussianTuple& t1, const GaussianTuple& t2);

// Kernel of f1 applied after f2, integrated in closed form.
GaussianForm concat(const GaussianForm& f1, const GaussianForm& f2);

// Labels used by the concatenation table.
std::string form_label(const GaussianForm& f, double tol = 1e-12);

struct FormSample {
  double t = 0;
  GaussianForm form;
};

struct LiouvillianCoefficients {
  static constexpr std::array<const char*, 11> names = {"L_c",  "X_xx", "X_xr", "X_rr", "Y_xx", "Y_xr",
                                                        "Y_rx", "Y_rr", "Z_xx", "Z_xr", "Z_rr"};
  std::vector<double> t;
  std::array<std::vector<cplx>, 11> values;
};

struct MasterEquationResult {
  bool exists = false;
  std::string reason;  // why no master equation exists
  double ratio = 0;    // the constant c / A when it exists
  LiouvillianCoefficients coefficients;
};

MasterEquationResult master_equation(FormKind kind, const std::vector<FormSample>& path);

}  // namespace divischan
