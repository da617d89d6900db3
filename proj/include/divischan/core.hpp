#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace divischan {

using cplx = std::complex<double>;

using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using MatXc = Eigen::MatrixXcd;
using VecXc = Eigen::VectorXcd;

// Numerical thresholds shared by every module. rank_tol is relative to the
// largest eigenvalue of whatever matrix is being ranked.
struct Tolerance {
  double tol = 1e-9;
  double rank_tol = 1e-8;
  double pair_tol = 1e-7;
};

// Reads DIVISCHAN_TOL if set; otherwise the defaults above.
Tolerance tolerance_from_env();

// Three-valued answer for membership questions the theory cannot always settle.
enum class Tri { no = 0, yes = 1, undecided = 2 };

const char* to_string(Tri t);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define DIVISCHAN_ERROR(Name)                  \
  struct Name : Error {                        \
    using Error::Error;                        \
  }

DIVISCHAN_ERROR(NotCompletelyPositive);
DIVISCHAN_ERROR(NotCPTP);
DIVISCHAN_ERROR(DecompositionFailed);
DIVISCHAN_ERROR(SingularChannel);
DIVISCHAN_ERROR(NonDiagonalizable);
DIVISCHAN_ERROR(DimensionMismatch);
DIVISCHAN_ERROR(TruncationInsufficient);
DIVISCHAN_ERROR(InvalidForm);
DIVISCHAN_ERROR(NonIntegrable);

#undef DIVISCHAN_ERROR

// Pauli matrices, index 0 is the identity.
const Mat2c& pauli(int i);

inline double sqr(double x) { return x * x; }

}  // namespace divischan
