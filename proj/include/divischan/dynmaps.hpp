#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "divischan/divisibility.hpp"
#include "divischan/lindblad.hpp"

namespace divischan {

PauliTransferMatrix a_not();
PauliTransferMatrix approx_transposition();

// cos^2 t id + sin^2 t A_NOT + sin(2t)/2 F, F[rho] = (i/3) sum_j [sigma_j, rho].
PauliTransferMatrix collision_not_map(double t);
PauliTransferMatrix dephasing_map(double t, double gamma);

struct JcParams {
  cplx alpha{6.0, 0.0};
  double g = 10.0;
  double omega_a = 5.0;
  double omega_f = 20.0;
  int n_fock = 0;  // 0 selects ceil(|alpha|^2 + 6|alpha| + 10)

  int cutoff() const;
  double detuning() const { return omega_f - omega_a; }
};

// Atom (x) truncated cavity mode. The Hamiltonian is diagonalised once and
// reused for every time. Qubit basis (|e>, |g>), sigma_z = diag(1, -1).
class JcModel {
 public:
  explicit JcModel(const JcParams& p);

  PauliTransferMatrix channel(double t) const;
  // Population of the top two Fock levels, maximised over the four
  // evolved input states.
  double leakage(double t) const;
  const JcParams& params() const { return p_; }

 private:
  JcParams p_;
  int nf_;
  Eigen::MatrixXcd vecs_;
  Eigen::VectorXd vals_;
  Eigen::VectorXcd coherent_;
  std::vector<Eigen::VectorXcd> evolved(double t) const;
};

PauliTransferMatrix jc_channel(double t, const JcParams& p);
double jc_excited_probability(double t, const JcParams& p, int n_terms);

struct TrajectoryPoint {
  double t = 0;
  DivisibilityReport report;
  Vec3 lambdas = Vec3::Zero();
  Vec3 tau = Vec3::Zero();
  std::optional<std::string> error;  // set when the map failed at this t
};

std::vector<TrajectoryPoint> sweep(const std::function<PauliTransferMatrix(double)>& map, double t0, double t1,
                                   int steps, const Tolerance& tol = {});

// CSV with columns t,delta,chi,det,lambda1,lambda2,lambda3,tau1,tau2,tau3.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& pts);

// L[rho] = i tr_E [rho (x) rho_E, H] for H acting on C^2 (x) C^dE, system first.
GeneratorMatrix exact_first_order_generator(const Eigen::MatrixXcd& h_global, const Eigen::MatrixXcd& rho_e);

}  // namespace divischan
