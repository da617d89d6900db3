#pragma once

#include <random>

#include "divischan/chanrep.hpp"

namespace divischan::test {

// Random CPTP qubit channel: a Haar-like isometry C^2 -> C^2 (x) C^r cut into r Kraus operators.
inline PauliTransferMatrix random_channel(std::mt19937& rng, int rank) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXcd g(2 * rank, 2);
  for (int i = 0; i < 2 * rank; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * rank, 2);
  KrausSet ks;
  for (int k = 0; k < rank; ++k) ks.ops.push_back(v.block(2 * k, 0, 2, 2));
  return ptm_from_kraus(ks);
}

}  // namespace divischan::test
