#include "msfa/companion.hpp"

#include <Eigen/Eigenvalues>

namespace msfa {

std::vector<std::complex<double>> companion_eigenvalues(const VectorXd& phi) {
  const int p = static_cast<int>(phi.size());
  if (p < 1) throw DimensionError("companion_eigenvalues: need p >= 1");
  if (p == 1) return {std::complex<double>(phi[0], 0.0)};
  MatrixXd companion = MatrixXd::Zero(p, p);
  companion.row(0) = phi.transpose();
  companion.block(1, 0, p - 1, p - 1).setIdentity();
  Eigen::EigenSolver<MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> out(p);
  for (int i = 0; i < p; ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

}  // namespace msfa
