#pragma once

#include <complex>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

/// Eigenvalues of the p x p companion matrix of an AR(p) lag polynomial.
/// All moduli strictly inside the unit circle means the process is
/// stationary.
std::vector<std::complex<double>> companion_eigenvalues(const VectorXd& phi);

}  // namespace msfa
