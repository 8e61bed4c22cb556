#pragma once

#include <cmath>

#include "hyperflow/hermitian.hpp"
#include "hyperflow/matrix.hpp"

namespace hyperflow {

// Spectral norm (largest singular value), from the top eigenvalue of A^T A.
// Every "closeness" statement in the library is measured in this norm.
inline double op_norm2(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd gram = a.transpose() * a;
  const auto ev = detail::jacobi_eigenvalues(gram.cast<Complex>());
  return std::sqrt(std::max(0.0, ev.back()));
}

inline double op_norm2(const MatrixR& a) { return op_norm2(a.eigen()); }

}  // namespace hyperflow
