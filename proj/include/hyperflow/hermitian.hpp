#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hyperflow/matrix.hpp"

namespace hyperflow {

namespace detail {

// Cyclic Jacobi on a Hermitian matrix, in place. Each rotation first turns
// the pivot a_pq real with a diagonal phase and then applies the classical
// real rotation. Stops when the off-diagonal Frobenius mass drops below
// 1e-14 * ||M||_F. Returns the eigenvalues in ascending order.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  const double total = a.norm();
  const double stop = 1e-14 * total;
  auto off_mass = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && total > 0.0; ++sweep) {
    if (off_mass() <= stop) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        const Complex phase = a(p, q) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // W = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex w00 = c, w01 = s;
        const Complex w10 = -s * std::conj(phase), w11 = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * w00 + akq * w10;
          a(k, q) = akp * w01 + akq * w11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(w00) * apk + std::conj(w10) * aqk;
          a(q, k) = std::conj(w01) * apk + std::conj(w11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (sweep == kMaxSweeps) {
    throw NonConvergence("hermitian_eigs: Jacobi sweeps did not converge");
  }
  std::vector<double> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

// Smallest singular value from the eigenvalues +-sigma_i of the Hermitian
// dilation [[0, M], [M^H, 0]]. Avoids squaring, so small singular values keep
// absolute accuracy of order eps * ||M||.
inline double sigma_min_dense(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXcd dilation = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  dilation.topRightCorner(n, n) = m;
  dilation.bottomLeftCorner(n, n) = m.adjoint();
  const auto ev = jacobi_eigenvalues(std::move(dilation));
  const auto k = static_cast<std::size_t>(n);
  return std::max(0.0, 0.5 * (ev[k] - ev[k - 1]));
}

}  // namespace detail

// All eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigs(const MatrixC& m) {
  const Eigen::MatrixXcd& a = m.eigen();
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NotHermitian("hermitian_eigs: input is not Hermitian within 1e-12");
  }
  return detail::jacobi_eigenvalues(0.5 * (a + a.adjoint()));
}

inline double sigma_min(const MatrixC& m) { return detail::sigma_min_dense(m.eigen()); }
inline double sigma_min(const MatrixR& m) {
  return detail::sigma_min_dense(m.eigen().cast<Complex>());
}

}  // namespace hyperflow
