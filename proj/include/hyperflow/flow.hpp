#pragma once

#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hyperflow/densemat.hpp"
#include "hyperflow/inertia.hpp"

namespace hyperflow {

namespace detail {

// Degree-13 diagonal Pade approximant of exp on ||A|| <= 1/2.
inline Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      (1.0 / b[0]) * a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * id);
  const Eigen::MatrixXd v =
      (a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id) /
      b[0];
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

// e^A by scaling and squaring: the smallest j >= 0 with ||A||_2 / 2^j <= 1/2,
// Pade 13 on A / 2^j, then j squarings.
inline MatrixR expm(const MatrixR& a) {
  const double norm = op_norm2(a);
  int j = 0;
  if (norm > 0.5) j = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  while (std::ldexp(norm, -j) > 0.5) ++j;
  Eigen::MatrixXd r = detail::pade13(std::ldexp(1.0, -j) * a.eigen());
  for (int k = 0; k < j; ++k) r = r * r;
  return MatrixR(std::move(r));
}

inline Vector flow_map(const MatrixR& h, double t, const Vector& x0) {
  if (x0.size() != h.dim()) {
    throw DimensionMismatch("flow_map: state has length " + std::to_string(x0.size()) +
                            ", matrix has dimension " + std::to_string(h.dim()));
  }
  if (t == 0.0) return x0;
  return expm(t * h) * x0;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  Vector origin;
};

// states[k] = e^{t_k H} x0. One step matrix e^{dt H} per distinct step size;
// a uniform grid costs two exponentials.
inline Trajectory trajectory(const MatrixR& h, const Vector& x0, std::span<const double> grid) {
  if (x0.size() != h.dim()) {
    throw DimensionMismatch("trajectory: state has length " + std::to_string(x0.size()) +
                            ", matrix has dimension " + std::to_string(h.dim()));
  }
  if (grid.empty()) throw InvalidArgument("trajectory: empty time grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw NonAscendingGrid("trajectory: grid is not strictly ascending at index " +
                             std::to_string(k));
    }
  }

  Trajectory out;
  out.origin = x0;
  out.times.assign(grid.begin(), grid.end());
  out.states.reserve(grid.size());
  out.states.push_back(flow_map(h, grid[0], x0));

  std::map<double, Eigen::MatrixXd> steps;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    auto it = steps.find(dt);
    if (it == steps.end()) it = steps.emplace(dt, expm(dt * h).eigen()).first;
    out.states.push_back(it->second * out.states.back());
  }
  return out;
}

// Orthonormal bases of the stable and unstable invariant subspaces.
struct SplittingBases {
  Eigen::MatrixXd stable;    // d x s
  Eigen::MatrixXd unstable;  // d x u
};

namespace detail {

// Newton iteration for sign(H) with determinant scaling. Requires no
// eigenvalue on the imaginary axis.
inline Eigen::MatrixXd matrix_sign(const Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd x = h;
  for (int it = 0; it < 100; ++it) {
    const auto lu = x.partialPivLu();
    const Eigen::MatrixXd inv = lu.inverse();
    double mu = 1.0;
    const double det_abs = std::abs(lu.determinant());
    if (det_abs > 0.0 && std::isfinite(det_abs)) mu = std::pow(det_abs, -1.0 / static_cast<double>(n));
    Eigen::MatrixXd next = 0.5 * (mu * x + inv / mu);
    const double change = (next - x).lpNorm<1>();
    x = std::move(next);
    if (change <= 1e-14 * x.lpNorm<1>()) break;
  }
  // Newton has converged quadratically; one unscaled step cleans up rounding.
  return 0.5 * (x + x.inverse());
}

inline Eigen::MatrixXd range_basis(const Eigen::MatrixXd& projector, int rank) {
  const Eigen::Index n = projector.rows();
  if (rank == 0) return Eigen::MatrixXd(n, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(projector, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(rank);
}

}  // namespace detail

// Stable subspace = range((I - sign H) / 2), unstable = range((I + sign H) / 2);
// the ranks are s and u from the classification.
inline SplittingBases splitting(const MatrixR& h, double tau) {
  const auto verdict = classify(h, tau);
  if (!verdict.hyperbolic()) {
    throw NotHyperbolic(std::string("splitting: matrix is ") + to_string(verdict.kind));
  }
  const Eigen::Index n = h.dim();
  const Eigen::MatrixXd sign = detail::matrix_sign(h.eigen());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  return {detail::range_basis(0.5 * (id - sign), verdict.inertia.s),
          detail::range_basis(0.5 * (id + sign), verdict.inertia.u)};
}

inline SplittingBases splitting(const MatrixR& h) { return splitting(h, default_tau(h)); }

}  // namespace hyperflow
