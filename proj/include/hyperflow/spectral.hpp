#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hyperflow/densemat.hpp"
#include "hyperflow/hermitian.hpp"
#include "hyperflow/matching.hpp"
#include "hyperflow/matrix.hpp"

namespace hyperflow {

// Eigenvalues with multiplicity, stored by repetition; order unspecified.
struct Spectrum {
  std::vector<Complex> values;
  double residual_bound = 0.0;

  int size() const { return static_cast<int>(values.size()); }

  Complex product() const {
    return std::accumulate(values.begin(), values.end(), Complex(1.0),
                           std::multiplies<Complex>());
  }

  Spectrum shifted(double eps) const {
    Spectrum s = *this;
    for (auto& v : s.values) v += eps;
    return s;
  }
};

// Coefficients c_0..c_d of p(z) = det(A - zI) = sum c_k z^k, so c_d = (-1)^d.
class CharPoly {
 public:
  explicit CharPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.size() < 2) throw InvalidArgument("CharPoly: degree must be at least 1");
    for (double v : c_) {
      if (!std::isfinite(v)) throw NonFiniteEntry("CharPoly: coefficients must be finite");
    }
    const double lead = (degree() % 2 == 0) ? 1.0 : -1.0;
    if (c_.back() != lead) {
      throw InvalidArgument("CharPoly: leading coefficient must be (-1)^d");
    }
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

  Complex evaluate(Complex z) const {
    Complex acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

 private:
  std::vector<double> c_;
};

struct EigenOptions {
  // Compute the per-eigenvalue backward error sigma_min(A - lambda I).
  // Costs d smallest-singular-value evaluations.
  bool estimate_residual = true;
};

namespace detail {

// Diagonal similarity by powers of two so row and column norms are comparable.
inline void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg(Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Eigen::VectorXd v = h.col(k).tail(m);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const double alpha = (v(0) >= 0.0) ? -xnorm : xnorm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    h.bottomRows(m) -= 2.0 * v * (v.transpose() * h.bottomRows(m));
    h.rightCols(m) -= 2.0 * (h.rightCols(m) * v) * v.transpose();
    h(k + 1, k) = alpha;
    h.col(k).tail(m - 1).setZero();
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr
// structure). Deflates from the bottom; a single deflation step is allowed
// at most `cap` iterations, with exceptional shifts every tenth.
inline std::vector<Complex> hessenberg_qr(const Eigen::MatrixXd& hess, int cap) {
  const int n = static_cast<int>(hess.rows());
  // 1-based working copy.
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) {
      a[i][j] = hess(i - 1, j - 1);
      anorm += std::abs(a[i][j]);
    }

  std::vector<double> wr(n + 1, 0.0), wi(n + 1, 0.0);
  int nn = n;
  double t = 0.0;
  while (nn >= 1) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 2; --l) {
        double s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
        if (s == 0.0) s = anorm;
        if (std::abs(a[l][l - 1]) + s == s) {
          a[l][l - 1] = 0.0;
          break;
        }
      }
      double x = a[nn][nn];
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = a[nn - 1][nn - 1];
        double w = a[nn][nn - 1] * a[nn - 1][nn];
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (its >= cap) {
            throw NonConvergence("eigenvalues: QR iteration exceeded " + std::to_string(cap) +
                                 " iterations on one deflation step");
          }
          if (its > 0 && its % 10 == 0) {
            t += x;
            for (int i = 1; i <= nn; ++i) a[i][i] -= x;
            const double s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0, z;
          for (m = nn - 2; m >= l; --m) {
            z = a[m][m];
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - r - s;
            r = a[m + 2][m + 1];
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a[m - 1][m - 1]) + std::abs(z) + std::abs(a[m + 1][m + 1]));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a[i][i - 2] = 0.0;
            if (i != m + 2) a[i][i - 3] = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a[k][k - 1];
              q = a[k + 1][k - 1];
              r = 0.0;
              if (k != nn - 1) r = a[k + 2][k - 1];
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a[k][k - 1] = -a[k][k - 1];
              } else {
                a[k][k - 1] = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a[k][j] + q * a[k + 1][j];
                if (k != nn - 1) {
                  p += r * a[k + 2][j];
                  a[k + 2][j] -= p * z;
                }
                a[k + 1][j] -= p * y;
                a[k][j] -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a[i][k] + y * a[i][k + 1];
                if (k != nn - 1) {
                  p += z * a[i][k + 2];
                  a[i][k + 2] -= p * r;
                }
                a[i][k + 1] -= p * q;
                a[i][k] -= p;
              }
            }
          }
        }
      }
    } while (nn >= 1 && l < nn - 1);
  }

  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) out.emplace_back(wr[i], wi[i]);
  return out;
}

// Coefficients of prod (z - r_i), lowest degree first, leading 1.
inline std::vector<Complex> expand_monic(std::span<const Complex> roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace detail

// All eigenvalues of A with algebraic multiplicity: balancing, Householder
// Hessenberg reduction, then Francis double-shift QR with deflation.
// residual_bound is the largest backward error sigma_min(A - lambda I) over
// the computed eigenvalues, floored at d * eps * ||A||_F.
inline Spectrum eigenvalues(const MatrixR& a, EigenOptions options = {}) {
  const int d = a.dim();
  Eigen::MatrixXd work = a.eigen();
  detail::balance(work);
  detail::hessenberg(work);

  Spectrum out;
  out.values = detail::hessenberg_qr(work, 100 * d);

  const double floor = d * std::numeric_limits<double>::epsilon() * a.eigen().norm();
  out.residual_bound = floor;
  if (options.estimate_residual) {
    const Eigen::MatrixXcd ac = a.eigen().cast<Complex>();
    const auto identity = Eigen::MatrixXcd::Identity(d, d);
    for (const Complex& lambda : out.values) {
      out.residual_bound =
          std::max(out.residual_bound, detail::sigma_min_dense(ac - lambda * identity));
    }
  }
  return out;
}

// Faddeev-LeVerrier: M_k = A M_{k-1} + a_{d-k+1} I, a_{d-k} = -tr(A M_k) / k
// gives det(zI - A); the result is rescaled by (-1)^d to det(A - zI).
inline CharPoly char_poly(const MatrixR& a) {
  const int d = a.dim();
  const Eigen::MatrixXd& am = a.eigen();
  std::vector<double> monic(static_cast<std::size_t>(d) + 1, 0.0);
  monic[static_cast<std::size_t>(d)] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k <= d; ++k) {
    m = am * m;
    m.diagonal().array() += monic[static_cast<std::size_t>(d - k + 1)];
    monic[static_cast<std::size_t>(d - k)] = -(am * m).trace() / k;
  }
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  for (double& c : monic) c *= sign;
  monic.back() = sign;
  return CharPoly(std::move(monic));
}

// All complex roots of sum c_k z^k (c_d != 0) by Aberth-Ehrlich simultaneous
// iteration from a perturbed circle. A root is frozen once its correction is
// below 1e-12 * (1 + |z|) or |p(z)| is within the rounding error of Horner's
// rule at z (no further correction is meaningful there). Roots of a real
// polynomial are symmetrized into exact conjugate pairs afterwards.
inline Spectrum poly_roots(std::span<const double> coeffs) {
  if (coeffs.size() < 2) throw InvalidArgument("poly_roots: degree must be at least 1");
  if (coeffs.back() == 0.0) throw InvalidArgument("poly_roots: leading coefficient is zero");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 1000;

  std::vector<double> b(coeffs.begin(), coeffs.end());
  for (double& v : b) v /= coeffs.back();

  Spectrum out;
  // Exact zero roots.
  std::size_t zeros = 0;
  while (zeros + 1 < b.size() && b[zeros] == 0.0) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) out.values.emplace_back(0.0, 0.0);
  b.erase(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(zeros));

  const int n = static_cast<int>(b.size()) - 1;
  if (n == 0) return out;

  auto horner = [&](Complex z, Complex& p, Complex& dp, double& bound) {
    p = b[static_cast<std::size_t>(n)];
    dp = 0.0;
    double az = std::abs(z);
    bound = std::abs(b[static_cast<std::size_t>(n)]);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + b[static_cast<std::size_t>(k)];
      bound = bound * az + std::abs(b[static_cast<std::size_t>(k)]);
    }
    bound *= 4.0 * (n + 1) * eps;
  };

  // Fujiwara bound on root moduli.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) {
    const double term = std::pow(std::abs(b[static_cast<std::size_t>(k)]), 1.0 / (n - k));
    radius = std::max(radius, k == 0 ? term / std::pow(2.0, 1.0 / n) : term);
  }
  radius = std::max(radius, 1e-300);
  const double centre = -b[static_cast<std::size_t>(n - 1)] / n;
  const double start_radius = 0.5 * radius + 0.5 * std::abs(centre);

  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n + 0.4 + std::numbers::pi / (2.0 * n);
    z[static_cast<std::size_t>(k)] = centre + std::polar(start_radius, angle);
  }

  std::vector<char> frozen(static_cast<std::size_t>(n), 0);
  std::vector<double> last_step(static_cast<std::size_t>(n), 0.0);
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool all_frozen = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (frozen[ui]) continue;
      Complex p, dp;
      double bound;
      horner(z[ui], p, dp, bound);
      if (std::abs(p) <= bound) {
        frozen[ui] = 1;
        continue;
      }
      all_frozen = false;
      const Complex ratio = p / dp;
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[ui] - z[static_cast<std::size_t>(j)]);
      }
      Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        step = Complex(1e-8, 1e-8) * (1.0 + std::abs(z[ui]));
      }
      z[ui] -= step;
      last_step[ui] = std::abs(step);
      if (std::abs(step) < 1e-12 * (1.0 + std::abs(z[ui]))) frozen[ui] = 1;
    }
    if (all_frozen) break;
  }
  if (sweep == kMaxSweeps) {
    throw NonConvergence("poly_roots: Aberth iteration exceeded 1000 sweeps");
  }

  double residual = *std::max_element(last_step.begin(), last_step.end());

  // Real coefficients: pair every root with the conjugate of another and
  // average, so non-real roots come out as exact conjugate pairs.
  std::vector<Complex> conj(z.size());
  std::transform(z.begin(), z.end(), conj.begin(), [](Complex v) { return std::conj(v); });
  const Matching pairing = match_multisets(z, conj);
  bool involution = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto j = static_cast<std::size_t>(pairing.permutation[i]);
    if (static_cast<std::size_t>(pairing.permutation[j]) != i) involution = false;
  }
  if (involution) {
    std::vector<Complex> sym(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto j = static_cast<std::size_t>(pairing.permutation[i]);
      sym[i] = 0.5 * (z[i] + std::conj(z[j]));
      if (j == i) sym[i] = Complex(sym[i].real(), 0.0);
    }
    residual = std::max(residual, 0.5 * pairing.max_distance);
    z = std::move(sym);
  }

  out.values.insert(out.values.end(), z.begin(), z.end());
  out.residual_bound = residual;
  return out;
}

inline Spectrum poly_roots(const CharPoly& p) { return poly_roots(p.coeffs()); }

// (-1)^d (z - r_1) ... (z - r_d), the characteristic polynomial whose roots
// are the given multiset. Throws ConjugacyViolation when the roots do not
// pair into conjugates within max(residual_bound, 1e-8 * (1 + max |r|)).
inline CharPoly poly_from_roots(const Spectrum& roots) {
  const int d = roots.size();
  if (d < 1) throw InvalidArgument("poly_from_roots: need at least one root");

  std::vector<Complex> conj(roots.values.size());
  std::transform(roots.values.begin(), roots.values.end(), conj.begin(),
                 [](Complex v) { return std::conj(v); });
  double largest = 0.0;
  for (const Complex& r : roots.values) largest = std::max(largest, std::abs(r));
  const double tol = std::max(roots.residual_bound, 1e-8 * (1.0 + largest));
  const Matching pairing = match_multisets(roots.values, conj);
  if (pairing.max_distance > tol) {
    throw ConjugacyViolation("poly_from_roots: roots do not pair into conjugates (gap " +
                             std::to_string(pairing.max_distance) + ")");
  }

  const auto monic = detail::expand_monic(roots.values);
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  std::vector<double> c(monic.size());
  for (std::size_t k = 0; k < monic.size(); ++k) c[k] = sign * monic[k].real();
  c.back() = sign;
  return CharPoly(std::move(c));
}

}  // namespace hyperflow
