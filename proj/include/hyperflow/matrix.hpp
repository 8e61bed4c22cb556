#pragma once

#include <complex>
#include <cstdio>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "hyperflow/error.hpp"

namespace hyperflow {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;

namespace detail {

// printf-style rendering of one double.
inline std::string fmt_double(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

template <typename Dense>
void check_square_finite(const Dense& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw NonFiniteEntry(std::string(what) + ": entries must be finite");
  }
}

}  // namespace detail

// Dense real d x d matrix with finite entries. Validated on construction,
// so every operation downstream may assume a square, finite input.
class MatrixR {
 public:
  explicit MatrixR(Eigen::MatrixXd values) : m_(std::move(values)) {
    detail::check_square_finite(m_, "MatrixR");
  }

  MatrixR(std::initializer_list<std::initializer_list<double>> rows)
      : MatrixR(from_rows(rows)) {}

  static MatrixR identity(int d) { return MatrixR(Eigen::MatrixXd::Identity(d, d)); }
  static MatrixR zero(int d) { return MatrixR(Eigen::MatrixXd::Zero(d, d)); }

  static MatrixR diagonal(std::span<const double> diag) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(diag.size()),
                                              static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    }
    return MatrixR(std::move(m));
  }
  static MatrixR diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& eigen() const { return m_; }

  double trace() const { return m_.trace(); }
  MatrixR transpose() const { return MatrixR(m_.transpose()); }

  friend MatrixR operator+(const MatrixR& a, const MatrixR& b) {
    require_same_dim(a, b);
    return MatrixR(a.m_ + b.m_);
  }
  friend MatrixR operator-(const MatrixR& a, const MatrixR& b) {
    require_same_dim(a, b);
    return MatrixR(a.m_ - b.m_);
  }
  friend MatrixR operator*(const MatrixR& a, const MatrixR& b) {
    require_same_dim(a, b);
    return MatrixR(a.m_ * b.m_);
  }
  friend MatrixR operator*(double c, const MatrixR& a) { return MatrixR(c * a.m_); }
  friend MatrixR operator-(const MatrixR& a) { return MatrixR(-a.m_); }
  friend Vector operator*(const MatrixR& a, const Vector& x) {
    if (x.size() != a.m_.cols()) {
      throw DimensionMismatch("matrix-vector product: dimension " + std::to_string(a.dim()) +
                              " vs vector of length " + std::to_string(x.size()));
    }
    return a.m_ * x;
  }
  friend bool operator==(const MatrixR& a, const MatrixR& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

  static void require_same_dim(const MatrixR& a, const MatrixR& b) {
    if (a.dim() != b.dim()) {
      throw DimensionMismatch("dimension " + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()));
    }
  }

 private:
  static Eigen::MatrixXd from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw InvalidArgument("MatrixR: row " + std::to_string(i) + " has " +
                              std::to_string(row.size()) + " entries, expected " +
                              std::to_string(n));
      }
      Eigen::Index j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  Eigen::MatrixXd m_;
};

// Dense complex d x d matrix with finite entries.
class MatrixC {
 public:
  explicit MatrixC(Eigen::MatrixXcd values) : m_(std::move(values)) {
    detail::check_square_finite(m_, "MatrixC");
  }
  explicit MatrixC(const MatrixR& real) : m_(real.eigen().cast<Complex>()) {}

  MatrixC(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    m_.resize(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw InvalidArgument("MatrixC: row " + std::to_string(i) + " has wrong length");
      }
      Eigen::Index j = 0;
      for (const Complex& v : row) m_(i, j++) = v;
      ++i;
    }
    detail::check_square_finite(m_, "MatrixC");
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXcd& eigen() const { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

// A + eps * I.
inline MatrixR shift(const MatrixR& a, double eps) {
  Eigen::MatrixXd m = a.eigen();
  m.diagonal().array() += eps;
  return MatrixR(std::move(m));
}

// LU with partial pivoting; the sign follows the row swaps.
inline double det(const MatrixR& a) { return a.eigen().partialPivLu().determinant(); }
inline Complex det(const MatrixC& a) { return a.eigen().partialPivLu().determinant(); }

}  // namespace hyperflow
