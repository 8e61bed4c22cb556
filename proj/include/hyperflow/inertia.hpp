#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "hyperflow/densemat.hpp"
#include "hyperflow/spectral.hpp"

namespace hyperflow {

// Stable / unstable / indeterminate eigenvalue counts at tolerance tau:
// s counts Re < -tau, u counts Re > tau, c counts the band [-tau, tau].
struct Inertia {
  int s = 0;
  int u = 0;
  int c = 0;
  double tau = 0.0;

  int dim() const { return s + u + c; }
  bool same_counts(const Inertia& o) const { return s == o.s && u == o.u && c == o.c; }
};

inline Inertia inertia_of(const Spectrum& spectrum, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("inertia_of: tau must be >= 0");
  Inertia in{.tau = tau};
  for (const Complex& v : spectrum.values) {
    if (v.real() < -tau) {
      ++in.s;
    } else if (v.real() > tau) {
      ++in.u;
    } else {
      ++in.c;
    }
  }
  return in;
}

// 1e-9 * (1 + ||A||_2).
inline double default_tau(const MatrixR& a) { return 1e-9 * (1.0 + op_norm2(a)); }

enum class VerdictKind { Hyperbolic, NonHyperbolic, Indeterminate };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Hyperbolic: return "hyperbolic";
    case VerdictKind::NonHyperbolic: return "non_hyperbolic";
    case VerdictKind::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct HyperbolicityVerdict {
  VerdictKind kind = VerdictKind::Indeterminate;
  Inertia inertia;
  // Eigenvalue closest to the imaginary axis when the verdict is not
  // Hyperbolic.
  std::optional<Complex> witness;
  Spectrum spectrum;

  bool hyperbolic() const { return kind == VerdictKind::Hyperbolic; }
};

namespace detail {

// Smallest |Re|, then smallest |Im|, then lexicographic (Re, Im).
inline bool witness_before(Complex a, Complex b) {
  const double ra = std::abs(a.real()), rb = std::abs(b.real());
  if (ra != rb) return ra < rb;
  const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
  if (ia != ib) return ia < ib;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace detail

// Three-valued hyperbolicity test. With m = min |Re lambda|:
//   m <= tau                        -> NonHyperbolic
//   tau < m <= tau + residual_bound -> Indeterminate
//   otherwise                       -> Hyperbolic
inline HyperbolicityVerdict classify(const Spectrum& spectrum, double tau) {
  HyperbolicityVerdict v;
  v.inertia = inertia_of(spectrum, tau);
  v.spectrum = spectrum;

  std::optional<Complex> closest;
  for (const Complex& z : spectrum.values) {
    if (!closest || detail::witness_before(z, *closest)) closest = z;
  }
  const double gap = closest ? std::abs(closest->real()) : INFINITY;
  if (gap <= tau) {
    v.kind = VerdictKind::NonHyperbolic;
    v.witness = closest;
  } else if (gap <= tau + spectrum.residual_bound) {
    v.kind = VerdictKind::Indeterminate;
    v.witness = closest;
  } else {
    v.kind = VerdictKind::Hyperbolic;
  }
  return v;
}

inline HyperbolicityVerdict classify(const MatrixR& a, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("classify: tau must be >= 0");
  return classify(eigenvalues(a), tau);
}

inline HyperbolicityVerdict classify(const MatrixR& a) { return classify(a, default_tau(a)); }

// The class H_s a hyperbolic matrix belongs to; s + u = d.
struct ConjugacyClass {
  int s = 0;
  int u = 0;
  int d = 0;

  friend bool operator==(const ConjugacyClass&, const ConjugacyClass&) = default;
};

inline ConjugacyClass conjugacy_class(const MatrixR& a, double tau) {
  const auto v = classify(a, tau);
  if (!v.hyperbolic()) {
    throw NotHyperbolic(std::string("conjugacy_class: matrix is ") + to_string(v.kind) +
                        " at tau=" + std::to_string(tau));
  }
  return {v.inertia.s, v.inertia.u, a.dim()};
}

inline ConjugacyClass conjugacy_class(const MatrixR& a) {
  return conjugacy_class(a, default_tau(a));
}

// Whether the flows e^{tA} and e^{tB} are topologically conjugate, i.e. A
// and B lie in the same H_s. Only defined for hyperbolic inputs.
inline bool same_class(const MatrixR& a, const MatrixR& b, double tau) {
  MatrixR::require_same_dim(a, b);
  return conjugacy_class(a, tau) == conjugacy_class(b, tau);
}

inline bool same_class(const MatrixR& a, const MatrixR& b) {
  MatrixR::require_same_dim(a, b);
  return conjugacy_class(a) == conjugacy_class(b);
}

}  // namespace hyperflow
