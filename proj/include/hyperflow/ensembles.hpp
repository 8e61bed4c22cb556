#pragma once

// Seeded matrix ensembles shared by the verification suites and tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hyperflow/robustness.hpp"

namespace hyperflow::ensembles {

// Entries i.i.d. N(0, 1/d).
inline MatrixR gaussian(int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = scale * rng.normal();
  return MatrixR(std::move(m));
}

// Eigenvalues in [-2, 2] x [-2, 2] with pairwise separation >= 0.25 (real
// ones or conjugate pairs with |Im| >= 0.2), conjugated by a similarity of
// condition number in [1, 10]. Well-conditioned eigenproblems by
// construction, not necessarily hyperbolic.
inline MatrixR well_conditioned(int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> placed;
  auto separated = [&](Complex z) {
    for (const Complex& p : placed)
      if (std::abs(p - z) < 0.25) return false;
    return true;
  };
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
  int pos = 0;
  while (pos < d) {
    const bool pair = (d - pos >= 2) && rng.uniform() < 0.5;
    const double re = rng.uniform(-2.0, 2.0);
    if (pair) {
      const double im = rng.uniform(0.2, 2.0);
      const Complex z(re, im);
      if (!separated(z) || !separated(std::conj(z))) continue;
      placed.push_back(z);
      placed.push_back(std::conj(z));
      block(pos, pos) = re;
      block(pos + 1, pos + 1) = re;
      block(pos, pos + 1) = im;
      block(pos + 1, pos) = -im;
      pos += 2;
    } else {
      const Complex z(re, 0.0);
      if (!separated(z)) continue;
      placed.push_back(z);
      block(pos, pos) = re;
      pos += 1;
    }
  }
  const Similarity sim = random_similarity(d, rng.uniform(1.0, 10.0), rng);
  return MatrixR(sim.t * block * sim.t_inv);
}

// Random class and conditioning in [1, max_conditioning] (log-uniform).
inline MatrixR random_hyperbolic(int d, double max_conditioning, std::uint64_t seed,
                                 ConjugacyClass* cls_out = nullptr) {
  Rng rng(seed);
  const int s = rng.integer(0, d);
  const ConjugacyClass cls{s, d - s, d};
  const double kappa = std::exp(rng.uniform() * std::log(max_conditioning));
  if (cls_out) *cls_out = cls;
  return generate(cls, kappa, rng.bits());
}

// Mixed ensemble for the density construction; cycles through families
// that include matrices with eigenvalues exactly on the imaginary axis.
enum class DensityFamily {
  Rotation,     // orthogonally conjugated rotation generators (pure imaginary pairs)
  Nilpotent,    // strictly upper triangular
  Zero,
  SingularDiagonal,
  Hyperbolic,
  Gaussian,
  MixedNormal,  // orthogonally conjugated rotation + zero + real block
};

inline constexpr int kDensityFamilies = 7;

inline MatrixR density_case(int index, std::uint64_t seed, DensityFamily* family_out = nullptr) {
  Rng rng(seed);
  const auto family = static_cast<DensityFamily>(index % kDensityFamilies);
  if (family_out) *family_out = family;
  const int d = 1 + (index / kDensityFamilies) % 6;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);

  auto conjugate_orthogonally = [&](const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd q = random_orthogonal(d, rng);
    return Eigen::MatrixXd(q * x * q.transpose());
  };

  switch (family) {
    case DensityFamily::Rotation: {
      for (int k = 0; k + 1 < d; k += 2) {
        const double w = rng.uniform(0.1, 3.0);
        m(k, k + 1) = w;
        m(k + 1, k) = -w;
      }
      m = conjugate_orthogonally(m);
      break;
    }
    case DensityFamily::Nilpotent:
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) m(i, j) = rng.normal();
      break;
    case DensityFamily::Zero:
      break;
    case DensityFamily::SingularDiagonal:
      for (int i = 0; i < d; ++i) m(i, i) = (i % 2 == 0) ? 0.0 : rng.uniform(-3.0, 3.0);
      break;
    case DensityFamily::Hyperbolic:
      return random_hyperbolic(d, 100.0, rng.bits());
    case DensityFamily::Gaussian:
      return gaussian(d, rng.bits());
    case DensityFamily::MixedNormal: {
      int k = 0;
      if (d >= 2) {
        const double w = rng.uniform(0.1, 3.0);
        m(0, 1) = w;
        m(1, 0) = -w;
        k = 2;
      }
      for (; k < d; ++k) m(k, k) = (k % 2 == 0) ? 0.0 : rng.uniform(-3.0, 3.0);
      m = conjugate_orthogonally(m);
      break;
    }
  }
  return MatrixR(std::move(m));
}

}  // namespace hyperflow::ensembles
