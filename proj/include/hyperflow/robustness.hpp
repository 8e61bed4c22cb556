#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hyperflow/densemat.hpp"
#include "hyperflow/inertia.hpp"
#include "hyperflow/matching.hpp"
#include "hyperflow/rng.hpp"
#include "hyperflow/spectral.hpp"

namespace hyperflow {

// ---------------------------------------------------------------------------
// Density: shifting by eps*I moves every eigenvalue by +eps.
// ---------------------------------------------------------------------------

struct HyperbolizeResult {
  double epsilon = 0.0;
  MatrixR shifted;
  // min |Re lambda| over the eigenvalues of A off the tau band; +inf if none.
  double delta = std::numeric_limits<double>::infinity();
  HyperbolicityVerdict verdict;
};

// eps = min(eps_cap, delta / 2). On-axis eigenvalues move to Re = eps > tau and
// off-axis ones keep their sign since eps < delta.
inline HyperbolizeResult hyperbolize(const MatrixR& a, double tau, double eps_cap) {
  if (!(eps_cap > 0.0)) throw InvalidArgument("hyperbolize: eps_cap must be > 0");
  if (!(tau >= 0.0)) throw InvalidArgument("hyperbolize: tau must be >= 0");
  const Spectrum spectrum = eigenvalues(a, {.estimate_residual = false});
  double delta = std::numeric_limits<double>::infinity();
  for (const Complex& v : spectrum.values) {
    const double re = std::abs(v.real());
    if (re > tau) delta = std::min(delta, re);
  }
  const double eps = std::min(eps_cap, 0.5 * delta);
  if (eps <= tau) {
    throw ShiftTooSmall("hyperbolize: shift " + std::to_string(eps) +
                        " does not exceed tau=" + std::to_string(tau));
  }
  MatrixR shifted = shift(a, eps);
  HyperbolicityVerdict verdict = classify(shifted, tau);
  return {eps, std::move(shifted), delta, std::move(verdict)};
}

// ---------------------------------------------------------------------------
// Margin: spectral-norm distance to the nearest matrix with an eigenvalue on
// the imaginary axis, min over real w of sigma_min(A - iwI).
// ---------------------------------------------------------------------------

struct MarginResult {
  double lower = 0.0;
  double upper = 0.0;
  double omega_star = 0.0;
  int iterations = 0;
  VerdictKind verdict = VerdictKind::NonHyperbolic;
};

inline double imaginary_axis_gap(const MatrixR& a, double omega) {
  Eigen::MatrixXcd m = a.eigen().cast<Complex>();
  m.diagonal().array() -= Complex(0.0, omega);
  return detail::sigma_min_dense(m);
}

// Scan g(w) = sigma_min(A - iwI) on 4d+17 equispaced points of
// [0, ||A||_2 + sigma_min(A)] (g is even in w for real A, and a minimiser
// satisfies |w| <= ||A + E|| <= ||A|| + g(0)), plus the points |Im lambda|
// of the spectrum, near which the narrow basins of nearly-imaginary
// eigenvalues sit. Golden-section refinement then runs on the bracket
// around every local minimum of the scan down to width tol.
//
// upper is a value of g actually attained, hence a rigorous upper bound on
// the distance. lower = upper - tol is only as good as the scan: a basin
// narrower than the grid spacing and away from every |Im lambda| can be missed.
inline MarginResult margin(const MatrixR& a, double tau, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("margin: tol must be > 0");
  MarginResult out;
  const HyperbolicityVerdict verdict = classify(a, tau);
  out.verdict = verdict.kind;
  if (out.verdict != VerdictKind::Hyperbolic) return out;

  const int d = a.dim();
  const int uniform = 4 * d + 17;
  const double g0 = imaginary_axis_gap(a, 0.0);
  const double width = op_norm2(a) + g0;

  std::vector<double> omega;
  for (int k = 0; k < uniform; ++k) omega.push_back(width * k / (uniform - 1));
  for (const Complex& z : verdict.spectrum.values) {
    if (z.imag() > 0.0 && z.imag() < width) omega.push_back(z.imag());
  }
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());

  const int samples = static_cast<int>(omega.size());
  std::vector<double> g(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) {
    g[k] = k == 0 ? g0 : imaginary_axis_gap(a, omega[k]);
  }

  double best = g[0];
  double best_omega = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (g[uk] < best) {
      best = g[uk];
      best_omega = omega[uk];
    }
  }

  constexpr double inv_phi = 0.6180339887498949;
  for (int k = 0; k < samples; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const bool left_ok = k == 0 || g[uk] <= g[uk - 1];
    const bool right_ok = k == samples - 1 || g[uk] <= g[uk + 1];
    if (!left_ok || !right_ok) continue;

    double lo = omega[static_cast<std::size_t>(std::max(k - 1, 0))];
    double hi = omega[static_cast<std::size_t>(std::min(k + 1, samples - 1))];
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = imaginary_axis_gap(a, x1);
    double f2 = imaginary_axis_gap(a, x2);
    while (hi - lo > tol) {
      ++out.iterations;
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = imaginary_axis_gap(a, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = imaginary_axis_gap(a, x2);
      }
    }
    if (f1 < best) {
      best = f1;
      best_omega = x1;
    }
    if (f2 < best) {
      best = f2;
      best_omega = x2;
    }
  }

  out.upper = best;
  out.omega_star = best_omega;
  out.lower = std::max(0.0, best - tol);
  return out;
}

inline MarginResult margin(const MatrixR& a, double tol = 1e-6) {
  return margin(a, default_tau(a), tol);
}

// ---------------------------------------------------------------------------
// Perturbation campaigns.
// ---------------------------------------------------------------------------

struct FlipWitness {
  MatrixR perturbation;
  Inertia inertia;
};

struct CampaignReport {
  Inertia base_inertia;
  int samples = 0;
  double radius = 0.0;
  int flips = 0;
  std::uint64_t seed = 0;
  std::vector<FlipWitness> flip_witnesses;  // at most kMaxWitnesses

  static constexpr std::size_t kMaxWitnesses = 10;
};

// Gaussian direction, scaled to ||E||_2 = radius * U with U uniform in (0, 1].
inline MatrixR random_perturbation(int d, double radius, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd e(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = rng.normal();
  const double fraction = rng.uniform_open_closed();
  const double norm = op_norm2(e);
  return MatrixR(e * (radius * fraction / norm));
}

// Counts inertia flips of H + E over `samples` random perturbations, sample
// i seeded with seed ^ i. `extra` perturbations are evaluated after the
// random ones and counted in `samples`.
inline CampaignReport perturb_campaign(const MatrixR& h, int samples, double radius,
                                       std::uint64_t seed, double tau,
                                       std::span<const MatrixR> extra = {}) {
  if (samples < 1) throw InvalidArgument("perturb_campaign: samples must be >= 1");
  if (!(radius > 0.0)) throw InvalidArgument("perturb_campaign: radius must be > 0");
  const auto base = classify(h, tau);
  if (!base.hyperbolic()) {
    throw NotHyperbolic(std::string("perturb_campaign: base matrix is ") + to_string(base.kind));
  }

  CampaignReport report;
  report.base_inertia = base.inertia;
  report.radius = radius;
  report.seed = seed;

  auto evaluate = [&](const MatrixR& e) {
    ++report.samples;
    const Inertia in =
        inertia_of(eigenvalues(h + e, {.estimate_residual = false}), tau);
    if (!in.same_counts(report.base_inertia)) {
      ++report.flips;
      if (report.flip_witnesses.size() < CampaignReport::kMaxWitnesses) {
        report.flip_witnesses.push_back({e, in});
      }
    }
  };

  for (int i = 0; i < samples; ++i) {
    evaluate(random_perturbation(h.dim(), radius, seed ^ static_cast<std::uint64_t>(i)));
  }
  for (const MatrixR& e : extra) {
    MatrixR::require_same_dim(h, e);
    evaluate(e);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Consequences of A_n -> H along a caller-supplied sequence.
// ---------------------------------------------------------------------------

struct ContinuityReport {
  // pairings[n][i] = j: eigenvalue i of A_n is matched to eigenvalue j of H.
  std::vector<std::vector<int>> pairings;
  std::vector<double> max_mismatch;
  std::vector<double> distance;  // ||A_n - H||_2
  bool monotone_tail = false;
};

// Optimal matching of spectra at every step (the permutation sigma).
//
// monotone_tail: take the longest suffix over which ||A_n - H|| is
// non-increasing; the mismatch must be non-increasing (up to 1e-12 relative
// slack) over the second half of that suffix.
inline ContinuityReport continuity_check(const MatrixR& h, std::span<const MatrixR> sequence) {
  if (sequence.empty()) throw InvalidArgument("continuity_check: sequence is empty");
  const Spectrum target = eigenvalues(h, {.estimate_residual = false});

  ContinuityReport report;
  for (const MatrixR& an : sequence) {
    MatrixR::require_same_dim(h, an);
    const Spectrum s = eigenvalues(an, {.estimate_residual = false});
    const Matching m = match_multisets(s.values, target.values);
    report.pairings.push_back(m.permutation);
    report.max_mismatch.push_back(m.max_distance);
    report.distance.push_back(op_norm2(an - h));
  }

  const std::size_t n = sequence.size();
  std::size_t start = n - 1;
  while (start > 0 && report.distance[start] <= report.distance[start - 1]) --start;
  const std::size_t tail = start + (n - start) / 2;
  const double scale =
      1.0 + *std::max_element(report.max_mismatch.begin(), report.max_mismatch.end());
  report.monotone_tail = true;
  for (std::size_t k = tail + 1; k < n; ++k) {
    if (report.max_mismatch[k] > report.max_mismatch[k - 1] + 1e-12 * scale) {
      report.monotone_tail = false;
    }
  }
  return report;
}

// |prod lambda_i - det A| / (1 + |det A|).
inline double vieta_check(const MatrixR& a) {
  const Complex product = eigenvalues(a, {.estimate_residual = false}).product();
  const double d = det(a);
  return std::abs(product - d) / (1.0 + std::abs(d));
}

// ---------------------------------------------------------------------------
// Test ensembles.
// ---------------------------------------------------------------------------

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
inline Eigen::MatrixXd random_orthogonal(int d, Rng& rng) {
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

struct Similarity {
  Eigen::MatrixXd t;
  Eigen::MatrixXd t_inv;
};

// T = U diag(sigma) V^T with sigma_max / sigma_min = conditioning exactly.
inline Similarity random_similarity(int d, double conditioning, Rng& rng) {
  const Eigen::MatrixXd u = random_orthogonal(d, rng);
  const Eigen::MatrixXd v = random_orthogonal(d, rng);
  Eigen::VectorXd sigma(d);
  const double log_k = std::log(conditioning);
  for (int i = 0; i < d; ++i) {
    const double f = (i == 0) ? 0.0 : (i == d - 1) ? 1.0 : rng.uniform();
    sigma(i) = std::exp(f * log_k);
  }
  return {u * sigma.asDiagonal() * v.transpose(),
          v * sigma.cwiseInverse().asDiagonal() * u.transpose()};
}

// Block-diagonal D with s eigenvalues of real part in [-2, -0.1] and u in
// [0.1, 2] (complex pairs as 2x2 rotation-scaling blocks), conjugated by a
// random similarity of condition number `conditioning`.
inline MatrixR generate(const ConjugacyClass& cls, double conditioning, std::uint64_t seed) {
  if (cls.d < 1 || cls.s < 0 || cls.u < 0 || cls.s + cls.u != cls.d) {
    throw InvalidClass("generate: need s + u = d with s, u >= 0 and d >= 1 (got s=" +
                       std::to_string(cls.s) + ", u=" + std::to_string(cls.u) +
                       ", d=" + std::to_string(cls.d) + ")");
  }
  if (!(conditioning >= 1.0)) throw InvalidArgument("generate: conditioning must be >= 1");

  Rng rng(seed);
  const int d = cls.d;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
  int pos = 0;
  auto fill = [&](int count, double sign) {
    int left = count;
    while (left > 0) {
      const double re = sign * rng.uniform(0.1, 2.0);
      if (left >= 2 && rng.uniform() < 0.5) {
        const double im = rng.uniform(0.1, 2.0);
        block(pos, pos) = re;
        block(pos + 1, pos + 1) = re;
        block(pos, pos + 1) = im;
        block(pos + 1, pos) = -im;
        pos += 2;
        left -= 2;
      } else {
        block(pos, pos) = re;
        pos += 1;
        left -= 1;
      }
    }
  };
  fill(cls.s, -1.0);
  fill(cls.u, 1.0);

  const Similarity sim = random_similarity(d, conditioning, rng);
  return MatrixR(sim.t * block * sim.t_inv);
}

}  // namespace hyperflow
