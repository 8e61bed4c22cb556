#pragma once

// Property suites runnable from the command line (`hyperflow verify`).

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperflow/ensembles.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/robustness.hpp"
#include "hyperflow/spectral.hpp"

namespace hyperflow {

struct PropertyResult {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;  // largest observed discrepancy, where meaningful

  bool ok() const { return passed == total; }
  void record(bool pass, double value = 0.0) {
    ++total;
    if (pass) ++passed;
    worst = std::max(worst, value);
  }
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool ok() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.ok(); });
  }
};

inline constexpr std::array<std::string_view, 4> kSuites = {"openness", "density", "vieta",
                                                            "oracle"};

namespace suites {

// 1000 generated hyperbolic H (d = 2..6, conditioning <= 100), one
// perturbation each with ||E|| < margin(H).lower. Any inertia change fails.
inline SuiteResult openness(std::uint64_t seed) {
  Rng master(seed);
  PropertyResult positive{"margin_positive"};
  PropertyResult kept{"inertia_preserved"};
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 5;
    const MatrixR h = ensembles::random_hyperbolic(d, 100.0, master.bits());
    const double tau = default_tau(h);
    const MarginResult m = margin(h, tau, 1e-6);
    positive.record(m.lower > 0.0);
    if (m.lower <= 0.0) continue;
    const MatrixR e = random_perturbation(d, m.lower * (1.0 - 1e-9), master.bits());
    const Inertia base = inertia_of(eigenvalues(h, {.estimate_residual = false}), tau);
    const Inertia moved = inertia_of(eigenvalues(h + e, {.estimate_residual = false}), tau);
    kept.record(moved.same_counts(base));
  }
  return {"openness", seed, {positive, kept}};
}

// 500 mixed matrices (rotation, nilpotent, zero, ...) at bounds 1e-2 and
// 1e-6: the shift must not exceed the bound and the result is Hyperbolic.
inline SuiteResult density(std::uint64_t seed) {
  Rng master(seed);
  PropertyResult bounded{"shift_within_bound"};
  PropertyResult hyperbolic{"result_hyperbolic"};
  for (int i = 0; i < 500; ++i) {
    const MatrixR a = ensembles::density_case(i, master.bits());
    const double tau = default_tau(a);
    for (double bound : {1e-2, 1e-6}) {
      try {
        const HyperbolizeResult r = hyperbolize(a, tau, bound);
        const double moved = op_norm2(r.shifted - a);
        bounded.record(r.epsilon <= bound && std::abs(moved - r.epsilon) <= 1e-12 * (1.0 + bound),
                       std::abs(moved - r.epsilon));
        hyperbolic.record(r.verdict.hyperbolic());
      } catch (const Error&) {
        bounded.record(false);
        hyperbolic.record(false);
      }
    }
  }
  return {"density", seed, {bounded, hyperbolic}};
}

// 1000 random matrices, d = 1..8: |prod lambda - det| / (1 + |det|) <= 1e-8.
inline SuiteResult vieta(std::uint64_t seed) {
  Rng master(seed);
  PropertyResult p{"product_equals_det"};
  for (int i = 0; i < 1000; ++i) {
    const double disc = vieta_check(ensembles::gaussian(1 + i % 8, master.bits()));
    p.record(disc <= 1e-8, disc);
  }
  return {"vieta", seed, {p}};
}

// 1000 well-conditioned matrices, d = 1..8: QR eigenvalues and the roots of
// the Faddeev-LeVerrier polynomial agree within 1e-6 under optimal matching.
inline SuiteResult oracle(std::uint64_t seed) {
  Rng master(seed);
  PropertyResult p{"qr_matches_charpoly_roots"};
  for (int i = 0; i < 1000; ++i) {
    const MatrixR a = ensembles::well_conditioned(1 + i % 8, master.bits());
    const Spectrum qr = eigenvalues(a, {.estimate_residual = false});
    const Spectrum roots = poly_roots(char_poly(a));
    const double gap = match_multisets(qr.values, roots.values).max_distance;
    p.record(gap <= 1e-6, gap);
  }
  return {"oracle", seed, {p}};
}

}  // namespace suites

inline SuiteResult run_suite(std::string_view name, std::uint64_t seed) {
  if (name == "openness") return suites::openness(seed);
  if (name == "density") return suites::density(seed);
  if (name == "vieta") return suites::vieta(seed);
  if (name == "oracle") return suites::oracle(seed);
  throw InvalidArgument("unknown suite '" + std::string(name) +
                        "' (expected openness, density, vieta or oracle)");
}

inline json to_json(const SuiteResult& r) {
  json props = json::array();
  for (const PropertyResult& p : r.properties) {
    props.push_back(json{{"name", p.name},
                         {"passed", p.passed},
                         {"total", p.total},
                         {"worst", p.worst},
                         {"ok", p.ok()}});
  }
  return json{{"suite", r.suite}, {"seed", r.seed}, {"ok", r.ok()}, {"properties", props}};
}

}  // namespace hyperflow
