// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
//   acceptance                 run every criterion
//   acceptance --update-goldens  rewrite the CLI golden files, then run

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "hyperflow/ensembles.hpp"
#include "hyperflow/hyperflow.hpp"
#include "hyperflow/verify.hpp"
#include "test_support.hpp"

using namespace hyperflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) { return detail::fmt_double("%.3g", v); }

// --- 1. openness ---------------------------------------------------------------

Outcome openness() {
  const auto start = std::chrono::steady_clock::now();
  Rng master(1);
  int matrices = 0, perturbations = 0, flips = 0, nonpositive = 0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 5;
    const MatrixR h = ensembles::random_hyperbolic(d, 100.0, master.bits());
    const double tau = default_tau(h);
    const MarginResult m = margin(h, tau, 1e-6);
    ++matrices;
    if (!(m.lower > 0.0)) {
      ++nonpositive;
      continue;
    }
    const Inertia base = inertia_of(eigenvalues(h, {.estimate_residual = false}), tau);
    for (int k = 0; k < 5; ++k) {
      MatrixR e = random_perturbation(d, m.lower, master.bits());
      // The last two sit right at the bound.
      if (k >= 3) e = (m.lower * (1.0 - 1e-9) / op_norm2(e)) * e;
      ++perturbations;
      const Inertia moved = inertia_of(eigenvalues(h + e, {.estimate_residual = false}), tau);
      if (!moved.same_counts(base)) ++flips;
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {flips == 0 && nonpositive == 0 && seconds < 60.0,
          std::to_string(matrices) + " matrices, " + std::to_string(perturbations) +
              " perturbations below margin.lower, flips=" + std::to_string(flips) +
              ", margin<=0: " + std::to_string(nonpositive) + ", " + fmt(seconds) + " s"};
}

// --- 2. density ----------------------------------------------------------------

Outcome density() {
  Rng master(2);
  int cases = 0, failures = 0, on_axis = 0;
  const double bounds[] = {1e-1, 1e-2, 1e-4, 1e-6};
  for (int i = 0; i < 700; ++i) {
    const MatrixR a = ensembles::density_case(i, master.bits());
    const double tau = default_tau(a);
    if (classify(a, tau).kind != VerdictKind::Hyperbolic) ++on_axis;
    for (double bound : bounds) {
      ++cases;
      try {
        const HyperbolizeResult r = hyperbolize(a, tau, bound);
        const bool ok = r.epsilon <= bound && r.verdict.hyperbolic() &&
                        std::abs(op_norm2(r.shifted - a) - r.epsilon) <= 1e-12 * (1 + bound);
        if (!ok) ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  return {failures == 0 && on_axis > 0,
          "700 matrices (" + std::to_string(on_axis) + " non-hyperbolic) x bounds 1e-1..1e-6, " +
              std::to_string(cases) + " cases, failures=" + std::to_string(failures)};
}

// --- 3. eigenvalue oracle --------------------------------------------------------

Outcome oracle() {
  const SuiteResult r = suites::oracle(3);
  const PropertyResult& p = r.properties[0];
  return {r.ok(), std::to_string(p.passed) + "/" + std::to_string(p.total) +
                      " agree within 1e-6, worst " + fmt(p.worst)};
}

// --- 4. Vieta and det A_n -> det H ------------------------------------------------

Outcome vieta() {
  const SuiteResult r = suites::vieta(4);
  const PropertyResult& p = r.properties[0];

  // A_n = H + G/n with G = eps * H * (I + S), ||S|| <= 0.3, so that
  // det A_n - det H = det H * (eps * tr(I + S) / n + O(1/n^2)) with a
  // first-order coefficient bounded away from zero.
  Rng rng(44);
  int sequences = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 7;
    const MatrixR h = ensembles::random_hyperbolic(d, 10.0, rng.bits());
    const Eigen::MatrixXd raw = oracles::random_matrix(d, rng);
    const Eigen::MatrixXd s = raw * (0.3 / op_norm2(raw));
    const double eps = 1e-2;
    const Eigen::MatrixXd g = eps * h.eigen() * (Eigen::MatrixXd::Identity(d, d) + s);
    const double det_h = det(h);
    const double c1 = std::abs(det_h * eps * (d + s.trace()));
    ++sequences;
    double previous = INFINITY;
    for (int n = 1; n <= 20; ++n) {
      const double gap = std::abs(det(MatrixR(h.eigen() + g / n)) - det_h);
      const bool in_envelope = gap <= 2.0 * c1 / n && gap >= 0.5 * c1 / n;
      if (!in_envelope || gap > previous) {
        ++bad;
        break;
      }
      previous = gap;
    }
  }
  return {r.ok() && bad == 0, std::to_string(p.passed) + "/" + std::to_string(p.total) +
                                  " Vieta <= 1e-8 (worst " + fmt(p.worst) + "); " +
                                  std::to_string(sequences - bad) + "/" +
                                  std::to_string(sequences) +
                                  " det sequences monotone in [c/2n, 2c/n]"};
}

// --- 5. shift identity -------------------------------------------------------------

Outcome shift_identity() {
  Rng rng(5);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + i % 8;
    const MatrixR a = ensembles::well_conditioned(d, rng.bits());
    const double eps = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.integer(-6, 0));
    const Spectrum moved = eigenvalues(shift(a, eps), {.estimate_residual = false});
    const Spectrum expected = eigenvalues(a, {.estimate_residual = false}).shifted(eps);
    const Matching m = match_multisets(moved.values, expected.values);
    worst = std::max(worst, m.max_distance);
    if (m.max_distance > 1e-8) ++bad;
  }
  return {bad == 0, "500 (A, eps) pairs, worst displacement error " + fmt(worst)};
}

// --- 6. margin vs Hamiltonian bisection ---------------------------------------------

Outcome margin_cross_check() {
  const double tol = 1e-6;
  Rng rng(6);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MatrixR h = ensembles::random_hyperbolic(2 + i % 4, 100.0, rng.bits());
    const double got = margin(h, tol).upper;
    const double want = oracles::byers_margin(h, 1e-8);
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > 2 * tol) ++bad;
  }
  int normal_bad = 0;
  double normal_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 5;
    const int s = rng.integer(0, d);
    const MatrixR block = generate({s, d - s, d}, 1.0, rng.bits());
    double want = INFINITY;
    for (const Complex& z : oracles::eigen_library_eigenvalues(block)) {
      want = std::min(want, std::abs(z.real()));
    }
    const double got = margin(block, tol).upper;
    normal_worst = std::max(normal_worst, std::abs(got - want));
    if (std::abs(got - want) > tol) ++normal_bad;
  }
  return {bad == 0 && normal_bad == 0,
          "100 random: worst |upper - bisection| " + fmt(worst) + "; 100 normal: worst " +
              "|upper - min|Re|| " + fmt(normal_worst)};
}

// --- 7. flow suite -------------------------------------------------------------------

Outcome flow_suite() {
  Rng rng(7);
  auto scaled = [&](int d, double norm) {
    const Eigen::MatrixXd g = oracles::random_matrix(d, rng);
    return MatrixR(g * (norm / op_norm2(g)));
  };
  int group = 0, determinant = 0, mapping = 0, decay = 0, closed = 0;
  for (int i = 0; i < 200; ++i) {
    const MatrixR h = scaled(1 + i % 6, rng.uniform(0.0, 5.0));
    const double s = rng.uniform(-2, 2), t = rng.uniform(-2, 2);
    const Eigen::MatrixXd lhs = expm((s + t) * h).eigen();
    const Eigen::MatrixXd rhs = expm(s * h).eigen() * expm(t * h).eigen();
    if ((lhs - rhs).norm() > 1e-8 * (1 + lhs.norm())) ++group;

    const double e_tr = std::exp(h.trace());
    if (std::abs(det(expm(h)) - e_tr) > 1e-8 * e_tr) ++determinant;

    const MatrixR a = scaled(1 + i % 6, rng.uniform(0.0, 3.0));
    std::vector<Complex> mapped;
    for (const Complex& z : eigenvalues(a).values) mapped.push_back(std::exp(z));
    if (match_multisets(eigenvalues(expm(a)).values, mapped).max_distance > 1e-6) ++mapping;

    const int d = 2 + i % 5;
    const int ns = rng.integer(1, d - 1);
    const double kappa = std::exp(rng.uniform() * std::log(100.0));
    const MatrixR g = generate({ns, d - ns, d}, kappa, rng.bits());
    double stable_gap = INFINITY, unstable_gap = INFINITY;
    for (const Complex& z : eigenvalues(g).values) {
      if (z.real() < 0) stable_gap = std::min(stable_gap, -z.real());
      else unstable_gap = std::min(unstable_gap, z.real());
    }
    const SplittingBases b = splitting(g);
    auto unit_in = [&](const Eigen::MatrixXd& basis) {
      Eigen::VectorXd c(basis.cols());
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = rng.normal();
      const Vector x = basis * c;
      return Vector(x / x.norm());
    };
    const Vector xs = unit_in(b.stable), xu = unit_in(b.unstable);
    for (double tt : {1.0, 2.0, 4.0, 8.0}) {
      if (flow_map(g, tt, xs).norm() > kappa * std::exp(-0.5 * stable_gap * tt) ||
          flow_map(g, -tt, xu).norm() > kappa * std::exp(-0.5 * unstable_gap * tt)) {
        ++decay;
        break;
      }
    }
  }

  // Closed forms.
  auto off = [](const MatrixR& got, const Eigen::MatrixXd& want) {
    return oracles::max_abs_diff(got.eigen(), want) > 1e-10;
  };
  Eigen::MatrixXd nil(2, 2);
  nil << 1, 1, 0, 1;
  if (off(expm(MatrixR{{0, 1}, {0, 0}}), nil)) ++closed;
  for (double t = -10; t <= 10; t += 0.5) {
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    if (off(expm(t * MatrixR{{0, 1}, {-1, 0}}), rot)) ++closed;
  }
  const Eigen::Vector3d diag(-1.5, 0.25, 2.0);
  if (off(expm(MatrixR::diagonal({-1.5, 0.25, 2.0})),
          Eigen::MatrixXd(diag.array().exp().matrix().asDiagonal())))
    ++closed;

  const bool pass = group + determinant + mapping + decay + closed == 0;
  return {pass, "200 instances each; failures: group law " + std::to_string(group) +
                    ", det/trace " + std::to_string(determinant) + ", spectral mapping " +
                    std::to_string(mapping) + ", stable decay/unstable growth " +
                    std::to_string(decay) + ", closed forms " + std::to_string(closed)};
}

// --- 8. conjugacy classes --------------------------------------------------------------

Outcome conjugacy() {
  Rng rng(8);
  auto library_counts = [](const MatrixR& a) {
    int s = 0;
    for (const Complex& z : oracles::eigen_library_eigenvalues(a)) s += z.real() < 0;
    return s;
  };
  int pairs = 0, disagreements = 0, copies_split = 0, same = 0;
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + i % 6;
    const MatrixR a = ensembles::random_hyperbolic(d, 100.0, rng.bits());
    MatrixR b = a;
    if (i % 3 == 0) {
      const Similarity t = random_similarity(d, std::exp(rng.uniform() * std::log(100.0)), rng);
      b = MatrixR(t.t * a.eigen() * t.t_inv);
    } else {
      b = ensembles::random_hyperbolic(d, 100.0, rng.bits());
    }
    ++pairs;
    const bool verdict = same_class(a, b);
    const bool expected = library_counts(a) == library_counts(b);
    same += verdict;
    if (verdict != expected) ++disagreements;
    if (i % 3 == 0 && !verdict) ++copies_split;
  }
  return {disagreements == 0 && copies_split == 0,
          std::to_string(pairs) + " pairs (" + std::to_string(same) +
              " same class), disagreements=" + std::to_string(disagreements) +
              ", similarity copies split=" + std::to_string(copies_split)};
}

// --- 9. CLI goldens ----------------------------------------------------------------------

struct GoldenCase {
  std::string name;
  std::string args;  // fixture names are prefixed with the fixture directory
  int exit_code;
  std::string out_file;  // when set, compare this --out file instead of stdout
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string(HYPERFLOW_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome cli_goldens(bool update) {
  const std::string fx = std::string(HYPERFLOW_FIXTURES) + "/";
  const fs::path golden_dir = HYPERFLOW_GOLDEN;
  const fs::path scratch = fs::temp_directory_path() / ("hyperflow_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  const std::vector<GoldenCase> cases = {
      {"classify_saddle", "classify " + fx + "saddle.json", 0, ""},
      {"classify_rotation", "classify " + fx + "rotation.json", 2, ""},
      {"classify_indeterminate", "classify --tol 0.9999999999999999 " + fx + "saddle.json", 3, ""},
      {"margin_saddle", "margin --margin-tol 1e-6 " + fx + "saddle.json", 0, ""},
      {"margin_jordan", "margin " + fx + "jordan.json", 0, ""},
      {"margin_rotation", "margin " + fx + "rotation.json", 2, ""},
      {"perturb_saddle", "perturb --radius 0.5 --samples 200 --seed 42 " + fx + "saddle.json", 0, ""},
      {"perturb_near_axis", "perturb --radius 0.1 --samples 200 --seed 7 " + fx + "near_axis.json", 3, ""},
      {"perturb_default_radius", "perturb --samples 100 --seed 3 " + fx + "jordan.json", 0, ""},
      {"flow_saddle", "flow --x0 1,1 --grid 0:0.25:2 " + fx + "saddle.json", 0, ""},
      {"flow_rotation", "flow --x0 1,0 --grid 0,0.5,1.5,3.14159 --out {out} " + fx + "rotation.json", 0, "flow_rotation.csv"},
      {"portrait_saddle", "portrait --out {out} " + fx + "saddle.json", 0, "portrait_saddle.svg"},
      {"portrait_rotation", "portrait --seeds circle:4 --t-range 0:6.3 --steps 64 " + fx + "rotation.json", 0, ""},
      {"portrait_sink", "portrait --seeds 1,0;0,1;-0.5,0.5 " + fx + "sink.json", 0, ""},
      {"verify_vieta", "verify vieta --seed 1", 0, ""},
      {"verify_oracle", "verify oracle --seed 1", 0, ""},
  };

  int mismatches = 0;
  std::string first_bad;
  for (const GoldenCase& c : cases) {
    std::string args = c.args;
    fs::path out_path;
    if (!c.out_file.empty()) {
      out_path = scratch / c.out_file;
      args.replace(args.find("{out}"), 5, out_path.string());
    }
    // Quote the ';' separated seed list for the shell.
    if (const auto p = args.find("--seeds 1,0;"); p != std::string::npos) {
      const auto end = args.find(' ', p + 8);
      args = args.substr(0, p + 8) + "'" + args.substr(p + 8, end - p - 8) + "'" + args.substr(end);
    }

    std::string runs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      auto [code, out] = run_cli(args);
      codes[k] = code;
      runs[k] = c.out_file.empty() ? out : out + "\n--- " + c.out_file + " ---\n" + slurp(out_path);
    }
    const fs::path golden = golden_dir / (c.name + ".golden");
    if (update) {
      std::ofstream(golden, std::ios::binary) << runs[0];
    }
    const bool ok = codes[0] == c.exit_code && codes[1] == c.exit_code && runs[0] == runs[1] &&
                    fs::exists(golden) && slurp(golden) == runs[0];
    if (!ok) {
      ++mismatches;
      if (first_bad.empty()) first_bad = c.name;
    }
  }
  fs::remove_all(scratch);
  return {mismatches == 0, std::to_string(cases.size()) + " subcommand runs x 2, mismatches=" +
                               std::to_string(mismatches) +
                               (first_bad.empty() ? "" : " (first: " + first_bad + ")")};
}

}  // namespace

int main(int argc, char** argv) {
  const bool update = argc > 1 && std::string(argv[1]) == "--update-goldens";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"openness: no inertia flips below margin.lower", openness},
      {"density: hyperbolize within bound", density},
      {"eigenvalue oracle: QR vs characteristic polynomial roots", oracle},
      {"Vieta identity and det A_n -> det H", vieta},
      {"shift identity", shift_identity},
      {"margin vs Hamiltonian bisection", margin_cross_check},
      {"flow suite", flow_suite},
      {"conjugacy classification", conjugacy},
      {"CLI golden determinism", [update] { return cli_goldens(update); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "[criterion " << i + 1 << "] " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
