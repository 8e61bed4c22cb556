// hyperflow: classify, margin, perturb, flow, portrait, verify.
//
// Exit codes: 0 success / hyperbolic / no flips, 1 usage, parse or IO error,
// 2 input not hyperbolic, 3 classification indeterminate (classify) or
// inertia flips found (perturb).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperflow/hyperflow.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/verify.hpp"

namespace {

using namespace hyperflow;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotHyperbolic = 2;
constexpr int kExitIndeterminate = 3;
constexpr int kExitFlips = 3;

constexpr double kDefaultMarginTol = 1e-6;
constexpr int kDefaultSamples = 1000;
constexpr double kDefaultRadiusFraction = 0.9;

struct Options {
  std::string input = "-";
  std::optional<double> tau;
  double margin_tol = kDefaultMarginTol;
  std::uint64_t seed = 0;
  int samples = kDefaultSamples;
  std::optional<double> radius;
  std::string out;
  std::string x0 = "";
  std::string grid = "0";
  std::string seeds = "circle:8";
  std::string t_range = "0:4";
  int steps = 200;
  std::string suite;
};

MatrixR read_matrix(const std::string& path) {
  std::string text;
  if (path == "-" || path.empty()) {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_matrix(text);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

double parse_number(const std::string& token, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": '" + token + "' is not a finite number");
  }
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, sep)) out.push_back(parse_number(token, what));
  return out;
}

// "a:h:b" (a, a+h, ... up to b) or an explicit comma list.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split_numbers(spec, ':', "--grid");
    if (parts.size() != 3 || !(parts[1] > 0.0)) {
      throw ParseError("--grid: expected start:step:stop with step > 0");
    }
    std::vector<double> grid;
    for (long k = 0;; ++k) {
      const double t = parts[0] + static_cast<double>(k) * parts[1];
      if (t > parts[2] + 1e-9 * parts[1]) break;
      grid.push_back(t);
    }
    return grid;
  }
  return split_numbers(spec, ',', "--grid");
}

// "circle:N" (N points on the unit circle) or "x,y;x,y;...".
std::vector<Vector> parse_seeds(const std::string& spec) {
  std::vector<Vector> seeds;
  if (spec.rfind("circle:", 0) == 0) {
    const double n = parse_number(spec.substr(7), "--seeds");
    if (n < 1 || n != std::floor(n)) throw ParseError("--seeds: circle count must be >= 1");
    for (int k = 0; k < static_cast<int>(n); ++k) {
      const double angle = 2.0 * std::numbers::pi * k / n;
      seeds.push_back(Vector{{std::cos(angle), std::sin(angle)}});
    }
    return seeds;
  }
  std::stringstream ss(spec);
  std::string point;
  while (std::getline(ss, point, ';')) {
    const auto xy = split_numbers(point, ',', "--seeds");
    if (xy.size() != 2) throw ParseError("--seeds: each point needs two coordinates");
    seeds.push_back(Vector{{xy[0], xy[1]}});
  }
  return seeds;
}

double tau_for(const Options& o, const MatrixR& a) { return o.tau ? *o.tau : default_tau(a); }

int cmd_classify(const Options& o) {
  const MatrixR a = read_matrix(o.input);
  const auto verdict = classify(a, tau_for(o, a));
  std::cout << to_json(verdict).dump(2) << "\n";
  switch (verdict.kind) {
    case VerdictKind::Hyperbolic: return kExitOk;
    case VerdictKind::NonHyperbolic: return kExitNotHyperbolic;
    case VerdictKind::Indeterminate: return kExitIndeterminate;
  }
  return kExitError;
}

int cmd_margin(const Options& o) {
  const MatrixR a = read_matrix(o.input);
  const MarginResult m = margin(a, tau_for(o, a), o.margin_tol);
  std::cout << to_json(m).dump(2) << "\n";
  return m.verdict == VerdictKind::Hyperbolic ? kExitOk : kExitNotHyperbolic;
}

int cmd_perturb(const Options& o) {
  const MatrixR h = read_matrix(o.input);
  const double tau = tau_for(o, h);
  const auto base = classify(h, tau);
  if (!base.hyperbolic()) {
    std::cout << to_json(base).dump(2) << "\n";
    std::cerr << "perturb: base matrix is " << to_string(base.kind) << "\n";
    return kExitNotHyperbolic;
  }
  double radius = 0.0;
  if (o.radius) {
    radius = *o.radius;
  } else {
    radius = kDefaultRadiusFraction * margin(h, tau, o.margin_tol).lower;
    if (!(radius > 0.0)) throw InvalidArgument("perturb: margin too small for a default radius");
  }
  const CampaignReport report = perturb_campaign(h, o.samples, radius, o.seed, tau);
  std::cout << to_json(report).dump(2) << "\n";
  return report.flips == 0 ? kExitOk : kExitFlips;
}

int cmd_flow(const Options& o) {
  const MatrixR h = read_matrix(o.input);
  const auto x0v = split_numbers(o.x0, ',', "--x0");
  Vector x0(static_cast<Eigen::Index>(x0v.size()));
  for (std::size_t i = 0; i < x0v.size(); ++i) x0(static_cast<Eigen::Index>(i)) = x0v[i];
  const auto grid = parse_grid(o.grid);
  write_output(o.out, format_trajectory_csv(trajectory(h, x0, grid)));
  return kExitOk;
}

int cmd_portrait(const Options& o) {
  const MatrixR h = read_matrix(o.input);
  PortraitRequest req;
  req.seeds = parse_seeds(o.seeds);
  const auto range = split_numbers(o.t_range, ':', "--t-range");
  if (range.size() != 2) throw ParseError("--t-range: expected start:stop");
  req.t_begin = range[0];
  req.t_end = range[1];
  req.steps = o.steps;
  req.tau = tau_for(o, h);
  const std::string svg = portrait(h, req);
  write_output(o.out, svg);

  const auto verdict = classify(h, req.tau);
  std::ostream& summary = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  summary << "s=" << verdict.inertia.s << " u=" << verdict.inertia.u << " c=" << verdict.inertia.c
          << " verdict=" << to_string(verdict.kind) << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const SuiteResult r = run_suite(o.suite, o.seed);
  std::cout << to_json(r).dump(2) << "\n";
  return r.ok() ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolicity, robustness margins and flows of real square matrices"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("matrix", o.input, "Matrix file (JSON {d, data}); '-' or omitted reads stdin");
  };
  auto add_tau = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tau, "Imaginary-axis tolerance tau (default 1e-9 * (1 + ||A||_2))")
        ->check(CLI::NonNegativeNumber);
  };

  auto* classify_cmd = app.add_subcommand("classify", "Hyperbolicity verdict and inertia");
  add_input(classify_cmd);
  add_tau(classify_cmd);

  auto* margin_cmd = app.add_subcommand("margin", "Distance to the nearest non-hyperbolic matrix");
  add_input(margin_cmd);
  add_tau(margin_cmd);
  margin_cmd->add_option("--margin-tol", o.margin_tol, "Bracket width (default 1e-6)")
      ->check(CLI::PositiveNumber);

  auto* perturb_cmd = app.add_subcommand("perturb", "Random perturbation campaign");
  add_input(perturb_cmd);
  add_tau(perturb_cmd);
  perturb_cmd->add_option("--samples", o.samples, "Number of perturbations (default 1000)")
      ->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--radius", o.radius, "Perturbation norm bound (default 0.9 * margin)")
      ->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--seed", o.seed, "RNG seed (default 0)");
  perturb_cmd->add_option("--margin-tol", o.margin_tol, "Margin bracket width for the default radius")
      ->check(CLI::PositiveNumber);

  auto* flow_cmd = app.add_subcommand("flow", "Sample x(t) = e^{tH} x0 as CSV");
  add_input(flow_cmd);
  flow_cmd->add_option("--x0", o.x0, "Initial state, comma separated")->required();
  flow_cmd->add_option("--grid", o.grid, "start:step:stop or t0,t1,... (default 0)");
  flow_cmd->add_option("--out", o.out, "CSV output path (default stdout)");

  auto* portrait_cmd = app.add_subcommand("portrait", "SVG phase portrait for d = 2");
  add_input(portrait_cmd);
  add_tau(portrait_cmd);
  portrait_cmd->add_option("--seeds", o.seeds, "circle:N or x,y;x,y;... (default circle:8)");
  portrait_cmd->add_option("--t-range", o.t_range, "start:stop (default 0:4)");
  portrait_cmd->add_option("--steps", o.steps, "Samples per trajectory (default 200)")
      ->check(CLI::PositiveNumber);
  portrait_cmd->add_option("--out", o.out, "SVG output path (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
  verify_cmd->add_option("suite", o.suite, "openness | density | vieta | oracle")->required();
  verify_cmd->add_option("--seed", o.seed, "RNG seed (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(o);
    if (margin_cmd->parsed()) return cmd_margin(o);
    if (perturb_cmd->parsed()) return cmd_perturb(o);
    if (flow_cmd->parsed()) return cmd_flow(o);
    if (portrait_cmd->parsed()) return cmd_portrait(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
  } catch (const hyperflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
