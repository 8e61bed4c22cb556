#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hyperflow/flow.hpp"
#include "hyperflow/inertia.hpp"

namespace hyperflow {

// Fixed styling for emitted portraits.
struct PortraitStyle {
  static constexpr int kCanvas = 480;           // square canvas, pixels
  static constexpr double kHalfExtent = 200.0;  // pixels from centre to the seed box edge
  static constexpr double kClip = 2.0;          // trajectories stop beyond kClip * box
  static constexpr double kLineReach = 1.2;     // subspace lines extend to kLineReach * box
  static constexpr const char* kTrajectoryColor = "#1f4e79";
  static constexpr const char* kStableColor = "#2e7d32";
  static constexpr const char* kUnstableColor = "#c62828";
};

struct PortraitRequest {
  std::vector<Vector> seeds;  // 2-vectors
  double t_begin = 0.0;
  double t_end = 5.0;
  int steps = 200;
  double tau = -1.0;  // < 0 selects default_tau(H)
};

// SVG 1.1 phase portrait of a planar linear flow: one <polyline> per seed
// trajectory sampled on a uniform grid, plus one <line> per one-dimensional
// stable/unstable subspace when H is hyperbolic. A leading comment carries
// verdict, s, u, c, d and tau. Output bytes depend only on the inputs.
inline std::string portrait(const MatrixR& h, const PortraitRequest& request) {
  using S = PortraitStyle;
  if (h.dim() != 2) {
    throw UnsupportedDimension("portrait: only d = 2 is supported, got d = " +
                               std::to_string(h.dim()));
  }
  if (request.seeds.empty()) throw InvalidArgument("portrait: no seed points");
  if (request.steps < 1) throw InvalidArgument("portrait: steps must be >= 1");
  if (!(request.t_end > request.t_begin)) throw InvalidArgument("portrait: empty time range");
  for (const Vector& x : request.seeds) {
    if (x.size() != 2) throw DimensionMismatch("portrait: seed points must be 2-vectors");
  }

  const double tau = request.tau >= 0.0 ? request.tau : default_tau(h);
  const auto verdict = classify(h, tau);

  double box = 0.0;
  for (const Vector& x : request.seeds) box = std::max(box, x.cwiseAbs().maxCoeff());
  if (box == 0.0) box = 1.0;
  const double centre = S::kCanvas / 2.0;
  auto px = [&](double x) { return centre + S::kHalfExtent * x / box; };
  auto py = [&](double y) { return centre - S::kHalfExtent * y / box; };
  auto point = [&](double x, double y) {
    return detail::fmt_double("%.4f", px(x)) + "," + detail::fmt_double("%.4f", py(y));
  };

  std::vector<double> grid(static_cast<std::size_t>(request.steps) + 1);
  for (int k = 0; k <= request.steps; ++k) {
    grid[static_cast<std::size_t>(k)] =
        request.t_begin + (request.t_end - request.t_begin) * k / request.steps;
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- hyperflow-portrait\n";
  svg += "verdict=" + std::string(to_string(verdict.kind)) + "\n";
  svg += "s=" + std::to_string(verdict.inertia.s) + "\n";
  svg += "u=" + std::to_string(verdict.inertia.u) + "\n";
  svg += "c=" + std::to_string(verdict.inertia.c) + "\n";
  svg += "d=2\n";
  svg += "tau=" + detail::fmt_double("%.17g", tau) + "\n";
  svg += "-->\n";
  const std::string size = std::to_string(S::kCanvas);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + size +
         "\" height=\"" + size + "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size +
         "\" fill=\"white\"/>\n";

  if (verdict.hyperbolic()) {
    const SplittingBases bases = splitting(h, tau);
    auto emit_line = [&](const Eigen::MatrixXd& basis, const char* cls, const char* color) {
      if (basis.cols() != 1) return;
      const Eigen::Vector2d v = basis.col(0) / basis.col(0).cwiseAbs().maxCoeff();
      const double reach = S::kLineReach * box;
      svg += "<line class=\"" + std::string(cls) + "\" x1=\"" +
             detail::fmt_double("%.4f", px(-reach * v(0))) + "\" y1=\"" +
             detail::fmt_double("%.4f", py(-reach * v(1))) + "\" x2=\"" +
             detail::fmt_double("%.4f", px(reach * v(0))) + "\" y2=\"" +
             detail::fmt_double("%.4f", py(reach * v(1))) + "\" stroke=\"" + color +
             "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    };
    emit_line(bases.stable, "stable", S::kStableColor);
    emit_line(bases.unstable, "unstable", S::kUnstableColor);
  }

  for (const Vector& seed : request.seeds) {
    const Trajectory tr = trajectory(h, seed, grid);
    std::string points;
    for (const Vector& x : tr.states) {
      if (!x.allFinite() || x.cwiseAbs().maxCoeff() > S::kClip * box) break;
      if (!points.empty()) points += ' ';
      points += point(x(0), x(1));
    }
    svg += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"" +
           std::string(S::kTrajectoryColor) + "\" stroke-width=\"1\" points=\"" + points +
           "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hyperflow
