#pragma once

// Matrix files and structured reports. Requires nlohmann/json.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperflow/flow.hpp"
#include "hyperflow/inertia.hpp"
#include "hyperflow/robustness.hpp"

namespace hyperflow {

using json = nlohmann::ordered_json;

// Matrix file:  {"d": 2, "data": [[-1, 0], [0, 2]]}
// Ragged rows, a missing or inconsistent d and non-numeric entries are
// rejected with a message naming the offending field.
inline MatrixR matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("matrix file: top level must be an object");
  if (!doc.contains("d")) throw ParseError("matrix file: missing field 'd'");
  const json& jd = doc.at("d");
  if (!jd.is_number_integer() || jd.get<long long>() < 1) {
    throw ParseError("matrix file: field 'd' must be a positive integer");
  }
  const auto d = jd.get<long long>();
  if (!doc.contains("data")) throw ParseError("matrix file: missing field 'data'");
  const json& data = doc.at("data");
  if (!data.is_array()) throw ParseError("matrix file: field 'data' must be an array of rows");
  if (static_cast<long long>(data.size()) != d) {
    throw ParseError("matrix file: field 'data' has " + std::to_string(data.size()) +
                     " rows, expected d=" + std::to_string(d));
  }
  Eigen::MatrixXd m(d, d);
  for (long long i = 0; i < d; ++i) {
    const json& row = data[static_cast<std::size_t>(i)];
    const std::string where = "data[" + std::to_string(i) + "]";
    if (!row.is_array()) throw ParseError("matrix file: " + where + " must be an array");
    if (static_cast<long long>(row.size()) != d) {
      throw ParseError("matrix file: row " + std::to_string(i) + " (" + where + ") has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(d));
    }
    for (long long j = 0; j < d; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ParseError("matrix file: " + where + "[" + std::to_string(j) +
                         "] is not a number");
      }
      m(i, j) = v.get<double>();
    }
  }
  if (!m.allFinite()) throw ParseError("matrix file: entries must be finite");
  return MatrixR(std::move(m));
}

inline MatrixR parse_matrix(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("matrix file: invalid JSON: ") + e.what());
  }
  return matrix_from_json(doc);
}

inline json to_json(const MatrixR& a) {
  json rows = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.dim(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"d", a.dim()}, {"data", std::move(rows)}};
}

// Doubles are written in shortest round-trip form, so reading back is exact.
inline std::string format_matrix(const MatrixR& a) { return to_json(a).dump(2) + "\n"; }

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Inertia& in) {
  return json{{"s", in.s}, {"u", in.u}, {"c", in.c}, {"tau", in.tau}};
}

inline json to_json(const HyperbolicityVerdict& v) {
  json eig = json::array();
  for (const Complex& z : v.spectrum.values) eig.push_back(to_json(z));
  json out{{"verdict", to_string(v.kind)},
           {"s", v.inertia.s},
           {"u", v.inertia.u},
           {"c", v.inertia.c},
           {"tau", v.inertia.tau},
           {"eigenvalues", std::move(eig)},
           {"residual_bound", v.spectrum.residual_bound}};
  if (v.witness) out["witness"] = to_json(*v.witness);
  return out;
}

inline json to_json(const MarginResult& m) {
  return json{{"verdict", to_string(m.verdict)},
              {"lower", m.lower},
              {"upper", m.upper},
              {"omega_star", m.omega_star},
              {"iterations", m.iterations}};
}

inline json to_json(const CampaignReport& r) {
  json witnesses = json::array();
  for (const FlipWitness& w : r.flip_witnesses) {
    witnesses.push_back(json{{"perturbation", to_json(w.perturbation)},
                             {"inertia", to_json(w.inertia)}});
  }
  return json{{"base_inertia", to_json(r.base_inertia)},
              {"samples", r.samples},
              {"radius", r.radius},
              {"flips", r.flips},
              {"seed", r.seed},
              {"flip_witnesses", std::move(witnesses)}};
}

// Header t,x1,...,xd; one row per sample; %.17g so values round-trip.
inline std::string format_trajectory_csv(const Trajectory& tr) {
  std::string out = "t";
  const auto d = tr.origin.size();
  for (Eigen::Index i = 0; i < d; ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    out += detail::fmt_double("%.17g", tr.times[k]);
    for (Eigen::Index i = 0; i < d; ++i) out += "," + detail::fmt_double("%.17g", tr.states[k](i));
    out += '\n';
  }
  return out;
}

}  // namespace hyperflow
