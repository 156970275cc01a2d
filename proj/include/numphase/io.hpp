#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "numphase/mu_region.hpp"

namespace numphase {

using Json = nlohmann::json;

/// Shortest round-trip decimal representation; locale independent, used for
/// all CSV output.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

// ---- matrix JSON: {"dim": n, "re": [n*n row-major], "im": [n*n row-major]} ----

inline Json matrix_to_json(const HermitianOperator& a) {
  const int n = a.dim();
  std::vector<double> re, im;
  re.reserve(size_t(n) * n);
  im.reserve(size_t(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      re.push_back(a.entry(r, c).real());
      im.push_back(a.entry(r, c).imag());
    }
  }
  return Json{{"dim", n}, {"re", re}, {"im", im}};
}

inline HermitianOperator matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
    throw ValidationError("matrix JSON must have dim/re/im fields");
  }
  const int n = j.at("dim").get<int>();
  if (n < 1) throw ValidationError("matrix JSON: dim must be >= 1");
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != size_t(n) * n || im.size() != size_t(n) * n) {
    throw ValidationError("matrix JSON: re/im must hold dim*dim entries");
  }
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = Complex(re[size_t(r) * n + c], im[size_t(r) * n + c]);
    }
  }
  return HermitianOperator(std::move(m));
}

// ---- ArcSet JSON: {"arcs": [[a,b],...]} in radians ----

inline Json arcset_to_json(const ArcSet& x) {
  Json arcs = Json::array();
  for (const auto& [a, b] : x.arcs()) arcs.push_back({a, b});
  return Json{{"arcs", arcs}};
}

inline ArcSet arcset_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arcs") || !j.at("arcs").is_array()) {
    throw ValidationError("arc set JSON must have an arcs array");
  }
  std::vector<std::array<double, 2>> arcs;
  for (const auto& pair : j.at("arcs")) {
    if (!pair.is_array() || pair.size() != 2) throw ValidationError("arc must be [start, end]");
    arcs.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return ArcSet(arcs);
}

// ---- measures: {"atoms": [[theta,w],...]} and {"atoms": [[k,w],...]} ----

inline Json probcircle_to_json(const ProbCircle& p) {
  Json atoms = Json::array();
  for (const auto& [theta, w] : p.atoms()) atoms.push_back({theta, w});
  return Json{{"atoms", atoms}};
}

inline ProbCircle probcircle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array()) {
    throw ValidationError("circle measure JSON must have an atoms array");
  }
  std::vector<std::pair<double, double>> atoms;
  for (const auto& pair : j.at("atoms")) {
    if (!pair.is_array() || pair.size() != 2) throw ValidationError("atom must be [angle, weight]");
    const double w = pair[1].get<double>();
    if (w == 0.0) continue;  // zero weights are legal on disk, dropped in memory
    atoms.emplace_back(pair[0].get<double>(), w);
  }
  return ProbCircle(std::move(atoms));
}

inline Json probint_to_json(const ProbInt& p) {
  Json atoms = Json::array();
  for (const auto& [k, w] : p.atoms()) atoms.push_back({k, w});
  return Json{{"atoms", atoms}};
}

inline ProbInt probint_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array()) {
    throw ValidationError("integer measure JSON must have an atoms array");
  }
  std::map<int, double> atoms;
  for (const auto& pair : j.at("atoms")) {
    if (!pair.is_array() || pair.size() != 2) throw ValidationError("atom must be [index, weight]");
    const double k = pair[0].get<double>();
    if (k != std::floor(k)) throw ValidationError("integer measure atom index must be integral");
    if (pair[1].get<double>() == 0.0) continue;
    atoms[int(k)] += pair[1].get<double>();
  }
  return ProbInt(std::move(atoms));
}

// ---- reports ----

inline Json ground_report_to_json(const GroundStateReport& r) {
  Json vec = Json::array();
  for (Eigen::Index i = 0; i < r.converged_vector.size(); ++i) {
    vec.push_back({r.converged_vector(i).real(), r.converged_vector(i).imag()});
  }
  return Json{{"dims", r.dims},
              {"alphas", r.alphas},
              {"value", r.converged_value},
              {"vector", vec},
              {"converged", r.tolerance_met}};
}

inline Json lenard_report_to_json(const LenardReport& r) {
  return Json{{"a_plus", r.a_plus}, {"bound", r.bound}, {"truncated_sup", r.truncated_sup}};
}

inline Json error_point_to_json(const ErrorPoint& p) {
  return Json{{"d1", p.d1}, {"d2", p.d2}, {"source", p.source}};
}

inline Json embed_report_to_json(const EmbedReport& r) {
  Json states = Json::array();
  for (const auto& s : r.states) {
    states.push_back(Json{{"k", s.k},
                          {"atoms", probint_to_json(s.distribution).at("atoms")},
                          {"error", s.error}});
  }
  return Json{{"states", states},
              {"sup_error_z", r.sup_error_z},
              {"sup_error_fock", r.sup_error_fock},
              {"margin_identity_max_deviation", r.max_identity_deviation}};
}

inline std::string boundary_curve_csv(const BoundaryCurve& c) {
  std::ostringstream out;
  out << "t,d1,d2,energy,converged\n";
  for (const auto& p : c.points) {
    out << format_double(p.t) << ',' << format_double(p.d1) << ',' << format_double(p.d2) << ','
        << format_double(p.energy) << ',' << (p.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

inline std::string complementarity_csv(const std::vector<std::pair<int, double>>& rows) {
  std::ostringstream out;
  out << "k,alpha_max\n";
  for (const auto& [k, alpha] : rows) {
    out << k << ',' << format_double(alpha) << '\n';
  }
  return out.str();
}

inline std::string subset_evidence_csv(const std::vector<SubsetEvidence>& rows) {
  std::ostringstream out;
  out << "t,fock_value,torus_value,gap\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.fock_value) << ','
        << format_double(r.torus_value) << ',' << format_double(r.gap) << '\n';
  }
  return out.str();
}

// ---- files ----

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

inline Json parse_json(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("malformed JSON");
  return j;
}

inline Json read_json_file(const std::string& path) { return parse_json(read_text_file(path)); }

}  // namespace numphase
