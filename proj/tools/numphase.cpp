// numphase: command-line front end for the number-phase uncertainty library.
// One subcommand per workflow; JSON/CSV artifacts, deterministic output.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "numphase/io.hpp"

namespace {

using namespace numphase;

struct DimensionLimits {
  int fock = 4096;
  int torus_halfwidth = 2048;
};

DimensionLimits dimension_limits() {
  DimensionLimits lim;
  if (const char* env = std::getenv("NUMPHASE_MAX_DIM")) {
    int cap = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap < 1) {
      throw ValidationError("NUMPHASE_MAX_DIM must be a positive integer");
    }
    lim.fock = std::min(lim.fock, cap);
    lim.torus_halfwidth = std::min(lim.torus_halfwidth, cap);
  }
  return lim;
}

void check_fock_dim(int dim) {
  const DimensionLimits lim = dimension_limits();
  if (dim < 1 || dim > lim.fock) {
    throw ValidationError("fock dimension " + std::to_string(dim) + " outside [1, " +
                          std::to_string(lim.fock) + "]");
  }
}

void check_torus_halfwidth(int k) {
  const DimensionLimits lim = dimension_limits();
  if (k < 1 || k > lim.torus_halfwidth) {
    throw ValidationError("torus half-width " + std::to_string(k) + " outside [1, " +
                          std::to_string(lim.torus_halfwidth) + "]");
  }
}

void check_schedule(SectionSpace space, const std::vector<int>& dims) {
  for (int d : dims) {
    if (space == SectionSpace::Fock) check_fock_dim(d);
    else check_torus_halfwidth(d);
  }
}

double parse_double_token(const std::string& tok) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw ValidationError("trailing characters in number: " + tok);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse number: " + tok);
  }
}

int parse_int_token(const std::string& tok) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ValidationError("cannot parse integer: " + tok);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "--arcs" syntax: whitespace-separated "a:b" pairs, radians.
ArcSet parse_arcs_string(const std::string& s) {
  std::vector<std::array<double, 2>> arcs;
  for (const std::string& tok : split(s, ' ')) {
    const std::vector<std::string> parts = split(tok, ':');
    if (parts.size() != 2) throw ValidationError("arc must be start:end, got: " + tok);
    arcs.push_back({parse_double_token(parts[0]), parse_double_token(parts[1])});
  }
  if (arcs.empty()) throw ValidationError("no arcs given");
  return ArcSet(arcs);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_int_token(tok));
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_double_token(tok));
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

// measure specs: circle "uniform:N" | "point:THETA" | "file:PATH",
// integers "point:K" | "uniform:A:B" | "file:PATH"
ProbCircle parse_circle_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "uniform") return ProbCircle::uniform_grid(parse_int_token(parts[1]));
  if (parts.size() == 2 && parts[0] == "point") return ProbCircle::point(parse_double_token(parts[1]));
  if (parts.size() >= 2 && parts[0] == "file") {
    return probcircle_from_json(read_json_file(spec.substr(5)));
  }
  throw ValidationError("bad circle measure spec: " + spec);
}

ProbInt parse_int_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "point") return ProbInt::point(parse_int_token(parts[1]));
  if (parts.size() == 3 && parts[0] == "uniform") {
    const int a = parse_int_token(parts[1]);
    const int b = parse_int_token(parts[2]);
    if (b < a) throw ValidationError("uniform:a:b needs a <= b");
    std::map<int, double> atoms;
    for (int k = a; k <= b; ++k) atoms[k] = 1.0 / (b - a + 1);
    return ProbInt(std::move(atoms));
  }
  if (parts.size() >= 2 && parts[0] == "file") return probint_from_json(read_json_file(spec.substr(5)));
  throw ValidationError("bad integer measure spec: " + spec);
}

// Artifact goes to --out when given (summary on stdout), to stdout otherwise.
void emit(const std::optional<std::string>& out_path, const std::string& artifact,
          const std::string& summary) {
  if (out_path) {
    write_text_file(*out_path, artifact);
    std::cout << summary;
  } else {
    std::cout << artifact;
  }
}

std::string json_artifact(const Json& j) { return j.dump(2) + "\n"; }

// flag > config file > built-in default
class ConfigOverlay {
 public:
  explicit ConfigOverlay(const std::string& path) {
    if (!path.empty()) {
      cfg_ = read_json_file(path);
      if (!cfg_.is_object()) throw ValidationError("config file must hold a JSON object");
    }
  }

  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T& target) const {
    if (opt->count() == 0 && cfg_.contains(key)) {
      try {
        target = cfg_.at(key).get<T>();
      } catch (const Json::exception&) {
        throw ValidationError(std::string("config key has wrong type: ") + key);
      }
    }
  }

  bool provides(const CLI::Option* opt, const char* key) const {
    return opt->count() > 0 || cfg_.contains(key);
  }

 private:
  Json cfg_ = Json::object();
};

SectionSpace parse_space(const std::string& s) {
  if (s == "fock") return SectionSpace::Fock;
  if (s == "torus") return SectionSpace::Torus;
  throw ValidationError("space must be fock or torus");
}

std::string ground_summary(const GroundStateReport& rep) {
  std::ostringstream out;
  out << "ground(" << to_string(rep.space) << "): value=" << format_double(rep.converged_value)
      << " converged=" << (rep.tolerance_met ? "true" : "false")
      << " sections=" << rep.dims.size() << "\n";
  const int n = static_cast<int>(rep.converged_vector.size());
  const int base = rep.space == SectionSpace::Torus ? (n - 1) / 2 : 0;
  out << "|c_0..4| =";
  for (int i = 0; i < 5 && base + i < n; ++i) {
    out << ' ' << format_double(std::abs(rep.converged_vector(base + i)));
  }
  out << "\n";
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"canonical number-phase measurement numerics"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file supplying flag defaults");

  // phase-effect
  auto* cmd_phase = app.add_subcommand("phase-effect", "truncated canonical phase effect matrix");
  std::string pe_arcs, pe_arcs_file, pe_out;
  int pe_dim = kDefaultFockDim;
  auto* pe_arcs_opt = cmd_phase->add_option("--arcs", pe_arcs, "arcs 'a:b a:b ...' in radians");
  cmd_phase->add_option("--arcs-file", pe_arcs_file, "arc set JSON file");
  auto* pe_dim_opt = cmd_phase->add_option("--dim", pe_dim, "Fock truncation dimension");
  auto* pe_out_opt = cmd_phase->add_option("--out", pe_out, "output file (JSON)");

  // ground
  auto* cmd_ground = app.add_subcommand("ground", "oscillator / weighted-section ground state");
  std::string g_space, g_dims, g_out;
  double g_weight = 0.5, g_tol = kDefaultSectionTol;
  auto* g_space_opt = cmd_ground->add_option("--space", g_space, "fock or torus")->check(CLI::IsMember({"fock", "torus"}));
  auto* g_weight_opt = cmd_ground->add_option("--weight", g_weight,
      "weight t of (1-t)*kinetic + t*angular; omit for the full oscillator");
  auto* g_dims_opt = cmd_ground->add_option("--dims", g_dims, "section schedule, e.g. 8,16,32,64");
  auto* g_tol_opt = cmd_ground->add_option("--tol", g_tol, "convergence tolerance on consecutive values");
  auto* g_out_opt = cmd_ground->add_option("--out", g_out, "output file (JSON)");

  // lenard
  auto* cmd_lenard = app.add_subcommand("lenard", "joint-predictability bound for Phi(X), N(Y)");
  std::string l_arcs, l_arcs_file, l_set, l_out;
  int l_dim = kDefaultFockDim;
  auto* l_arcs_opt = cmd_lenard->add_option("--arcs", l_arcs, "arcs 'a:b a:b ...'");
  cmd_lenard->add_option("--arcs-file", l_arcs_file, "arc set JSON file");
  auto* l_set_opt = cmd_lenard->add_option("--set", l_set, "index set Y, e.g. 0,1,5");
  auto* l_dim_opt = cmd_lenard->add_option("--dim", l_dim, "Fock truncation dimension");
  auto* l_out_opt = cmd_lenard->add_option("--out", l_out, "output file (JSON)");

  // complementarity
  auto* cmd_comp = app.add_subcommand("complementarity", "scalar-below-Phi witness decay");
  std::string c_arcs, c_arcs_file, c_dims, c_out, c_format = "csv";
  auto* c_arcs_opt = cmd_comp->add_option("--arcs", c_arcs, "arcs 'a:b a:b ...'");
  cmd_comp->add_option("--arcs-file", c_arcs_file, "arc set JSON file");
  auto* c_dims_opt = cmd_comp->add_option("--dims", c_dims, "section dimensions, e.g. 8,16,32");
  cmd_comp->add_option("--format", c_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* c_out_opt = cmd_comp->add_option("--out", c_out, "output file");

  // wasserstein
  auto* cmd_w2 = app.add_subcommand("wasserstein", "Wasserstein-2 distance between measures");
  std::string w_kind, w_mu, w_nu, w_out;
  auto* w_kind_opt = cmd_w2->add_option("--kind", w_kind, "circle or int")->check(CLI::IsMember({"circle", "int"}));
  auto* w_mu_opt = cmd_w2->add_option("--mu", w_mu, "measure spec (uniform:N | point:X | file:PATH)");
  auto* w_nu_opt = cmd_w2->add_option("--nu", w_nu, "measure spec");
  auto* w_out_opt = cmd_w2->add_option("--out", w_out, "output file (JSON)");

  // mu-boundary
  auto* cmd_mub = app.add_subcommand("mu-boundary", "trace the uncertainty trade-off curve");
  std::string mb_space, mb_tgrid, mb_dims, mb_out;
  double mb_tol = kDefaultSectionTol;
  auto* mb_space_opt = cmd_mub->add_option("--space", mb_space, "fock or torus")->check(CLI::IsMember({"fock", "torus"}));
  auto* mb_tgrid_opt = cmd_mub->add_option("--tgrid", mb_tgrid, "comma list of t in (0,1)");
  auto* mb_dims_opt = cmd_mub->add_option("--dims", mb_dims, "section schedule");
  auto* mb_tol_opt = cmd_mub->add_option("--tol", mb_tol, "convergence tolerance");
  auto* mb_out_opt = cmd_mub->add_option("--out", mb_out, "output file (CSV)");

  // error-sum
  auto* cmd_es = app.add_subcommand("error-sum", "error-sum bound for covariant approximators");
  std::string es_sigma, es_out;
  int es_window = 16, es_basis = 0, es_random = 0;
  std::uint64_t es_seed = 12345;
  bool es_minimizer = false;
  auto* es_sigma_opt = cmd_es->add_option("--sigma", es_sigma, "density matrix JSON (odd dim, symmetric window)");
  auto* es_min_opt = cmd_es->add_flag("--minimizer", es_minimizer, "use the computed oscillator ground state");
  auto* es_basis_opt = cmd_es->add_option("--basis", es_basis, "use the basis state e_k");
  auto* es_random_opt = cmd_es->add_option("--random", es_random, "check N reproducible random states");
  auto* es_seed_opt = cmd_es->add_option("--seed", es_seed, "seed for --random");
  auto* es_window_opt = cmd_es->add_option("--window", es_window, "torus half-width for --basis/--random");
  auto* es_out_opt = cmd_es->add_option("--out", es_out, "output file");

  // embed
  auto* cmd_embed = app.add_subcommand("embed", "embed a sharp-number joint into the two-sided index space");
  std::string em_kernel, em_smear = "point:0", em_out;
  int em_dim = 8;
  auto* em_kernel_opt = cmd_embed->add_option("--kernel", em_kernel, "uniform:N | point:BETA | file:PATH");
  auto* em_smear_opt = cmd_embed->add_option("--smear", em_smear, "number smearing (integer measure spec)");
  auto* em_dim_opt = cmd_embed->add_option("--dim", em_dim, "window size for constant kernels");
  auto* em_out_opt = cmd_embed->add_option("--out", em_out, "output file (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help text or the parse error
    return code == 0 ? 0 : 2;
  }
  const ConfigOverlay cfg(config_path);

  if (cmd_phase->parsed()) {
    cfg.apply(pe_arcs_opt, "arcs", pe_arcs);
    cfg.apply(pe_dim_opt, "dim", pe_dim);
    cfg.apply(pe_out_opt, "out", pe_out);
    check_fock_dim(pe_dim);
    if (!pe_arcs.empty() && !pe_arcs_file.empty()) {
      throw ValidationError("give either --arcs or --arcs-file, not both");
    }
    if (pe_arcs.empty() && pe_arcs_file.empty()) throw ValidationError("missing --arcs");
    const ArcSet x = pe_arcs_file.empty() ? parse_arcs_string(pe_arcs)
                                          : arcset_from_json(read_json_file(pe_arcs_file));
    const HermitianOperator eff = phase_effect(x, FockWindow(pe_dim));
    std::ostringstream sum;
    sum << "phase-effect: dim=" << pe_dim << " measure=" << format_double(x.measure())
        << " norm=" << format_double(operator_norm(eff)) << "\n";
    emit(pe_out_opt->count() || !pe_out.empty() ? std::optional<std::string>(pe_out) : std::nullopt,
         json_artifact(matrix_to_json(eff)), sum.str());
    return 0;
  }

  if (cmd_ground->parsed()) {
    cfg.apply(g_space_opt, "space", g_space);
    cfg.apply(g_dims_opt, "dims", g_dims);
    cfg.apply(g_tol_opt, "tol", g_tol);
    cfg.apply(g_out_opt, "out", g_out);
    if (g_space.empty()) throw ValidationError("missing --space");
    const SectionSpace space = parse_space(g_space);
    std::vector<int> dims = g_dims.empty()
        ? (space == SectionSpace::Fock ? default_fock_schedule() : default_torus_schedule())
        : parse_int_list(g_dims);
    check_schedule(space, dims);
    GroundStateReport rep;
    if (cfg.provides(g_weight_opt, "weight")) {
      cfg.apply(g_weight_opt, "weight", g_weight);
      rep = finite_section_ground(space, g_weight, dims, g_tol);
    } else if (space == SectionSpace::Fock) {
      rep = oscillator_fock_ground(dims, g_tol);
    } else {
      rep = oscillator_torus_ground(dims, g_tol);
    }
    emit(g_out_opt->count() || !g_out.empty() ? std::optional<std::string>(g_out) : std::nullopt,
         json_artifact(ground_report_to_json(rep)), ground_summary(rep));
    return 0;
  }

  if (cmd_lenard->parsed()) {
    cfg.apply(l_arcs_opt, "arcs", l_arcs);
    cfg.apply(l_set_opt, "set", l_set);
    cfg.apply(l_dim_opt, "dim", l_dim);
    cfg.apply(l_out_opt, "out", l_out);
    check_fock_dim(l_dim);
    if (l_arcs.empty() && l_arcs_file.empty()) throw ValidationError("missing --arcs");
    const ArcSet x = l_arcs_file.empty() ? parse_arcs_string(l_arcs)
                                         : arcset_from_json(read_json_file(l_arcs_file));
    const IndexSet y = l_set.empty() ? IndexSet() : IndexSet(parse_int_list(l_set));
    const LenardReport rep = lenard_bound(x, y, FockWindow(l_dim));
    std::ostringstream sum;
    sum << "lenard: a_plus=" << format_double(rep.a_plus) << " bound=" << format_double(rep.bound)
        << " truncated_sup=" << format_double(rep.truncated_sup) << "\n";
    emit(l_out_opt->count() || !l_out.empty() ? std::optional<std::string>(l_out) : std::nullopt,
         json_artifact(lenard_report_to_json(rep)), sum.str());
    return 0;
  }

  if (cmd_comp->parsed()) {
    cfg.apply(c_arcs_opt, "arcs", c_arcs);
    cfg.apply(c_dims_opt, "dims", c_dims);
    cfg.apply(c_out_opt, "out", c_out);
    if (c_arcs.empty() && c_arcs_file.empty()) throw ValidationError("missing --arcs");
    const ArcSet x = c_arcs_file.empty() ? parse_arcs_string(c_arcs)
                                         : arcset_from_json(read_json_file(c_arcs_file));
    const std::vector<int> dims = c_dims.empty() ? default_fock_schedule() : parse_int_list(c_dims);
    check_schedule(SectionSpace::Fock, dims);
    const auto rows = complementarity_decay(x, dims);
    std::string artifact;
    if (c_format == "json") {
      Json points = Json::array();
      for (const auto& [k, a] : rows) points.push_back({k, a});
      artifact = json_artifact(Json{{"points", points}});
    } else {
      artifact = complementarity_csv(rows);
    }
    std::ostringstream sum;
    sum << "complementarity: alpha_max " << format_double(rows.front().second) << " at k="
        << rows.front().first << " -> " << format_double(rows.back().second) << " at k="
        << rows.back().first << "\n";
    emit(c_out_opt->count() || !c_out.empty() ? std::optional<std::string>(c_out) : std::nullopt,
         artifact, sum.str());
    return 0;
  }

  if (cmd_w2->parsed()) {
    cfg.apply(w_kind_opt, "kind", w_kind);
    cfg.apply(w_mu_opt, "mu", w_mu);
    cfg.apply(w_nu_opt, "nu", w_nu);
    cfg.apply(w_out_opt, "out", w_out);
    if (w_kind.empty() || w_mu.empty() || w_nu.empty()) {
      throw ValidationError("wasserstein needs --kind, --mu and --nu");
    }
    double value = 0.0;
    if (w_kind == "circle") {
      value = w2_circle(parse_circle_spec(w_mu), parse_circle_spec(w_nu));
    } else {
      value = w2_integers(parse_int_spec(w_mu), parse_int_spec(w_nu));
    }
    std::ostringstream sum;
    sum << "wasserstein(" << w_kind << "): " << format_double(value) << "\n";
    emit(w_out_opt->count() || !w_out.empty() ? std::optional<std::string>(w_out) : std::nullopt,
         json_artifact(Json{{"kind", w_kind}, {"w2", value}}), sum.str());
    return 0;
  }

  if (cmd_mub->parsed()) {
    cfg.apply(mb_space_opt, "space", mb_space);
    cfg.apply(mb_tgrid_opt, "tgrid", mb_tgrid);
    cfg.apply(mb_dims_opt, "dims", mb_dims);
    cfg.apply(mb_tol_opt, "tol", mb_tol);
    cfg.apply(mb_out_opt, "out", mb_out);
    if (mb_space.empty()) throw ValidationError("missing --space");
    const SectionSpace space = parse_space(mb_space);
    std::vector<double> tgrid = mb_tgrid.empty() ? default_boundary_tgrid() : parse_double_list(mb_tgrid);
    std::vector<int> dims = mb_dims.empty()
        ? (space == SectionSpace::Fock ? default_fock_schedule() : default_torus_schedule())
        : parse_int_list(mb_dims);
    check_schedule(space, dims);
    const BoundaryCurve curve = trace_boundary(space, tgrid, dims, mb_tol);
    std::ostringstream sum;
    sum << "mu-boundary(" << to_string(space) << "): " << curve.points.size() << " points, d1 "
        << format_double(curve.points.front().d1) << " -> " << format_double(curve.points.back().d1)
        << "\n";
    if (space == SectionSpace::Fock) {
      sum << "note: positive-mode curve; numerical evidence only, no properness claim\n";
    }
    emit(mb_out_opt->count() || !mb_out.empty() ? std::optional<std::string>(mb_out) : std::nullopt,
         boundary_curve_csv(curve), sum.str());
    return 0;
  }

  if (cmd_es->parsed()) {
    cfg.apply(es_window_opt, "window", es_window);
    cfg.apply(es_seed_opt, "seed", es_seed);
    cfg.apply(es_out_opt, "out", es_out);
    check_torus_halfwidth(es_window);
    const int modes = (es_sigma_opt->count() ? 1 : 0) + (es_min_opt->count() ? 1 : 0) +
                      (es_basis_opt->count() ? 1 : 0) + (es_random_opt->count() ? 1 : 0);
    if (modes != 1) {
      throw ValidationError("give exactly one of --sigma, --minimizer, --basis, --random");
    }
    const std::string note =
        "whether the analogous positive-mode eigenvalue bounds joint observables valued in "
        "T x N is open; only the two-sided bound is asserted";
    const auto out_opt = es_out_opt->count() || !es_out.empty()
        ? std::optional<std::string>(es_out) : std::nullopt;
    if (es_random_opt->count()) {
      if (es_random < 1) throw ValidationError("--random needs a positive count");
      std::ostringstream csv;
      csv << "i,sum,bound,satisfied\n";
      int ok = 0;
      for (int i = 0; i < es_random; ++i) {
        const ErrorSumReport r = error_sum_check(random_torus_state(es_window, es_seed + i));
        csv << i << ',' << format_double(r.sum) << ',' << format_double(r.bound) << ','
            << (r.satisfied ? "true" : "false") << '\n';
        if (r.satisfied) ++ok;
      }
      std::ostringstream sum;
      sum << "error-sum: " << ok << "/" << es_random << " random states satisfy the bound\n"
          << "note: " << note << "\n";
      emit(out_opt, csv.str(), sum.str());
      return 0;
    }
    DensityState sigma = [&]() -> DensityState {
      if (es_sigma_opt->count()) {
        const HermitianOperator m = matrix_from_json(read_json_file(es_sigma));
        if (m.dim() % 2 == 0) {
          throw ValidationError("--sigma matrix must have odd dimension (symmetric window)");
        }
        const int k = (m.dim() - 1) / 2;
        check_torus_halfwidth(k);
        return DensityState(TorusWindow::symmetric(k), m);
      }
      if (es_min_opt->count()) {
        const GroundStateReport rep = oscillator_torus_ground();
        return DensityState::pure(TorusWindow::symmetric(rep.dims.back()), rep.converged_vector);
      }
      if (std::abs(es_basis) > es_window) throw OutOfWindowError("--basis index outside window");
      return DensityState::basis_state(TorusWindow::symmetric(es_window), es_basis);
    }();
    const ErrorSumReport r = error_sum_check(sigma);
    const ErrorPoint margins = margin_errors_from_sigma(sigma);
    Json j{{"d1_sq", r.d1_sq}, {"d2_sq", r.d2_sq},         {"sum", r.sum},
           {"bound", r.bound}, {"satisfied", r.satisfied},
           {"margins", error_point_to_json(margins)},      {"note", note}};
    std::ostringstream sum;
    sum << "error-sum: sum=" << format_double(r.sum) << " bound=" << format_double(r.bound)
        << " satisfied=" << (r.satisfied ? "true" : "false") << "\n"
        << "note: " << note << "\n";
    emit(out_opt, json_artifact(j), sum.str());
    return 0;
  }

  if (cmd_embed->parsed()) {
    cfg.apply(em_kernel_opt, "kernel", em_kernel);
    cfg.apply(em_smear_opt, "smear", em_smear);
    cfg.apply(em_dim_opt, "dim", em_dim);
    cfg.apply(em_out_opt, "out", em_out);
    if (em_kernel.empty()) throw ValidationError("missing --kernel");
    check_fock_dim(em_dim);
    const KernelJoint joint = [&]() -> KernelJoint {
      if (em_kernel.rfind("file:", 0) == 0) {
        const Json j = read_json_file(em_kernel.substr(5));
        if (!j.is_object() || !j.contains("kernel") || !j.at("kernel").is_array() ||
            j.at("kernel").empty()) {
          throw ValidationError("kernel file must hold a nonempty kernel array");
        }
        std::vector<ProbCircle> kernel;
        for (const auto& item : j.at("kernel")) kernel.push_back(probcircle_from_json(item));
        ProbInt smear = em_smear_opt->count() == 0 && j.contains("smear")
            ? probint_from_json(j.at("smear"))
            : parse_int_spec(em_smear);
        check_fock_dim(static_cast<int>(kernel.size()));
        return KernelJoint(FockWindow(static_cast<int>(kernel.size())), std::move(kernel),
                           std::move(smear));
      }
      return KernelJoint::constant(parse_circle_spec(em_kernel), em_dim, parse_int_spec(em_smear));
    }();
    const EmbedReport rep = embed_joint_to_z(joint);
    const PhaseErrorBound phase = kernel_joint_phase_error_bounds(joint);
    Json j{{"embed", embed_report_to_json(rep)},
           {"phase_error",
            Json{{"lower", phase.lower},
                 {"exact_if_constant",
                  phase.exact_if_constant ? Json(*phase.exact_if_constant) : Json(nullptr)}}}};
    std::ostringstream sum;
    sum << "embed: sup_error_z=" << format_double(rep.sup_error_z)
        << " sup_error_fock=" << format_double(rep.sup_error_fock)
        << " identity_dev=" << format_double(rep.max_identity_deviation) << "\n";
    emit(em_out_opt->count() || !em_out.empty() ? std::optional<std::string>(em_out) : std::nullopt,
         json_artifact(j), sum.str());
    return 0;
  }

  throw ValidationError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const numphase::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const numphase::NumericalConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const numphase::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
