#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numphase/spectral.hpp"

namespace numphase {

/// One point of the measurement-uncertainty plane: d1 is the phase/angle
/// error, d2 the number/momentum error.
struct ErrorPoint {
  double d1 = 0.0;
  double d2 = 0.0;
  std::string source;
};

/// Errors of the covariant phase-space approximator generated by sigma: its
/// margins are convolution smearings, so the errors equal the preparation
/// spreads of the angle and Fourier-index margins of sigma.
inline ErrorPoint margin_errors_from_sigma(const DensityState& sigma, int grid = kDefaultGrid) {
  ErrorPoint p;
  p.d1 = std::sqrt(second_moment_circle(angle_margin(sigma, grid)));
  p.d2 = std::sqrt(second_moment_int(fourier_margin(sigma)));
  p.source = "covariant-phase-space";
  return p;
}

struct ErrorSumReport {
  double d1_sq = 0.0;
  double d2_sq = 0.0;
  double sum = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

/// Checks the error-sum bound sum = Q_sigma[2] + P_sigma[2] >= ground value
/// of P^2 + Q^2. The moments are evaluated as exact quadratic forms against
/// the Toeplitz moment matrices, so no grid discretization error enters the
/// comparison.
inline ErrorSumReport error_sum_check(const DensityState& sigma) {
  if (!std::holds_alternative<TorusWindow>(sigma.window)) {
    throw ValidationError("error_sum_check: state must live on a torus window");
  }
  const TorusWindow& w = std::get<TorusWindow>(sigma.window);
  ErrorSumReport r;
  r.d1_sq = real_trace_product(sigma.matrix, torus_q2(w));
  r.d2_sq = real_trace_product(sigma.matrix, torus_p2(w));
  r.sum = r.d1_sq + r.d2_sq;
  r.bound = torus_oscillator_ground_value();
  r.satisfied = r.sum >= r.bound - 1e-6;
  return r;
}

struct BoundaryPoint {
  double t = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double energy = 0.0;
  bool converged = false;
};

/// Traced candidate boundary of the error region. Along increasing t the d1
/// column is nonincreasing and the d2 column nondecreasing.
struct BoundaryCurve {
  SectionSpace space = SectionSpace::Torus;
  std::vector<BoundaryPoint> points;
};

inline std::vector<double> default_boundary_tgrid() {
  std::vector<double> t;
  for (int i = 1; i <= 19; ++i) t.push_back(i / 20.0);
  return t;
}

/// For each t in (0,1), minimize (1-t)*kinetic + t*angular over the section
/// schedule and report the error pair of the minimizing vector. On the torus
/// the pair is (sqrt(<Q^2>), sqrt(<P^2>)); on the Fock side the same roles
/// are played by Phi[2] and N^2.
inline BoundaryCurve trace_boundary(SectionSpace space, const std::vector<double>& tgrid,
                                    const std::vector<int>& dims,
                                    double tol = kDefaultSectionTol) {
  if (tgrid.empty()) throw ValidationError("trace_boundary: empty t grid");
  for (size_t i = 0; i < tgrid.size(); ++i) {
    if (!(tgrid[i] > 0.0 && tgrid[i] < 1.0)) {
      throw ValidationError("trace_boundary: t values must lie strictly inside (0,1)");
    }
    if (i > 0 && tgrid[i] <= tgrid[i - 1]) {
      throw ValidationError("trace_boundary: t grid must be strictly increasing");
    }
  }
  BoundaryCurve curve;
  curve.space = space;
  for (double t : tgrid) {
    const GroundStateReport rep = finite_section_ground(space, t, dims, tol);
    const int final_size = rep.dims.back();
    BoundaryPoint p;
    p.t = t;
    p.energy = rep.converged_value;
    p.converged = rep.tolerance_met;
    if (space == SectionSpace::Fock) {
      const FockWindow w(final_size);
      p.d1 = std::sqrt(std::max(0.0, real_quadratic_form(second_phase_moment(w), rep.converged_vector)));
      p.d2 = std::sqrt(std::max(0.0, real_quadratic_form(number_squared(w), rep.converged_vector)));
    } else {
      const TorusWindow w = TorusWindow::symmetric(final_size);
      p.d1 = std::sqrt(std::max(0.0, real_quadratic_form(torus_q2(w), rep.converged_vector)));
      p.d2 = std::sqrt(std::max(0.0, real_quadratic_form(torus_p2(w), rep.converged_vector)));
    }
    curve.points.push_back(p);
  }
  return curve;
}

struct SubsetEvidence {
  double t = 0.0;
  double fock_value = 0.0;
  double torus_value = 0.0;
  double gap = 0.0;
};

/// Compares the weighted ground energies of the Fock-side and torus-side
/// problems over a t grid. The Fock problem is the compression of the torus
/// one to the nonnegative modes, so the gap is nonnegative; numerically it is
/// strictly positive in the interior, the evidence that positive-mode
/// generators trace a smaller region. No claim of proper inclusion is made.
inline std::vector<SubsetEvidence> strict_subset_evidence(
    const std::vector<double>& tgrid,
    const std::vector<int>& fock_dims = default_fock_schedule(),
    const std::vector<int>& torus_dims = default_torus_schedule(),
    double tol = kDefaultSectionTol) {
  std::vector<SubsetEvidence> rows;
  for (double t : tgrid) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ValidationError("strict_subset_evidence: t values must lie strictly inside (0,1)");
    }
    SubsetEvidence row;
    row.t = t;
    row.fock_value = finite_section_ground(SectionSpace::Fock, t, fock_dims, tol).converged_value;
    row.torus_value = finite_section_ground(SectionSpace::Torus, t, torus_dims, tol).converged_value;
    row.gap = row.fock_value - row.torus_value;
    rows.push_back(row);
  }
  return rows;
}

/// Joint observable with number-diagonal structure: phase kernel p_n per Fock
/// index and an optional convolution smearing nu of the number margin, so the
/// margins are M1(X) = sum_n p_n(X) |n><n| and M2 = nu * N.
struct KernelJoint {
  FockWindow window;
  std::vector<ProbCircle> kernel;
  ProbInt number_smear = ProbInt::point(0);

  KernelJoint(FockWindow w, std::vector<ProbCircle> k, ProbInt smear = ProbInt::point(0))
      : window(w), kernel(std::move(k)), number_smear(std::move(smear)) {
    if (static_cast<int>(kernel.size()) != window.dim) {
      throw ValidationError("KernelJoint: kernel must provide one measure per window index");
    }
  }

  static KernelJoint constant(const ProbCircle& p, int dim, ProbInt smear = ProbInt::point(0)) {
    return KernelJoint(FockWindow(dim), std::vector<ProbCircle>(dim, p), std::move(smear));
  }
};

struct EmbeddedMarginState {
  int k = 0;
  ProbInt distribution = ProbInt::point(0);
  double error = 0.0;
};

/// Second-margin data of the embedding of a T x N joint observable into a
/// T x Z one: per Fourier index k the induced number distribution and its
/// Wasserstein-2 error against the point mass at k. Negative indices carry
/// the reflected distributions, so the error profile is symmetric and the
/// supremum over Z equals the original supremum over N.
struct EmbedReport {
  std::vector<EmbeddedMarginState> states;
  std::vector<double> fock_errors;  // per n >= 0
  double sup_error_z = 0.0;
  double sup_error_fock = 0.0;
  double max_identity_deviation = 0.0;
};

inline EmbedReport embed_joint_to_z(const KernelJoint& f) {
  const int dim = f.window.dim;
  EmbedReport report;
  report.fock_errors.reserve(dim);
  for (int n = 0; n < dim; ++n) {
    const double err = w2_integers(f.number_smear.shifted(n), ProbInt::point(n));
    report.fock_errors.push_back(err);
    report.sup_error_fock = std::max(report.sup_error_fock, err);
  }
  for (int k = -(dim - 1); k <= dim - 1; ++k) {
    EmbeddedMarginState state;
    state.k = k;
    if (k >= 0) {
      state.distribution = f.number_smear.shifted(k);
    } else {
      std::map<int, double> reflected;
      for (const auto& [j, wt] : f.number_smear.atoms()) reflected[k - j] = wt;
      state.distribution = ProbInt(std::move(reflected));
    }
    state.error = w2_integers(state.distribution, ProbInt::point(k));
    report.sup_error_z = std::max(report.sup_error_z, state.error);
    report.max_identity_deviation = std::max(
        report.max_identity_deviation, std::abs(state.error - report.fock_errors[std::abs(k)]));
    report.states.push_back(std::move(state));
  }
  return report;
}

struct PhaseErrorBound {
  double lower = 0.0;
  std::optional<double> exact_if_constant;
};

namespace detail {

inline bool measures_equal(const ProbCircle& a, const ProbCircle& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a.atoms()[i].first - b.atoms()[i].first) > 1e-12) return false;
    if (std::abs(a.atoms()[i].second - b.atoms()[i].second) > 1e-12) return false;
  }
  return true;
}

inline bool is_uniform_grid_measure(const ProbCircle& p) {
  const int n = p.size();
  if (n < 2) return false;
  const double w = 1.0 / n;
  const double gap = kTwoPi / n;
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.atoms()[i].second - w) > 1e-12) return false;
    const double next = (i + 1 < n) ? p.atoms()[i + 1].first : p.atoms()[0].first + kTwoPi;
    if (std::abs(next - p.atoms()[i].first - gap) > 1e-9) return false;
  }
  return true;
}

// Phase distribution of a pure Fock-window state on a uniform grid; the
// density |sum_n c_n e^{-i n theta}|^2 integrates exactly on the grid.
inline ProbCircle pure_phase_distribution(const ComplexVector& c, int grid) {
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(grid);
  double total = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double theta = kTwoPi * g / grid;
    Complex amp(0.0, 0.0);
    for (int n = 0; n < c.size(); ++n) amp += c(n) * std::exp(Complex(0.0, -theta * n));
    const double density = std::norm(amp);
    const double weight = density / grid;
    if (weight > 0.0) {
      atoms.emplace_back(theta, weight);
      total += weight;
    }
  }
  for (auto& [theta, weight] : atoms) weight /= total;
  return ProbCircle(std::move(atoms));
}

}  // namespace detail

/// Error estimate for the phase margin M1(X) = sum_n p_n(X) |n><n| of a
/// kernel joint. Constant kernels have known worst-case values: the uniform
/// kernel attains pi/sqrt(3) and a point kernel attains pi. All other kernels
/// get a certified lower bound: the largest Wasserstein-2 mismatch over a
/// deterministic probe family of number states and truncated phase-localized
/// states. The true supremum over all states is not claimed.
inline PhaseErrorBound kernel_joint_phase_error_bounds(const KernelJoint& f,
                                                       int grid = kDefaultGrid,
                                                       bool force_probes = false) {
  const int dim = f.window.dim;
  PhaseErrorBound out;
  bool constant = true;
  for (int n = 1; n < dim && constant; ++n) {
    constant = detail::measures_equal(f.kernel[0], f.kernel[n]);
  }
  if (constant) {
    if (f.kernel[0].size() == 1) {
      out.exact_if_constant = kPi;
    } else if (detail::is_uniform_grid_measure(f.kernel[0])) {
      out.exact_if_constant = kPi / std::sqrt(3.0);
    }
  }
  if (out.exact_if_constant && !force_probes) {
    out.lower = *out.exact_if_constant;
    return out;
  }

  std::vector<ComplexVector> probes;
  for (int n = 0; n < std::min(dim, 3); ++n) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(n) = 1.0;
    probes.push_back(e);
  }
  std::vector<int> sizes = {dim};
  if (dim / 2 >= 2) sizes.push_back(dim / 2);
  for (int kp : sizes) {
    for (int j = 0; j < 8; ++j) {
      const double theta0 = kTwoPi * j / 8.0;
      ComplexVector c = ComplexVector::Zero(dim);
      for (int n = 0; n < kp; ++n) c(n) = std::exp(Complex(0.0, n * theta0)) / std::sqrt(double(kp));
      probes.push_back(c);
    }
  }

  for (const ComplexVector& psi : probes) {
    std::vector<std::pair<double, double>> mix;
    for (int n = 0; n < dim; ++n) {
      const double wn = std::norm(psi(n));
      if (wn <= 0.0) continue;
      for (const auto& [theta, wt] : f.kernel[n].atoms()) mix.emplace_back(theta, wn * wt);
    }
    const ProbCircle induced = ProbCircle(std::move(mix));
    const ProbCircle target = detail::pure_phase_distribution(psi, grid);
    out.lower = std::max(out.lower, w2_circle(induced, target));
  }
  if (out.exact_if_constant) out.lower = std::max(out.lower, 0.0);
  return out;
}

namespace detail {

// splitmix64: deterministic, platform-independent stream for test states.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
  double gaussian() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * uniform01());
  }
};

}  // namespace detail

/// Reproducible random density operator on the symmetric torus window
/// [-halfwidth, halfwidth]: sigma = G G* / tr(G G*) with i.i.d. complex
/// Gaussian G drawn from a fixed splitmix64 stream.
inline DensityState random_torus_state(int halfwidth, std::uint64_t seed) {
  const TorusWindow w = TorusWindow::symmetric(halfwidth);
  const int d = w.dim();
  detail::SplitMix64 rng(seed);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
  }
  ComplexMatrix s = g * g.adjoint();
  s /= s.trace().real();
  return DensityState(w, HermitianOperator(std::move(s), 1e-9));
}

}  // namespace numphase
