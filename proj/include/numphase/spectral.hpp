#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "numphase/observables.hpp"

namespace numphase {

enum class SectionSpace { Fock, Torus };

inline const char* to_string(SectionSpace s) {
  return s == SectionSpace::Fock ? "fock" : "torus";
}

/// Result of a finite-section ground-state run. `dims` holds the section
/// sizes actually diagonalized (Fock: matrix dimension; torus: half-width k
/// of the window [-k, k]); `alphas` the matching smallest eigenvalues, which
/// decrease monotonically along the schedule.
struct GroundStateReport {
  SectionSpace space = SectionSpace::Torus;
  double weight = 0.5;
  std::vector<int> dims;
  std::vector<double> alphas;
  double converged_value = 0.0;
  ComplexVector converged_vector;
  bool tolerance_met = false;
};

inline std::vector<int> default_fock_schedule() { return {8, 16, 32, 64, 128, 256}; }
inline std::vector<int> default_torus_schedule() { return {4, 8, 16, 32, 64, 128, 256, 512}; }

namespace detail {

inline HermitianOperator weighted_section(SectionSpace space, double t, int size) {
  if (space == SectionSpace::Fock) {
    const FockWindow w(size);
    ComplexMatrix h = (1.0 - t) * number_squared(w).matrix() + t * second_phase_moment(w).matrix();
    return HermitianOperator(std::move(h));
  }
  const TorusWindow w = TorusWindow::symmetric(size);
  ComplexMatrix h = (1.0 - t) * torus_p2(w).matrix() + t * torus_q2(w).matrix();
  return HermitianOperator(std::move(h));
}

}  // namespace detail

/// Ground value of H(t) = (1-t) * kinetic + t * angular second moment by the
/// finite-section scheme: diagonalize each compression in the schedule and
/// stop once consecutive smallest eigenvalues differ by less than tol. A run
/// that exhausts the schedule reports tolerance_met = false instead of
/// throwing; the data is still usable.
inline GroundStateReport finite_section_ground(SectionSpace space, double t,
                                               const std::vector<int>& dims,
                                               double tol = kDefaultSectionTol) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("finite_section_ground: weight must be in [0,1]");
  if (tol <= 0.0) throw ValidationError("finite_section_ground: tolerance must be positive");
  if (dims.empty()) throw ValidationError("finite_section_ground: empty schedule");
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || (i > 0 && dims[i] <= dims[i - 1])) {
      throw ValidationError("finite_section_ground: schedule must be strictly increasing");
    }
  }
  GroundStateReport report;
  report.space = space;
  report.weight = t;
  for (int size : dims) {
    const SpectralDecomposition dec = eig_hermitian(detail::weighted_section(space, t, size));
    const double alpha = dec.eigenvalues(0);
    report.dims.push_back(size);
    report.alphas.push_back(alpha);
    report.converged_value = alpha;
    report.converged_vector = dec.eigenvectors.col(0);
    if (report.alphas.size() >= 2 &&
        std::abs(report.alphas.end()[-1] - report.alphas.end()[-2]) < tol) {
      report.tolerance_met = true;
      break;
    }
  }
  return report;
}

/// Smallest eigenvalue of the torus oscillator P^2 + Q^2 with eigenvector
/// coefficients over the final window; the sections are run at weight 1/2 and
/// rescaled by 2.
inline GroundStateReport oscillator_torus_ground(const std::vector<int>& dims = default_torus_schedule(),
                                                 double tol = kDefaultSectionTol) {
  GroundStateReport report = finite_section_ground(SectionSpace::Torus, 0.5, dims, 0.5 * tol);
  for (double& a : report.alphas) a *= 2.0;
  report.converged_value *= 2.0;
  return report;
}

/// Smallest eigenvalue of N^2 + Phi[2] on the Fock side.
inline GroundStateReport oscillator_fock_ground(const std::vector<int>& dims = default_fock_schedule(),
                                                double tol = kDefaultSectionTol) {
  GroundStateReport report = finite_section_ground(SectionSpace::Fock, 0.5, dims, 0.5 * tol);
  for (double& a : report.alphas) a *= 2.0;
  report.converged_value *= 2.0;
  return report;
}

/// Cached ground value of P^2 + Q^2 at the default schedule.
inline double torus_oscillator_ground_value() {
  static const double value = oscillator_torus_ground().converged_value;
  return value;
}

/// Cached ground value of N^2 + Phi[2] at the default schedule.
inline double fock_oscillator_ground_value() {
  static const double value = oscillator_fock_ground().converged_value;
  return value;
}

/// Joint-predictability cap for Phi(X) and N(Y): any state satisfies
/// Phi_rho(X) + N_rho(Y) <= 1 + sqrt(a_plus) < 2, with a_plus the top
/// eigenvalue of N(Y) Phi(X) N(Y).
struct LenardReport {
  double a_plus = 0.0;
  double bound = 1.0;
  double truncated_sup = 0.0;
};

inline LenardReport lenard_bound(const ArcSet& x, const IndexSet& y, const FockWindow& w) {
  if (x.measure() >= 1.0 - 1e-15) {
    throw BoundInapplicableError("lenard_bound: requires l(X) < 1");
  }
  for (int i : y.indices()) {
    if (i < 0 || i >= w.dim) throw OutOfWindowError("lenard_bound: Y outside window");
  }
  const HermitianOperator effect = phase_effect(x, w);
  LenardReport report;
  if (!y.empty()) {
    // N(Y) Phi(X) N(Y) has the same nonzero spectrum as the |Y| x |Y|
    // principal submatrix, which does not depend on the truncation.
    const int n = y.size();
    ComplexMatrix sub(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) sub(r, c) = effect.entry(y.indices()[r], y.indices()[c]);
    }
    const RealVector ev = eig_hermitian(HermitianOperator(std::move(sub))).eigenvalues;
    report.a_plus = std::max(0.0, ev(ev.size() - 1));
  }
  if (report.a_plus >= 1.0) {
    throw NumericalConsistencyError("lenard_bound: a_plus reached 1");
  }
  report.bound = 1.0 + std::sqrt(report.a_plus);
  const HermitianOperator sum =
      HermitianOperator(effect.matrix() + number_projection(y, w).matrix());
  const RealVector ev = eig_hermitian(sum).eigenvalues;
  report.truncated_sup = ev(ev.size() - 1);
  if (report.truncated_sup > report.bound + 1e-9) {
    throw NumericalConsistencyError("lenard_bound: truncated sup exceeded the bound");
  }
  return report;
}

/// Largest alpha >= 0 with E - alpha |e><e| still positive semidefinite.
/// For definite E this is 1 / <e|E^{-1}|e>; nearly singular E falls back to a
/// bisection on the smallest eigenvalue (tolerance 1e-12 on alpha).
inline double max_scalar_below(const HermitianOperator& e, int basis_index) {
  if (basis_index < 0 || basis_index >= e.dim()) {
    throw OutOfWindowError("max_scalar_below: basis index outside window");
  }
  const double min_ev = min_eigenvalue(e);
  if (min_ev < -1e-10) throw InvalidInputError("max_scalar_below: E must be positive semidefinite");
  if (min_ev > 1e-10) {
    const HermitianOperator inv = inverse_pd(e);
    return 1.0 / inv.entry(basis_index, basis_index).real();
  }
  double lo = 0.0;
  double hi = std::max(0.0, e.entry(basis_index, basis_index).real()) + 1e-12;
  auto shifted_min = [&](double alpha) {
    ComplexMatrix m = e.matrix();
    m(basis_index, basis_index) -= alpha;
    return min_eigenvalue(HermitianOperator(std::move(m)));
  };
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (shifted_min(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// The scalar witness collapses roughly like 2^{-k}, so dimensions beyond ~25
// put it below what any double-precision eigensolver can resolve. The same
// number equals the final prediction-error pivot of the Toeplitz matrix,
// whose Levinson recursion multiplies per-step factors (1 - |rho|^2) and
// therefore tracks the exponential decay stably once carried in wide floats.

using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<320>>;

struct BigComplex {
  BigFloat re, im;
};

inline BigComplex big_add(const BigComplex& a, const BigComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
inline BigComplex big_mul(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline BigComplex big_conj(const BigComplex& a) { return {a.re, -a.im}; }
inline BigComplex big_scale(const BigComplex& a, const BigFloat& s) { return {a.re * s, a.im * s}; }
inline BigFloat big_abs2(const BigComplex& a) { return a.re * a.re + a.im * a.im; }

inline const BigFloat& big_two_pi() {
  static const BigFloat value = 8 * atan(BigFloat(1));
  return value;
}

// I_m of the arc set, evaluated in wide floats from the double endpoints
inline BigComplex big_arc_coeff(const ArcSet& x, int m) {
  if (m == 0) {
    BigFloat total = 0;
    for (const auto& [a, b] : x.arcs()) total += BigFloat(b) - BigFloat(a);
    return {total / big_two_pi(), BigFloat(0)};
  }
  BigFloat re = 0, im = 0;
  for (const auto& [a, b] : x.arcs()) {
    re += cos(BigFloat(m) * BigFloat(b)) - cos(BigFloat(m) * BigFloat(a));
    im += sin(BigFloat(m) * BigFloat(b)) - sin(BigFloat(m) * BigFloat(a));
  }
  // (re + i*im) / (i * 2*pi*m)
  const BigFloat denom = big_two_pi() * m;
  return {im / denom, -re / denom};
}

// Final Levinson prediction-error pivot of the k x k Toeplitz truncation of
// the arc indicator; equals 1/<0| Phi_k(X)^{-1} |0> by persymmetry.
inline BigFloat arc_prediction_error(const ArcSet& x, int k) {
  std::vector<BigComplex> t(k);
  for (int m = 0; m < k; ++m) t[m] = big_arc_coeff(x, m);
  BigFloat eps = t[0].re;
  std::vector<BigComplex> a(k, BigComplex{BigFloat(0), BigFloat(0)});
  for (int m = 1; m < k; ++m) {
    BigComplex beta = t[m];
    for (int j = 1; j < m; ++j) beta = big_add(beta, big_mul(a[j], t[m - j]));
    if (eps <= 0) throw NumericalConsistencyError("arc_prediction_error: pivot collapsed");
    const BigComplex rho = big_scale(beta, 1 / eps);
    std::vector<BigComplex> next(a.begin(), a.begin() + m + 1);
    next[m] = {-rho.re, -rho.im};
    for (int j = 1; j < m; ++j) {
      const BigComplex corr = big_mul(rho, big_conj(a[m - j]));
      next[j] = {a[j].re - corr.re, a[j].im - corr.im};
    }
    for (int j = 1; j <= m; ++j) a[j] = next[j];
    const BigFloat factor = 1 - big_abs2(rho);
    if (factor <= 0) throw NumericalConsistencyError("arc_prediction_error: precision exhausted");
    eps *= factor;
  }
  return eps;
}

}  // namespace detail

/// The Lemma-1 witness sequence: largest scalar alpha with
/// alpha |0><0| <= Phi_k(X), per section dimension k. Strictly positive at
/// every finite k and nonincreasing in k; the infinite-dimensional collapse
/// drives it to zero (no rate asserted). Evaluated through the wide-float
/// prediction-error recursion so the exponentially small tail keeps full
/// relative accuracy; max_scalar_below reproduces the same numbers on the
/// dimensions where double precision still resolves them.
inline std::vector<std::pair<int, double>> complementarity_decay(const ArcSet& x,
                                                                 const std::vector<int>& dims) {
  const double l = x.measure();
  if (!(l > 0.0 && l < 1.0)) {
    throw ValidationError("complementarity_decay: requires 0 < l(X) < 1");
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(dims.size());
  for (int k : dims) {
    if (k < 1) throw ValidationError("complementarity_decay: dims must be >= 1");
    out.emplace_back(k, detail::arc_prediction_error(x, k).convert_to<double>());
  }
  return out;
}

/// W E W* with W = sum_k |k><k+r|: drops the first r rows and columns and
/// reindexes. On Toeplitz input this reproduces the smaller truncation.
inline HermitianOperator shift_compress(const HermitianOperator& e, int r) {
  if (r < 0 || r >= e.dim()) throw OutOfWindowError("shift_compress: shift outside window");
  const int d = e.dim() - r;
  return HermitianOperator(e.matrix().block(r, r, d, d));
}

}  // namespace numphase
