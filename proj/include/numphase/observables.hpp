#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "numphase/linalg.hpp"
#include "numphase/transport.hpp"

namespace numphase {

/// Finite union of disjoint half-open arcs on the circle, kept in canonical
/// form: endpoints in [0, 2*pi], sorted, overlapping or touching arcs merged,
/// arcs crossing 2*pi split on input.
class ArcSet {
 public:
  ArcSet() = default;  // empty set

  explicit ArcSet(const std::vector<std::array<double, 2>>& raw) {
    std::vector<std::array<double, 2>> pieces;
    for (const auto& [a, b] : raw) {
      if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("ArcSet: non-finite endpoint");
      if (b <= a) throw ValidationError("ArcSet: arc end must exceed start");
      const double len = b - a;
      if (len > kTwoPi * (1.0 + 1e-12)) throw ValidationError("ArcSet: arc longer than the circle");
      if (len >= kTwoPi * (1.0 - 1e-15)) {
        pieces.push_back({0.0, kTwoPi});
        continue;
      }
      const double start = wrap_angle(a);
      const double end = start + len;
      if (end > kTwoPi) {
        pieces.push_back({start, kTwoPi});
        pieces.push_back({0.0, end - kTwoPi});
      } else {
        pieces.push_back({start, end});
      }
    }
    std::sort(pieces.begin(), pieces.end());
    for (const auto& p : pieces) {
      if (!arcs_.empty() && p[0] <= arcs_.back()[1]) {
        arcs_.back()[1] = std::max(arcs_.back()[1], p[1]);
      } else {
        arcs_.push_back(p);
      }
    }
  }

  static ArcSet interval(double a, double b) { return ArcSet({{a, b}}); }
  static ArcSet full_circle() { return ArcSet({{0.0, kTwoPi}}); }

  const std::vector<std::array<double, 2>>& arcs() const { return arcs_; }

  /// Normalized measure l(X) in [0, 1].
  double measure() const {
    double total = 0.0;
    for (const auto& [a, b] : arcs_) total += b - a;
    return total / kTwoPi;
  }

  bool empty() const { return arcs_.empty(); }

  ArcSet complement() const {
    std::vector<std::array<double, 2>> out;
    double cursor = 0.0;
    for (const auto& [a, b] : arcs_) {
      if (a > cursor) out.push_back({cursor, a});
      cursor = b;
    }
    if (cursor < kTwoPi) out.push_back({cursor, kTwoPi});
    return ArcSet(out);
  }

  /// Translate by theta modulo 2*pi (X dot-plus theta), re-canonicalized.
  ArcSet translated(double theta) const {
    std::vector<std::array<double, 2>> out;
    for (const auto& [a, b] : arcs_) {
      const double start = wrap_angle(a + theta);
      out.push_back({start, start + (b - a)});
    }
    return ArcSet(out);
  }

  ArcSet united(const ArcSet& other) const {
    std::vector<std::array<double, 2>> all = arcs_;
    all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
    return ArcSet(all);
  }

 private:
  std::vector<std::array<double, 2>> arcs_;
};

/// Finite sorted duplicate-free set of integer indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }

  static IndexSet range(int lo, int hi) {  // inclusive
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return IndexSet(std::move(v));
  }

  const std::vector<int>& indices() const { return indices_; }
  bool empty() const { return indices_.empty(); }
  int size() const { return static_cast<int>(indices_.size()); }
  IndexSet shifted(int delta) const {
    std::vector<int> v = indices_;
    for (int& i : v) i += delta;
    return IndexSet(std::move(v));
  }

 private:
  std::vector<int> indices_;
};

/// Truncated Fock basis |0>, ..., |dim-1>.
struct FockWindow {
  int dim;
  explicit FockWindow(int d) : dim(d) {
    if (d < 1) throw ValidationError("FockWindow: dim >= 1 required");
  }
};

/// Fourier basis e_kmin, ..., e_kmax of L^2(T); must contain index 0.
struct TorusWindow {
  int kmin;
  int kmax;
  TorusWindow(int lo, int hi) : kmin(lo), kmax(hi) {
    if (!(kmin <= 0 && 0 <= kmax)) throw ValidationError("TorusWindow: window must contain 0");
  }
  static TorusWindow symmetric(int k) { return TorusWindow(-k, k); }
  int dim() const { return kmax - kmin + 1; }
};

using Window = std::variant<FockWindow, TorusWindow>;

inline int window_dim(const Window& w) {
  return std::visit([](const auto& x) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, FockWindow>) return x.dim;
    else return x.dim();
  }, w);
}

/// Lowest basis index of the window (0 for Fock, kmin for torus).
inline int window_lo(const Window& w) {
  return std::visit([](const auto& x) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, FockWindow>) return 0;
    else return x.kmin;
  }, w);
}

/// Positive trace-one operator on a basis window (PSD and unit trace both
/// checked to 1e-10).
struct DensityState {
  Window window;
  HermitianOperator matrix;

  DensityState(Window w, HermitianOperator m) : window(w), matrix(std::move(m)) {
    if (matrix.dim() != window_dim(window)) {
      throw ValidationError("DensityState: matrix dim does not match window");
    }
    const double tr = matrix.matrix().trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
      throw ValidationError("DensityState: trace must be 1, got " + std::to_string(tr));
    }
    if (min_eigenvalue(matrix) < -1e-10) {
      throw ValidationError("DensityState: matrix is not positive semidefinite");
    }
  }

  static DensityState pure(const Window& w, ComplexVector psi) {
    const double n = psi.norm();
    if (n <= 0.0) throw ValidationError("DensityState::pure: zero vector");
    psi /= n;
    return DensityState(w, HermitianOperator(psi * psi.adjoint()));
  }

  static DensityState basis_state(const Window& w, int index) {
    const int row = index - window_lo(w);
    if (row < 0 || row >= window_dim(w)) throw OutOfWindowError("basis_state: index outside window");
    ComplexVector psi = ComplexVector::Zero(window_dim(w));
    psi(row) = 1.0;
    return DensityState::pure(w, psi);
  }
};

/// Fourier coefficient of the indicator of X: I_k = integral over X of
/// e^{i k theta} dtheta / 2*pi. I_0 is the measure of X.
inline Complex arc_fourier_coeff(const ArcSet& x, int k) {
  if (k == 0) return Complex(x.measure(), 0.0);
  Complex sum(0.0, 0.0);
  for (const auto& [a, b] : x.arcs()) {
    sum += std::exp(Complex(0.0, k * b)) - std::exp(Complex(0.0, k * a));
  }
  return sum / Complex(0.0, kTwoPi * k);
}

namespace detail {

// Toeplitz matrix with entry(r, c) = coeff(r - c); shared by the phase
// effects and the angular second moments on both windows.
template <typename CoeffFn>
ComplexMatrix toeplitz(int dim, CoeffFn&& coeff) {
  ComplexMatrix m(dim, dim);
  std::vector<Complex> diag(2 * dim - 1);
  for (int k = -(dim - 1); k <= dim - 1; ++k) diag[k + dim - 1] = coeff(k);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = diag[r - c + dim - 1];
  }
  return m;
}

}  // namespace detail

/// Truncation of the canonical phase effect to the leading dim x dim Fock
/// block (the compression P_K Phi(X) P_K, not a renormalized POVM).
inline HermitianOperator phase_effect(const ArcSet& x, const FockWindow& w) {
  return HermitianOperator(detail::toeplitz(w.dim, [&x](int k) { return arc_fourier_coeff(x, k); }));
}

/// Spectral projection of the sharp angle observable on a torus window; same
/// Toeplitz kernel as phase_effect, indexed over Z.
inline HermitianOperator torus_position_effect(const ArcSet& x, const TorusWindow& w) {
  return HermitianOperator(detail::toeplitz(w.dim(), [&x](int k) { return arc_fourier_coeff(x, k); }));
}

inline HermitianOperator number_projection(const IndexSet& y, const FockWindow& w) {
  ComplexMatrix m = ComplexMatrix::Zero(w.dim, w.dim);
  for (int i : y.indices()) {
    if (i < 0 || i >= w.dim) throw OutOfWindowError("number_projection: index outside window");
    m(i, i) = 1.0;
  }
  return HermitianOperator(std::move(m));
}

inline HermitianOperator number_projection(const IndexSet& y, const TorusWindow& w) {
  ComplexMatrix m = ComplexMatrix::Zero(w.dim(), w.dim());
  for (int i : y.indices()) {
    if (i < w.kmin || i > w.kmax) throw OutOfWindowError("number_projection: index outside window");
    m(i - w.kmin, i - w.kmin) = 1.0;
  }
  return HermitianOperator(std::move(m));
}

/// e^{i theta N} E e^{-i theta N}: entry(m, n) picks up e^{i theta (m-n)}.
inline HermitianOperator phase_shift_conjugate(const HermitianOperator& e, double theta) {
  const int dim = e.dim();
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      m(r, c) = std::exp(Complex(0.0, theta * (r - c))) * e.entry(r, c);
    }
  }
  return HermitianOperator(std::move(m), 1e-9);
}

/// Cyclic moment operator V^(k) = sum_n |n><n+k| on the window.
inline ComplexMatrix moment_operator(int k, const FockWindow& w) {
  if (k < 0 || k >= w.dim) throw OutOfWindowError("moment_operator: k outside window");
  ComplexMatrix m = ComplexMatrix::Zero(w.dim, w.dim);
  for (int n = 0; n + k < w.dim; ++n) m(n, n + k) = 1.0;
  return m;
}

namespace detail {

// Fourier coefficients of theta^2 on (-pi, pi]: J_0 = pi^2/3,
// J_k = 2*(-1)^k / k^2 otherwise.
inline Complex angle_square_coeff(int k) {
  if (k == 0) return Complex(kPi * kPi / 3.0, 0.0);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return Complex(2.0 * sign / (double(k) * double(k)), 0.0);
}

}  // namespace detail

/// Second cyclic moment Phi[2] of the canonical phase on the Fock window.
inline HermitianOperator second_phase_moment(const FockWindow& w) {
  return HermitianOperator(detail::toeplitz(w.dim, detail::angle_square_coeff));
}

/// Q^2 on a torus window (angular second moment; same kernel as Phi[2]).
inline HermitianOperator torus_q2(const TorusWindow& w) {
  return HermitianOperator(detail::toeplitz(w.dim(), detail::angle_square_coeff));
}

/// P^2 on a torus window: diagonal k^2.
inline HermitianOperator torus_p2(const TorusWindow& w) {
  RealVector d(w.dim());
  for (int k = w.kmin; k <= w.kmax; ++k) d(k - w.kmin) = double(k) * double(k);
  return HermitianOperator::diagonal(d);
}

/// N^2 on the Fock window: diagonal n^2.
inline HermitianOperator number_squared(const FockWindow& w) {
  RealVector d(w.dim);
  for (int n = 0; n < w.dim; ++n) d(n) = double(n) * double(n);
  return HermitianOperator::diagonal(d);
}

/// Convolution smearing (mu * Phi)(X) = sum_j mu_j Phi(X translated by -theta_j).
inline HermitianOperator smear_phase(const ProbCircle& mu, const ArcSet& x, const FockWindow& w) {
  ComplexMatrix acc = ComplexMatrix::Zero(w.dim, w.dim);
  for (const auto& [theta, weight] : mu.atoms()) {
    acc += weight * phase_effect(x.translated(-theta), w).matrix();
  }
  return HermitianOperator(std::move(acc), 1e-9);
}

/// Convolution smearing (nu * N)(Y) = sum_k nu({k}) N((Y - k) within window).
inline HermitianOperator smear_number(const ProbInt& nu, const IndexSet& y, const FockWindow& w) {
  ComplexMatrix acc = ComplexMatrix::Zero(w.dim, w.dim);
  for (const auto& [k, weight] : nu.atoms()) {
    std::vector<int> shifted;
    for (int i : y.indices()) {
      const int j = i - k;
      if (j >= 0 && j < w.dim) shifted.push_back(j);
    }
    acc += weight * number_projection(IndexSet(std::move(shifted)), w).matrix();
  }
  return HermitianOperator(std::move(acc), 1e-9);
}

/// Probabilities tr[rho Phi(X_i)] over a disjoint partition of the circle.
inline std::vector<double> state_phase_distribution(const DensityState& rho,
                                                    const std::vector<ArcSet>& partition) {
  if (partition.empty()) throw InvalidPartitionError("state_phase_distribution: empty partition");
  double total = 0.0;
  ArcSet all;
  for (const ArcSet& x : partition) {
    total += x.measure();
    all = all.united(x);
  }
  // disjoint and covering iff the union has the summed measure and fills T
  if (std::abs(total - 1.0) > 1e-9 || std::abs(all.measure() - 1.0) > 1e-9) {
    throw InvalidPartitionError("state_phase_distribution: cells must partition the circle");
  }
  std::vector<double> probs;
  probs.reserve(partition.size());
  for (const ArcSet& x : partition) {
    const HermitianOperator eff = std::holds_alternative<FockWindow>(rho.window)
        ? phase_effect(x, std::get<FockWindow>(rho.window))
        : torus_position_effect(x, std::get<TorusWindow>(rho.window));
    const double p = real_trace_product(rho.matrix, eff);
    if (p < -1e-12) throw NumericalConsistencyError("state_phase_distribution: negative probability");
    probs.push_back(p);
  }
  return probs;
}

/// Number distribution of a state: the diagonal, as atoms at window indices.
inline ProbInt state_number_distribution(const DensityState& rho) {
  const int lo = window_lo(rho.window);
  std::map<int, double> atoms;
  double total = 0.0;
  for (int r = 0; r < rho.matrix.dim(); ++r) {
    const double p = rho.matrix.entry(r, r).real();
    if (p > 1e-300) {
      atoms[lo + r] = p;
      total += p;
    }
  }
  for (auto& [k, p] : atoms) p /= total;
  return ProbInt(std::move(atoms));
}

/// Angle distribution Q_sigma of a torus state, discretized on a uniform grid
/// via the density q(theta) = sum_{m,n} sigma_{mn} e^{i (m-n) theta}. The grid
/// quadrature is exact for the trigonometric density as long as grid > window
/// dimension, so the weights sum to the trace.
inline ProbCircle angle_margin(const DensityState& sigma, int grid = kDefaultGrid) {
  if (!std::holds_alternative<TorusWindow>(sigma.window)) {
    throw ValidationError("angle_margin: state must live on a torus window");
  }
  if (grid < 2 * window_dim(sigma.window)) {
    throw ValidationError("angle_margin: grid too coarse for the window");
  }
  const int dim = sigma.matrix.dim();
  // collapse to diagonal sums: q(theta) = sum_k D_k e^{i k theta}
  std::vector<Complex> diag_sums(2 * dim - 1, Complex(0.0, 0.0));
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) diag_sums[m - n + dim - 1] += sigma.matrix.entry(m, n);
  }
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(grid);
  double total = 0.0;
  for (int c = 0; c < grid; ++c) {
    const double theta = kTwoPi * c / grid;
    Complex q(0.0, 0.0);
    for (int k = -(dim - 1); k <= dim - 1; ++k) {
      q += diag_sums[k + dim - 1] * std::exp(Complex(0.0, theta * k));
    }
    const double density = q.real();
    if (density < -1e-10) {
      throw NumericalConsistencyError("angle_margin: negative density " + std::to_string(density));
    }
    const double weight = std::max(0.0, density) / grid;
    if (weight > 0.0) {
      atoms.emplace_back(theta, weight);
      total += weight;
    }
  }
  for (auto& [theta, weight] : atoms) weight /= total;
  return ProbCircle(std::move(atoms));
}

/// Fourier-index (momentum) distribution P_sigma of a torus state.
inline ProbInt fourier_margin(const DensityState& sigma) {
  if (!std::holds_alternative<TorusWindow>(sigma.window)) {
    throw ValidationError("fourier_margin: state must live on a torus window");
  }
  return state_number_distribution(sigma);
}

}  // namespace numphase
