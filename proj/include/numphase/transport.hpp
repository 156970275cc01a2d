#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "numphase/common.hpp"

namespace numphase {

/// Atomic probability measure on the circle. Canonical form: angles wrapped to
/// [0, 2*pi), ascending, exact duplicates merged, all weights > 0, total
/// weight 1 within 1e-9.
class ProbCircle {
 public:
  explicit ProbCircle(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw ValidationError("ProbCircle: no atoms");
    for (auto& [angle, weight] : atoms) {
      if (!std::isfinite(angle) || !std::isfinite(weight)) {
        throw ValidationError("ProbCircle: non-finite atom");
      }
      if (weight <= 0.0) throw ValidationError("ProbCircle: weights must be positive");
      angle = wrap_angle(angle);
    }
    std::sort(atoms.begin(), atoms.end());
    double total = 0.0;
    for (const auto& [angle, weight] : atoms) {
      if (!atoms_.empty() && atoms_.back().first == angle) {
        atoms_.back().second += weight;
      } else {
        atoms_.emplace_back(angle, weight);
      }
      total += weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ValidationError("ProbCircle: weights sum to " + std::to_string(total));
    }
  }

  static ProbCircle point(double theta) { return ProbCircle({{theta, 1.0}}); }

  /// n equally weighted atoms at 2*pi*j/n.
  static ProbCircle uniform_grid(int n) {
    if (n < 1) throw ValidationError("ProbCircle::uniform_grid: n >= 1 required");
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n);
    const double w = 1.0 / n;
    for (int j = 0; j < n; ++j) atoms.emplace_back(kTwoPi * j / n, w);
    return ProbCircle(std::move(atoms));
  }

  ProbCircle rotated(double alpha) const {
    std::vector<std::pair<double, double>> atoms = atoms_;
    for (auto& [angle, weight] : atoms) angle += alpha;
    return ProbCircle(std::move(atoms));
  }

  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }

 private:
  std::vector<std::pair<double, double>> atoms_;
};

/// Atomic probability measure on the integers; weights > 0, total 1 within 1e-9.
class ProbInt {
 public:
  explicit ProbInt(std::map<int, double> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("ProbInt: no atoms");
    double total = 0.0;
    for (const auto& [k, weight] : atoms_) {
      if (!std::isfinite(weight) || weight <= 0.0) {
        throw ValidationError("ProbInt: weights must be positive");
      }
      total += weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ValidationError("ProbInt: weights sum to " + std::to_string(total));
    }
  }

  static ProbInt point(int k) { return ProbInt({{k, 1.0}}); }

  ProbInt shifted(int delta) const {
    std::map<int, double> atoms;
    for (const auto& [k, weight] : atoms_) atoms[k + delta] = weight;
    return ProbInt(std::move(atoms));
  }

  const std::map<int, double>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }

 private:
  std::map<int, double> atoms_;
};

/// Second moment about 0 in the arc metric: sum w_j d(theta_j, 0)^2.
inline double second_moment_circle(const ProbCircle& mu) {
  double m = 0.0;
  for (const auto& [angle, weight] : mu.atoms()) {
    const double d = arc_distance(angle, 0.0);
    m += weight * d * d;
  }
  return m;
}

inline double second_moment_int(const ProbInt& nu) {
  double m = 0.0;
  for (const auto& [k, weight] : nu.atoms()) m += weight * double(k) * double(k);
  return m;
}

/// Exact Wasserstein-2 error of the convolution approximator mu * Phi.
inline double smearing_error_phase(const ProbCircle& mu) {
  return std::sqrt(second_moment_circle(mu));
}

/// Exact Wasserstein-2 error of the convolution approximator nu * N.
inline double smearing_error_number(const ProbInt& nu) {
  return std::sqrt(second_moment_int(nu));
}

namespace detail {

// Step representation of a quantile function: positions ascending, cumulative
// masses normalized so cum.back() == 1 exactly.
struct QuantileSteps {
  std::vector<double> pos;
  std::vector<double> cum;
};

inline QuantileSteps circle_quantile_steps(const ProbCircle& p) {
  QuantileSteps q;
  q.pos.reserve(p.size());
  q.cum.reserve(p.size());
  double run = 0.0;
  for (const auto& [angle, weight] : p.atoms()) {
    run += weight;
    q.pos.push_back(angle);
    q.cum.push_back(run);
  }
  const double total = run;
  for (double& c : q.cum) c /= total;
  q.cum.back() = 1.0;
  return q;
}

// Quantile at u in (0,1); evaluated only at cell midpoints so the exact
// continuity convention at breakpoints never matters.
inline double plain_quantile(const QuantileSteps& q, double u) {
  auto it = std::upper_bound(q.cum.begin(), q.cum.end(), u);
  if (it == q.cum.end()) --it;
  return q.pos[static_cast<size_t>(it - q.cum.begin())];
}

// Periodic lift: quantile of the measure unrolled over R, period 2*pi in
// position and 1 in mass.
inline double lifted_quantile(const QuantileSteps& q, double s) {
  double k = std::floor(s);
  double f = s - k;
  if (f >= 1.0) {  // floating point guard
    f -= 1.0;
    k += 1.0;
  }
  return plain_quantile(q, f) + kTwoPi * k;
}

// Cost of the monotone plan matching mu-quantile u to nu-quantile u + t on
// the universal cover. Piecewise linear and convex in t.
inline double shifted_quantile_cost(const QuantileSteps& qa, const QuantileSteps& qb, double t) {
  std::vector<double> cuts;
  cuts.reserve(qa.cum.size() + qb.cum.size() + 4);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  for (size_t i = 0; i + 1 < qa.cum.size(); ++i) cuts.push_back(qa.cum[i]);
  for (double c : qb.cum) {
    const double base = c - t;
    // all integer shifts landing in (0,1)
    double k = std::ceil(-base);
    if (base + k <= 0.0) k += 1.0;
    for (; base + k < 1.0; k += 1.0) cuts.push_back(base + k);
  }
  std::sort(cuts.begin(), cuts.end());
  double cost = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    const double um = 0.5 * (cuts[i] + cuts[i + 1]);
    const double x = plain_quantile(qa, um);
    const double y = lifted_quantile(qb, um + t);
    cost += len * (x - y) * (x - y);
  }
  return cost;
}

// Candidate shifts where the piecewise-linear cost can kink: differences of
// cumulative masses, up to integer winding.
inline std::vector<double> shift_candidates(const QuantileSteps& qa, const QuantileSteps& qb,
                                            int winding) {
  std::vector<double> cand;
  cand.reserve(qa.cum.size() * qb.cum.size() * (2 * winding + 1) + 1);
  cand.push_back(0.0);
  for (double a : qa.cum) {
    for (double b : qb.cum) {
      for (int k = -winding; k <= winding; ++k) {
        const double t = b - a + k;
        if (std::abs(t) <= winding + 0.5) cand.push_back(t);
      }
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  return cand;
}

inline constexpr size_t kFullScanWork = 4000000;

// Minimum of the shifted-quantile cost over all candidate kinks. The cost is
// convex in t, so either a full scan or a ternary search over the sorted
// candidate list is exact; the scan is used while candidates x support size
// stays affordable.
inline double w2_circle_cost(const ProbCircle& mu, const ProbCircle& nu, bool force_scan,
                             size_t work_limit = kFullScanWork) {
  const QuantileSteps qa = circle_quantile_steps(mu);
  const QuantileSteps qb = circle_quantile_steps(nu);
  int winding = 2;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const std::vector<double> cand = shift_candidates(qa, qb, winding);
    size_t best_idx = 0;
    double best = 0.0;
    if (force_scan || cand.size() * (qa.cum.size() + qb.cum.size()) <= work_limit) {
      best = shifted_quantile_cost(qa, qb, cand[0]);
      for (size_t i = 1; i < cand.size(); ++i) {
        const double c = shifted_quantile_cost(qa, qb, cand[i]);
        if (c < best) {
          best = c;
          best_idx = i;
        }
      }
    } else {
      size_t lo = 0, hi = cand.size() - 1;
      while (hi - lo > 2) {
        const size_t m1 = lo + (hi - lo) / 3;
        const size_t m2 = hi - (hi - lo) / 3;
        if (shifted_quantile_cost(qa, qb, cand[m1]) <=
            shifted_quantile_cost(qa, qb, cand[m2])) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      best = shifted_quantile_cost(qa, qb, cand[lo]);
      best_idx = lo;
      for (size_t i = lo + 1; i <= hi; ++i) {
        const double c = shifted_quantile_cost(qa, qb, cand[i]);
        if (c < best) {
          best = c;
          best_idx = i;
        }
      }
    }
    if (best_idx != 0 && best_idx != cand.size() - 1) return best;
    // minimum at the edge of the candidate range: widen the winding window
    winding *= 2;
  }
  throw NumericalConsistencyError("w2_circle: shift minimization failed to bracket");
}

}  // namespace detail

/// Wasserstein-2 distance between atomic measures on the circle under the
/// arc metric. Computed by minimizing the shifted monotone (quantile) plan
/// over the cut parameter; exact for atomic inputs.
inline double w2_circle(const ProbCircle& mu, const ProbCircle& nu) {
  const double cost = detail::w2_circle_cost(mu, nu, false);
  return std::sqrt(std::max(0.0, cost));
}

/// Wasserstein-2 distance on the integers with d(m,n) = |m - n|. The monotone
/// coupling given by a merged-CDF sweep is optimal for the convex cost.
inline double w2_integers(const ProbInt& mu, const ProbInt& nu) {
  double ta = 0.0, tb = 0.0;
  for (const auto& [k, w] : mu.atoms()) ta += w;
  for (const auto& [k, w] : nu.atoms()) tb += w;
  auto ia = mu.atoms().begin();
  auto ib = nu.atoms().begin();
  double ra = ia->second / ta;
  double rb = ib->second / tb;
  double cost = 0.0;
  while (true) {
    const double step = std::min(ra, rb);
    const double diff = double(ia->first) - double(ib->first);
    cost += step * diff * diff;
    ra -= step;
    rb -= step;
    if (ra <= 0.0) {
      if (++ia == mu.atoms().end()) break;
      ra = ia->second / ta;
    }
    if (rb <= 0.0) {
      if (++ib == nu.atoms().end()) break;
      rb = ib->second / tb;
    }
  }
  return std::sqrt(std::max(0.0, cost));
}

}  // namespace numphase
