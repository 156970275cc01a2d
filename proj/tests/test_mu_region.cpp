#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "numphase/mu_region.hpp"
#include "oracles.hpp"

using namespace numphase;

TEST_CASE("margin errors of basis-state generators") {
  const TorusWindow w(-8, 8);
  const ErrorPoint e0 = margin_errors_from_sigma(DensityState::basis_state(Window{w}, 0));
  CHECK(e0.d1 == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-2));
  CHECK(e0.d2 == doctest::Approx(0.0).epsilon(1e-12));

  const ErrorPoint e2 = margin_errors_from_sigma(DensityState::basis_state(Window{w}, 2));
  CHECK(e2.d1 == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-2));
  CHECK(e2.d2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("margin errors of the oscillator minimizer add up to the ground value") {
  const GroundStateReport rep = oscillator_torus_ground();
  const DensityState sigma =
      DensityState::pure(Window{TorusWindow::symmetric(rep.dims.back())}, rep.converged_vector);
  const ErrorPoint e = margin_errors_from_sigma(sigma);
  CHECK(e.d1 * e.d1 + e.d2 * e.d2 == doctest::Approx(0.9996).epsilon(5e-4));
  CHECK(e.d1 * e.d1 + e.d2 * e.d2 == doctest::Approx(rep.converged_value).epsilon(1e-4));
}

TEST_CASE("error_sum_check: random states, minimizer, basis state") {
  for (int i = 0; i < 100; ++i) {
    const ErrorSumReport r = error_sum_check(random_torus_state(16, 1000 + i));
    CHECK(r.satisfied);
    CHECK(r.sum >= r.bound - 1e-6);
  }

  const GroundStateReport rep = oscillator_torus_ground();
  const DensityState minimizer =
      DensityState::pure(Window{TorusWindow::symmetric(rep.dims.back())}, rep.converged_vector);
  const ErrorSumReport rmin = error_sum_check(minimizer);
  CHECK(rmin.satisfied);
  CHECK(rmin.sum == doctest::Approx(rmin.bound).epsilon(5e-4));
  CHECK(rmin.sum == doctest::Approx(0.9996).epsilon(5e-4));

  const ErrorSumReport re0 = error_sum_check(DensityState::basis_state(Window{TorusWindow(-4, 4)}, 0));
  CHECK(re0.d1_sq == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-12));
  CHECK(re0.d2_sq == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(re0.satisfied);

  CHECK_THROWS_AS(error_sum_check(DensityState::basis_state(Window{FockWindow(4)}, 0)),
                  ValidationError);
}

TEST_CASE("trace_boundary on the torus: endpoints, identity, monotone trade-off") {
  const std::vector<double> tgrid = {0.001, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
  const BoundaryCurve curve = trace_boundary(SectionSpace::Torus, tgrid, {4, 8, 16, 32, 64});
  REQUIRE(curve.points.size() == tgrid.size());

  for (const BoundaryPoint& p : curve.points) {
    CHECK(p.converged);
    // the reported energy is the weighted combination of the two moments
    CHECK((1.0 - p.t) * p.d2 * p.d2 + p.t * p.d1 * p.d1 ==
          doctest::Approx(p.energy).epsilon(1e-9));
    CHECK(p.d1 * p.d1 <= kPi * kPi / 3.0 + 1e-9);
  }

  // t -> 0+: nearly sharp momentum, nearly uniform angle
  CHECK(curve.points.front().d2 < 0.05);
  CHECK(curve.points.front().d1 == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(5e-3));

  // t = 1/2 recovers the oscillator ground value
  const BoundaryPoint& mid = curve.points[3];
  CHECK(mid.d1 * mid.d1 + mid.d2 * mid.d2 == doctest::Approx(0.9996).epsilon(5e-4));

  for (size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].d1 <= curve.points[i - 1].d1 + 1e-8);
    CHECK(curve.points[i].d2 >= curve.points[i - 1].d2 - 1e-8);
  }

  CHECK_THROWS_AS(trace_boundary(SectionSpace::Torus, {0.0, 0.5}, {4, 8}), ValidationError);
  CHECK_THROWS_AS(trace_boundary(SectionSpace::Torus, {0.5, 0.5}, {4, 8}), ValidationError);
}

TEST_CASE("trace_boundary on the Fock side: oscillator point and domination") {
  const std::vector<double> tgrid = {0.25, 0.5, 0.75};
  const BoundaryCurve fock = trace_boundary(SectionSpace::Fock, tgrid, default_fock_schedule());
  const BoundaryCurve torus = trace_boundary(SectionSpace::Torus, tgrid, default_torus_schedule());

  const BoundaryPoint& mid = fock.points[1];
  CHECK(mid.d1 * mid.d1 + mid.d2 * mid.d2 == doctest::Approx(1.5818).epsilon(5e-4));

  // compression to the nonnegative modes cannot undercut the full problem
  for (size_t i = 0; i < tgrid.size(); ++i) {
    CHECK(fock.points[i].energy >= torus.points[i].energy - 1e-8);
  }
}

TEST_CASE("strict_subset_evidence: positive interior gap, published value at 1/2") {
  const auto rows = strict_subset_evidence({0.25, 0.5, 0.75});
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.gap > 0.0);
    CHECK(r.gap == doctest::Approx(r.fock_value - r.torus_value).epsilon(1e-12));
  }
  CHECK(rows[1].gap == doctest::Approx((1.5818 - 0.9996) / 2.0).epsilon(1e-3));

  // tiny t: both kinetic ground states annihilate, the gap closes
  const auto small = strict_subset_evidence({0.01});
  CHECK(small[0].fock_value < 0.05);
  CHECK(small[0].torus_value < 0.05);
  CHECK(small[0].gap >= -1e-8);
  CHECK(small[0].gap < 0.02);

  CHECK_THROWS_AS(strict_subset_evidence({0.0}), ValidationError);
}

TEST_CASE("embed_joint_to_z: sharp margin embeds with zero error") {
  const KernelJoint joint = KernelJoint::constant(ProbCircle::uniform_grid(8), 5);
  const EmbedReport rep = embed_joint_to_z(joint);
  REQUIRE(rep.states.size() == 9);  // k in [-4, 4]
  for (const auto& s : rep.states) {
    CHECK(s.error == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.distribution.atoms().size() == 1);
    CHECK(s.distribution.atoms().count(s.k) == 1);
  }
  CHECK(rep.sup_error_z == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.max_identity_deviation <= 1e-12);
}

TEST_CASE("embed_joint_to_z: unit shift and the half-half smearing") {
  const KernelJoint shifted =
      KernelJoint::constant(ProbCircle::point(1.0), 6, ProbInt::point(1));
  const EmbedReport rep = embed_joint_to_z(shifted);
  for (const auto& s : rep.states) CHECK(s.error == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.sup_error_z == doctest::Approx(rep.sup_error_fock).epsilon(1e-12));

  const ProbInt half({{0, 0.5}, {1, 0.5}});
  const KernelJoint mixed = KernelJoint::constant(ProbCircle::point(0.0), 6, half);
  const EmbedReport rep2 = embed_joint_to_z(mixed);
  for (const auto& s : rep2.states) {
    CHECK(s.error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // cross-check against the brute-force transport oracle
    ProbInt target = ProbInt::point(s.k);
    CHECK(s.error ==
          doctest::Approx(oracles::w2_int_bruteforce(s.distribution, target)).epsilon(1e-9));
  }
  // reflected branch distributions mirror the positive ones
  const auto& minus2 = rep2.states[2];   // k = -3
  CHECK(minus2.k == -3);
  CHECK(minus2.distribution.atoms().count(-3) == 1);
  CHECK(minus2.distribution.atoms().count(-4) == 1);
  CHECK(rep2.max_identity_deviation <= 1e-12);
}

TEST_CASE("kernel_joint_phase_error_bounds: exact constant-kernel branches") {
  const KernelJoint uniform = KernelJoint::constant(ProbCircle::uniform_grid(256), 8);
  const PhaseErrorBound u = kernel_joint_phase_error_bounds(uniform);
  REQUIRE(u.exact_if_constant.has_value());
  CHECK(*u.exact_if_constant == doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-12));
  // consistency with the transport machinery on the discretized kernel
  CHECK(*u.exact_if_constant ==
        doctest::Approx(w2_circle(ProbCircle::uniform_grid(1024), ProbCircle::point(0.0)))
            .epsilon(1e-2));

  const KernelJoint point = KernelJoint::constant(ProbCircle::point(1.3), 8);
  const PhaseErrorBound p = kernel_joint_phase_error_bounds(point);
  REQUIRE(p.exact_if_constant.has_value());
  CHECK(*p.exact_if_constant == doctest::Approx(kPi).epsilon(1e-12));

  // a constant kernel that is neither uniform nor a point gets no exact value
  const KernelJoint other = KernelJoint::constant(ProbCircle({{0.0, 0.5}, {1.0, 0.5}}), 4);
  CHECK_FALSE(kernel_joint_phase_error_bounds(other).exact_if_constant.has_value());
}

TEST_CASE("kernel_joint_phase_error_bounds: probe lower bounds") {
  // alternating point kernels: the number-state probes already show a large error
  std::vector<ProbCircle> kernel;
  for (int n = 0; n < 8; ++n) {
    kernel.push_back(n % 2 == 0 ? ProbCircle::point(0.0) : ProbCircle::point(kPi));
  }
  const PhaseErrorBound b = kernel_joint_phase_error_bounds(KernelJoint(FockWindow(8), kernel), 512);
  CHECK_FALSE(b.exact_if_constant.has_value());
  CHECK(b.lower >= 1.75);
  CHECK(b.lower <= kPi);

  // probe machinery stays below the exact value on the uniform kernel
  const KernelJoint uniform = KernelJoint::constant(ProbCircle::uniform_grid(64), 16);
  const PhaseErrorBound u = kernel_joint_phase_error_bounds(uniform, 512, true);
  CHECK(u.lower <= kPi / std::sqrt(3.0) + 1e-6);
  CHECK(u.lower > 0.5);
}

TEST_CASE("trace_boundary flags unconverged points instead of throwing") {
  const BoundaryCurve curve = trace_boundary(SectionSpace::Torus, {0.4, 0.6}, {6});
  REQUIRE(curve.points.size() == 2);
  for (const BoundaryPoint& p : curve.points) {
    CHECK_FALSE(p.converged);
    CHECK(p.energy > 0.0);
  }
}

TEST_CASE("KernelJoint validates the kernel length") {
  std::vector<ProbCircle> kernel(3, ProbCircle::point(0.0));
  CHECK_THROWS_AS(KernelJoint(FockWindow(4), kernel), ValidationError);
}

TEST_CASE("random_torus_state is reproducible and valid") {
  const DensityState a = random_torus_state(5, 42);
  const DensityState b = random_torus_state(5, 42);
  CHECK((a.matrix.matrix() - b.matrix.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.matrix.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}
