// Acceptance suite: runs every advertised guarantee of the library and CLI at
// its stated tolerance and prints one PASS/FAIL line per criterion. The
// process exit code is the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "numphase/io.hpp"
#include "oracles.hpp"

using namespace numphase;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion-%d %s: %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("numphase_accept_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  const fs::path out_path = dir / ("out_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(NUMPHASE_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>/dev/null";
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const auto stop = std::chrono::steady_clock::now();
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(stop - start).count();
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.out = buf.str();
  return r;
}

std::string fmt(double x) { return format_double(x); }

// criterion 1: torus oscillator ground value and eigenvector via the CLI
void criterion_1() {
  const CliRun run = run_cli("ground --space torus --dims 32,64");
  bool ok = run.exit_code == 0 && run.seconds < 10.0;
  std::ostringstream detail;
  if (!ok) {
    detail << "exit=" << run.exit_code << " time=" << fmt(run.seconds) << "s";
  } else {
    const Json j = parse_json(run.out);
    const double value = j.at("value").get<double>();
    ok = ok && std::abs(value - 0.9996) <= 5e-4;
    const auto vec = j.at("vector");
    const int n = int(vec.size());
    const int center = (n - 1) / 2;
    const double expected[] = {0.7518, 0.4550, 0.1017, 0.0083, 0.0002};
    double worst_coeff = 0.0;
    for (int s = 0; s < 5; ++s) {
      const Complex c(vec[center + s][0].get<double>(), vec[center + s][1].get<double>());
      worst_coeff = std::max(worst_coeff, std::abs(std::abs(c) - expected[s]));
    }
    ok = ok && worst_coeff <= 2e-3;
    double worst_sym = 0.0;
    for (int s = 1; s <= center; ++s) {
      const Complex cp(vec[center + s][0].get<double>(), vec[center + s][1].get<double>());
      const Complex cm(vec[center - s][0].get<double>(), vec[center - s][1].get<double>());
      worst_sym = std::max(worst_sym, std::abs(cp - cm));
    }
    ok = ok && worst_sym <= 1e-8;
    detail << "value=" << fmt(value) << " coeff_dev=" << fmt(worst_coeff)
           << " sym_dev=" << fmt(worst_sym) << " time=" << fmt(run.seconds) << "s";
  }
  report(1, "torus oscillator ground", ok, detail.str());
}

// criterion 2: Fock ground value and eigenvector via the CLI
void criterion_2() {
  const CliRun run = run_cli("ground --space fock --dims 32,64");
  bool ok = run.exit_code == 0 && run.seconds < 5.0;
  std::ostringstream detail;
  if (!ok) {
    detail << "exit=" << run.exit_code << " time=" << fmt(run.seconds) << "s";
  } else {
    const Json j = parse_json(run.out);
    const double value = j.at("value").get<double>();
    ok = ok && std::abs(value - 1.5818) <= 5e-4;
    const auto vec = j.at("vector");
    const double expected[] = {0.7276, 0.6632, 0.1745, 0.0167, 0.0002};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Complex c(vec[i][0].get<double>(), vec[i][1].get<double>());
      worst = std::max(worst, std::abs(std::abs(c) - expected[i]));
    }
    ok = ok && worst <= 2e-3;
    detail << "value=" << fmt(value) << " coeff_dev=" << fmt(worst) << " time=" << fmt(run.seconds)
           << "s";
  }
  report(2, "fock oscillator ground", ok, detail.str());
}

// criterion 3: monotone finite sections across every schedule run
void criterion_3() {
  bool ok = true;
  double worst = -1.0;
  for (SectionSpace space : {SectionSpace::Fock, SectionSpace::Torus}) {
    for (double t : {0.25, 0.5, 0.75}) {
      const std::vector<int> dims =
          space == SectionSpace::Fock ? std::vector<int>{8, 16, 32, 64, 128, 256}
                                      : std::vector<int>{4, 8, 16, 32, 64, 128, 256};
      const GroundStateReport rep = finite_section_ground(space, t, dims, 1e-15);
      for (size_t i = 1; i < rep.alphas.size(); ++i) {
        const double rise = rep.alphas[i] - rep.alphas[i - 1];
        worst = std::max(worst, rise);
        ok = ok && rise <= 1e-10;
      }
    }
  }
  report(3, "monotone finite sections", ok, "max_consecutive_rise=" + fmt(worst));
}

// criterion 4: Lenard bound over 50 random (X, Y) pairs
void criterion_4() {
  oracles::TestRng rng(20240);
  const FockWindow w(64);
  bool ok = true;
  double worst_excess = -2.0, worst_a = 0.0, worst_spec = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const ArcSet x = oracles::random_arcset(rng, 0.9);
    std::vector<int> ys;
    const int count = rng.uniform_int(1, 5);
    for (int i = 0; i < count; ++i) ys.push_back(rng.uniform_int(0, 63));
    const IndexSet y(ys);

    const LenardReport lr = lenard_bound(x, y, w);
    worst_excess = std::max(worst_excess, lr.truncated_sup - (1.0 + std::sqrt(lr.a_plus)));
    worst_a = std::max(worst_a, lr.a_plus);
    ok = ok && lr.truncated_sup <= 1.0 + std::sqrt(lr.a_plus) + 1e-9 && lr.a_plus < 1.0;

    const HermitianOperator phi = phase_effect(x, w);
    const TorusWindow tw(-4, 64);
    const HermitianOperator q = torus_position_effect(x, tw);
    const ComplexMatrix np = number_projection(y, w).matrix();
    const ComplexMatrix pp = number_projection(y, tw).matrix();
    const RealVector ef = eig_hermitian(HermitianOperator(np * phi.matrix() * np)).eigenvalues;
    const RealVector et = eig_hermitian(HermitianOperator(pp * q.matrix() * pp)).eigenvalues;
    for (int i = 0; i < y.size(); ++i) {
      const double dev = std::abs(ef(ef.size() - 1 - i) - et(et.size() - 1 - i));
      worst_spec = std::max(worst_spec, dev);
      ok = ok && dev <= 1e-10;
    }
  }
  report(4, "lenard bound", ok,
         "max_sup_minus_bound=" + fmt(worst_excess) + " max_a_plus=" + fmt(worst_a) +
             " max_spectrum_dev=" + fmt(worst_spec));
}

// criterion 5: complementarity witness strictly positive, strictly decreasing
void criterion_5() {
  const auto rows = complementarity_decay(ArcSet::interval(0.0, kPi), {8, 16, 32, 64, 128, 256});
  bool ok = true;
  for (const auto& [k, alpha] : rows) ok = ok && alpha > 0.0;
  for (size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].second < rows[i - 1].second;
  std::ostringstream detail;
  detail << "alpha(8)=" << fmt(rows.front().second) << " alpha(256)=" << fmt(rows.back().second);
  report(5, "complementarity witness decay", ok, detail.str());
}

// criterion 6: transport oracle equivalence
void criterion_6() {
  oracles::TestRng rng(20246);
  bool ok = true;
  double worst_circle = 0.0, worst_int = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = rng.uniform_int(1, 6);
    std::vector<double> xs, ys;
    std::vector<std::pair<double, double>> xa, ya;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.uniform(0.0, kTwoPi));
      ys.push_back(rng.uniform(0.0, kTwoPi));
      xa.emplace_back(xs.back(), 1.0 / n);
      ya.emplace_back(ys.back(), 1.0 / n);
    }
    const double dev =
        std::abs(w2_circle(ProbCircle(xa), ProbCircle(ya)) - oracles::w2_circle_bruteforce(xs, ys));
    worst_circle = std::max(worst_circle, dev);
    ok = ok && dev <= 1e-9;
  }
  for (int rep = 0; rep < 200; ++rep) {
    const ProbInt a = oracles::random_prob_int(rng);
    const ProbInt b = oracles::random_prob_int(rng);
    const double dev = std::abs(w2_integers(a, b) - oracles::w2_int_bruteforce(a, b));
    worst_int = std::max(worst_int, dev);
    ok = ok && dev <= 1e-9;
  }
  report(6, "transport oracle equivalence", ok,
         "max_circle_dev=" + fmt(worst_circle) + " max_int_dev=" + fmt(worst_int));
}

// criterion 7: the paper's error constants pi/sqrt(3) and pi
void criterion_7() {
  const double low = w2_circle(ProbCircle::uniform_grid(1024), ProbCircle::point(0.0));
  const double low_dev = std::abs(low - kPi / std::sqrt(3.0));
  const double high = smearing_error_phase(ProbCircle::point(kPi));
  const double high_dev = std::abs(high - kPi);
  const PhaseErrorBound point_kernel =
      kernel_joint_phase_error_bounds(KernelJoint::constant(ProbCircle::point(0.7), 8));
  const bool ok = low_dev <= 1e-2 && high_dev <= 1e-12 && point_kernel.exact_if_constant &&
                  std::abs(*point_kernel.exact_if_constant - kPi) <= 1e-12;
  report(7, "error constants pi/sqrt3 and pi", ok,
         "uniform_dev=" + fmt(low_dev) + " point_dev=" + fmt(high_dev));
}

// criterion 8: error-sum bound over random states; equality at the minimizer
void criterion_8() {
  bool ok = true;
  double worst_margin = 1e9;
  for (int i = 0; i < 100; ++i) {
    const ErrorSumReport r = error_sum_check(random_torus_state(16, 51000 + i));
    worst_margin = std::min(worst_margin, r.sum - r.bound);
    ok = ok && r.sum >= r.bound - 1e-6;
  }
  const GroundStateReport rep = oscillator_torus_ground();
  const DensityState minimizer =
      DensityState::pure(Window{TorusWindow::symmetric(rep.dims.back())}, rep.converged_vector);
  const ErrorSumReport rm = error_sum_check(minimizer);
  const double eq_dev = std::abs(rm.sum - rm.bound);
  ok = ok && eq_dev <= 5e-4;
  report(8, "error-sum bound", ok,
         "min_margin=" + fmt(worst_margin) + " minimizer_dev=" + fmt(eq_dev));
}

// criterion 9: strict-subset evidence at t in {0.25, 0.5, 0.75}
void criterion_9() {
  const auto rows = strict_subset_evidence({0.25, 0.5, 0.75});
  bool ok = rows.size() == 3;
  for (const auto& r : rows) ok = ok && r.gap > 0.0;
  const double mid_dev = std::abs(rows[1].gap - (1.5818 - 0.9996) / 2.0);
  ok = ok && mid_dev <= 1e-3;
  std::ostringstream detail;
  detail << "gaps=" << fmt(rows[0].gap) << "," << fmt(rows[1].gap) << "," << fmt(rows[2].gap)
         << " mid_dev=" << fmt(mid_dev);
  report(9, "strict-subset evidence", ok, detail.str());
}

// criterion 10: exactness identities at 1e-12
void criterion_10() {
  oracles::TestRng rng(202410);
  bool ok = true;
  double worst = 0.0;
  const FockWindow w(24);

  for (int rep = 0; rep < 20; ++rep) {
    const ArcSet x = oracles::random_arcset(rng);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double cov_dev = (phase_shift_conjugate(phase_effect(x, w), theta).matrix() -
                            phase_effect(x.translated(theta), w).matrix())
                               .cwiseAbs()
                               .maxCoeff();
    const double comp_dev = (phase_effect(x, w).matrix() +
                             phase_effect(x.complement(), w).matrix() -
                             ComplexMatrix::Identity(24, 24))
                                .cwiseAbs()
                                .maxCoeff();
    worst = std::max({worst, cov_dev, comp_dev});
  }

  for (int k = 0; k < 4; ++k) {
    const IndexSet y({2, 5});
    const ComplexMatrix vk = moment_operator(k, w);
    const double shift_dev = (vk * number_projection(y.shifted(k), w).matrix() * vk.adjoint() -
                              number_projection(y, w).matrix())
                                 .cwiseAbs()
                                 .maxCoeff();
    worst = std::max(worst, shift_dev);
  }

  for (const ProbInt& smear :
       {ProbInt::point(0), ProbInt::point(2), ProbInt({{0, 0.5}, {1, 0.5}}),
        ProbInt({{-1, 0.25}, {0, 0.5}, {3, 0.25}})}) {
    const EmbedReport er = embed_joint_to_z(KernelJoint::constant(ProbCircle::point(0.0), 6, smear));
    worst = std::max(worst, er.max_identity_deviation);
    worst = std::max(worst, std::abs(er.sup_error_z - er.sup_error_fock));
  }

  ok = worst <= 1e-12;
  report(10, "exactness identities", ok, "max_deviation=" + fmt(worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
