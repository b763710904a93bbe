// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include "cli.hpp"
#include "semical/demo.hpp"
#include "semical/field.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace semical;
namespace fs = std::filesystem;

namespace {

constexpr double kExactTol = 1e-12;  // criterion 1
constexpr double kInvariantTol = 1e-9;
constexpr double kEigenLower = -1e-12;
constexpr double kPfaffianTol = 1e-10;
constexpr double kOracleFloor = 0.99;

constexpr int kSuiteInstances = 200;
constexpr int kComassInstances = 50;
constexpr long kComassSamples = 100000;
constexpr int kComassRestarts = 20;
constexpr int kPfaffianCases = 500;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& what) {
  if (o.pass) o.detail = what;
  o.pass = false;
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double worst_residual(const PointConstruction& pc) {
  double worst = 0.0;
  for (const auto& [name, value] : pc.residuals) worst = std::max(worst, value);
  return worst;
}

// Instances of the random-field suite (criteria 2-4). Even instances are
// Gaussian forms rescaled to unit comass; odd ones plant a unit block and a
// mix of large, small and zero blocks, and use a fixed epsilon of 0.5 so the
// small blocks land in V-perp.
struct Instance {
  int n = 0;
  MetricTensor g = MetricTensor::identity(1);
  TwoForm omega = TwoForm::zero(1);
  EpsilonPolicy policy;
  bool planted = false;
};

Instance make_instance(Rng& rng, int n, int k) {
  Instance inst;
  inst.n = n;
  inst.g = testing::random_metric(rng, n);
  if (k % 2 == 0) {
    inst.omega = testing::rescale_to_unit_comass(inst.g, testing::random_two_form(rng, n));
    return inst;
  }
  inst.planted = true;
  std::vector<double> sigmas{1.0};
  for (int b = 1; b < n / 2; ++b) {
    switch (rng.below(3)) {
      case 0: sigmas.push_back(std::sqrt(0.25 + 0.75 * rng.uniform())); break;  // lambda in [0.25, 1]
      case 1: sigmas.push_back(0.3 * rng.uniform()); break;                     // lambda < 0.09
      default: sigmas.push_back(0.0); break;
    }
  }
  inst.omega = testing::planted_form(rng, inst.g, sigmas);
  inst.policy = EpsilonPolicy::fixed(0.5);
  return inst;
}

Outcome criterion1() {
  Outcome o;
  const FieldGrid grid = parse_calfield(demo_calfield("standard"));
  const FieldPoint& p = grid.points.front();
  const PointConstruction pc = construct_point(p.g, p.omega);
  Matrix j = Matrix::Zero(4, 4);
  j(0, 1) = -1;
  j(1, 0) = 1;
  j(2, 3) = -1;
  j(3, 2) = 1;
  const double dj = max_abs(pc.J.matrix - j);
  const double dg = max_abs(pc.gJ.matrix() - Matrix::Identity(4, 4));
  const double dw = max_abs(pc.Omega.matrix() - p.omega.matrix());
  const double worst = std::max({dj, dg, dw, worst_residual(pc)});
  if (worst > kExactTol) fail(o, fmt("max deviation %.3g", worst));
  o.detail = o.pass ? fmt("max deviation %.3g <= 1e-12", worst) : o.detail;
  return o;
}

struct SuiteOutcome {
  Outcome invariants, eigenvalues, preservation;
};

SuiteOutcome suite() {
  SuiteOutcome s;
  double worst_inv = 0.0;
  double lo = 1.0, hi = 0.0;
  double worst_pres = 0.0;
  int with_planes = 0, planes = 0, planted = 0;
  for (int n : {4, 6, 8}) {
    Rng rng(derive_seed(2024, static_cast<std::uint64_t>(n)));
    for (int k = 0; k < kSuiteInstances; ++k) {
      const Instance inst = make_instance(rng, n, k);
      planted += inst.planted ? 1 : 0;
      PointConstruction pc;
      try {
        pc = construct_point(inst.g, inst.omega, inst.policy);
      } catch (const Error& e) {
        fail(s.invariants, "n=" + std::to_string(n) + " instance " + std::to_string(k) + ": " + e.what());
        continue;
      }
      const Matrix id = Matrix::Identity(n, n);
      const Matrix& b = pc.split.v_basis.matrix();
      double inv = max_abs(pc.J.matrix * pc.J.matrix + id);
      inv = std::max(inv, pc.residuals.at("compatibility"));
      inv = std::max(inv, pc.residuals.at("commutation"));
      if (!(pc.gj_min_eigenvalue > 0.0)) fail(s.invariants, "gJ not positive definite");
      if (pc.rank() > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(b.cols(), b.cols()) -
                                                 b.transpose() * pc.gJ.matrix() * b);
        inv = std::max(inv, -es.eigenvalues()(0));
      }
      // gJ(v, w) = Omega(v, J w) on random vectors, relative to their size.
      for (int t = 0; t < 3; ++t) {
        const Vector v = testing::random_matrix(rng, n, 1);
        const Vector w = testing::random_matrix(rng, n, 1);
        const double scale = v.norm() * w.norm() * std::max(1.0, max_abs(pc.gJ.matrix()));
        inv = std::max(inv, std::abs(pc.gJ.inner(v, w) - eval_two_form(pc.Omega, v, pc.J(w))) / scale);
      }
      worst_inv = std::max(worst_inv, inv);
      if (inv > kInvariantTol) fail(s.invariants, fmt("invariant residual %.3g", inv));

      lo = std::min(lo, pc.spectrum.eigenvalues.back());
      hi = std::max(hi, pc.spectrum.eigenvalues.front());

      const Frame e = calibrated_eigenspace(pc, pc.A, 1e-8, inst.g);
      if (e.empty()) {
        fail(s.preservation, "empty eigenvalue-1 eigenspace in a unit-comass instance");
        continue;
      }
      ++with_planes;
      std::vector<Frame> cal;
      for (int q = 0; q + 1 < e.size(); q += 2) cal.push_back(Frame::from_vectors({e[q], e[q + 1]}));
      for (int t = 0; t < 2; ++t) cal.push_back(testing::complex_frame_in(rng, inst.g, pc.A, e, 1));
      for (const auto& f : cal) {
        ++planes;
        const double r0 = test_calibrated(inst.g, inst.omega, f).ratio;
        const double r1 = test_calibrated(pc.gJ, pc.Omega, f).ratio;
        worst_pres = std::max({worst_pres, std::abs(r0 - 1.0), std::abs(r1 - 1.0)});
      }
    }
  }
  if (s.invariants.pass) s.invariants.detail = fmt("%g instances, max residual %.3g", 3.0 * kSuiteInstances, worst_inv);
  if (lo < kEigenLower || hi > 1.0 + kInvariantTol) fail(s.eigenvalues, fmt("eigenvalues in [%.3g, %.17g]", lo, hi));
  if (s.eigenvalues.pass) s.eigenvalues.detail = fmt("all eigenvalues in [%.3g, 1 + %.3g]", lo, hi - 1.0);
  if (worst_pres > kInvariantTol) fail(s.preservation, fmt("calibration ratio error %.3g", worst_pres));
  if (s.preservation.pass) {
    s.preservation.detail = std::to_string(with_planes) + " instances (" + std::to_string(planted) +
                            " planted), " + std::to_string(planes) + " planes, " +
                            fmt("max |ratio - 1| %.3g", worst_pres);
  }
  return s;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(505);
  double worst_low = 2.0, worst_high = 0.0;
  for (int k = 0; k < kComassInstances; ++k) {
    const int n = 2 + static_cast<int>(rng.below(7));  // 2..8
    const MetricTensor g = testing::random_metric(rng, n);
    const TwoForm w = testing::random_two_form(rng, n);
    const double exact = comass2_exact(g, w).value;
    const double sampled =
        comass_bruteforce(g, w, {kComassSamples, kComassRestarts, derive_seed(5, k)}).value;
    worst_low = std::min(worst_low, sampled / exact);
    worst_high = std::max(worst_high, sampled / exact);
    if (sampled < kOracleFloor * exact || sampled > exact * (1 + 1e-9)) {
      fail(o, "instance " + std::to_string(k) + fmt(": sampled/exact %.17g", sampled / exact));
    }
  }
  if (o.pass) o.detail = fmt("sampled/exact in [%.12f, %.12f]", worst_low, worst_high);
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(606);
  double worst = 0.0, worst_wirtinger = 0.0;
  for (int k = 0; k < kComassInstances; ++k) {
    const int n = 4 + 2 * static_cast<int>(rng.below(3));
    const Instance inst = make_instance(rng, n, k);
    const PointConstruction pc = construct_point(inst.g, inst.omega, inst.policy);
    const double c =
        comass_bruteforce(pc.gJ, pc.Omega, {kComassSamples, kComassRestarts, derive_seed(6, k)}).value;
    worst = std::max(worst, c);
    const Vector v = pc.spectrum.pairs.front().v;
    const double r = test_calibrated(pc.gJ, pc.Omega, Frame::from_vectors({v, pc.J(v)})).ratio;
    worst_wirtinger = std::max(worst_wirtinger, std::abs(r - 1.0));
  }
  if (worst > 1 + 1e-9) fail(o, fmt("sampled comass %.17g", worst));
  if (worst_wirtinger > kInvariantTol) fail(o, fmt("(v, Jv) ratio error %.3g", worst_wirtinger));
  if (o.pass) o.detail = fmt("max sampled comass %.15f, max (v,Jv) error %.3g", worst, worst_wirtinger);
  return o;
}

Outcome criterion7() {
  Outcome o;
  Rng rng(707);
  double worst = 0.0;
  for (int k = 0; k < kPfaffianCases; ++k) {
    const int p = 1 + k % 3;
    const int n = 2 * p + static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - 2 * p)));
    const TwoForm w = testing::random_two_form(rng, n);
    const Frame f(testing::random_matrix(rng, n, 2 * p));
    const auto oracle = testing::wedge_expansion(w, f);
    const double value = eval_power(PowerForm(w, p), f);
    const double rel = std::abs(value - oracle.value) / std::max(oracle.magnitude, 1e-300);
    worst = std::max(worst, rel);
  }
  if (worst > kPfaffianTol) fail(o, fmt("relative error %.3g", worst));
  if (o.pass) o.detail = fmt("%g cases, max relative error %.3g", kPfaffianCases, worst);
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(808);
  double worst_upper = 0.0, worst_planted = 2.0, worst_inclusion = 0.0;
  int planted_count = 0;
  for (int k = 0; k < kComassInstances; ++k) {
    const int n = 4 + 2 * static_cast<int>(rng.below(3));
    const MetricTensor g = testing::random_metric(rng, n);
    TwoForm w = TwoForm::zero(n);
    const bool planted = k % 2 == 1;
    if (planted) {
      std::vector<double> sigmas{1.0, 1.0};
      for (int b = 2; b < n / 2; ++b) sigmas.push_back(rng.uniform());
      w = testing::planted_form(rng, g, sigmas);
    } else {
      w = testing::rescale_to_unit_comass(g, testing::random_two_form(rng, n));
    }
    const PowerForm w2(w, 2);
    const double c =
        comass_bruteforce(g, w2, {kComassSamples, kComassRestarts, derive_seed(8, k)}).value;
    worst_upper = std::max(worst_upper, c);
    if (!planted) continue;
    ++planted_count;
    worst_planted = std::min(worst_planted, c);

    const PointConstruction pc = construct_point(g, w);
    const Frame e = calibrated_eigenspace(pc, pc.A, 1e-8, g);
    if (e.size() < 4) {
      fail(o, "planted eigenspace has dimension " + std::to_string(e.size()));
      continue;
    }
    std::vector<Frame> frames{Frame(Matrix(e.matrix().leftCols(4)))};
    for (int t = 0; t < 3; ++t) frames.push_back(testing::complex_frame_in(rng, g, pc.A, e, 2));
    for (const auto& f : frames) {
      const double r0 = test_calibrated(g, w2, f).ratio;
      if (std::abs(r0 - 1.0) > kInvariantTol) {
        fail(o, fmt("extracted 4-frame not omega^2/2-calibrated (ratio %.17g)", r0));
        continue;
      }
      const double r1 = test_calibrated(pc.gJ, PowerForm(pc.Omega, 2), f).ratio;
      worst_inclusion = std::max(worst_inclusion, std::abs(r1 - 1.0));
    }
  }
  if (worst_upper > 1 + 1e-9) fail(o, fmt("sampled power comass %.17g", worst_upper));
  if (worst_planted < kOracleFloor) fail(o, fmt("planted sampled comass only %.6f", worst_planted));
  if (worst_inclusion > kInvariantTol) fail(o, fmt("Omega^2/2 ratio error %.3g", worst_inclusion));
  if (o.pass) {
    o.detail = fmt("max sampled %.15f, planted min %.9f, ", worst_upper, worst_planted) +
               fmt("inclusion error %.3g over %g planted", worst_inclusion, planted_count);
  }
  return o;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

std::string demo_path(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("semical_acceptance_" + name + ".cal");
  std::ofstream(p) << demo_calfield(name);
  return p.string();
}

Outcome criterion9() {
  Outcome o;
  const FieldGrid grid = parse_calfield(demo_calfield("ramp-gap"));
  const ConstructionField cf = process_field(grid, {EpsilonPolicy::fixed(0.36), true, {}});
  std::string flagged;
  for (std::size_t k = 0; k < cf.points.size(); ++k) {
    const double s = 0.6 - 0.125 * static_cast<double>(k);
    const bool expected = s * s > 0.36 / 4 && s * s < 0.36 / 2;
    if (cf.points[k].gap_ok == expected) fail(o, "point " + std::to_string(k) + " misclassified");
    if (!cf.points[k].gap_ok) flagged += (flagged.empty() ? "" : ",") + std::to_string(k);
  }
  const ConstructionField automatic = process_field(grid);
  if (std::abs(automatic.epsilon - 0.36) > 1e-12) fail(o, fmt("automatic epsilon %.17g", automatic.epsilon));
  const std::string file = demo_path("ramp-gap");
  const CliResult build = cli({"build", file});
  const CliResult verify = cli({"verify", file});
  if (build.code != 0) fail(o, "build exit " + std::to_string(build.code));
  if (verify.code != 0) fail(o, "verify exit " + std::to_string(verify.code));
  if (build.out.find("\"gap_violations\": [2]") == std::string::npos) fail(o, "report lacks gap flags");
  if (o.pass) o.detail = "flagged points {" + flagged + "}; build and verify exit 0";
  return o;
}

Outcome criterion10() {
  Outcome o;
  int compared = 0;
  for (const auto& name : demo_names()) {
    const std::string file = demo_path(name);
    for (const char* command : {"build", "verify"}) {
      const CliResult a = cli({command, file, "--seed", "0"});
      const CliResult b = cli({command, file, "--seed", "0"});
      ++compared;
      if (a.out != b.out || a.code != b.code || a.out.empty()) {
        fail(o, std::string(command) + " on " + name + " differs between runs");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " command/demo pairs byte-identical";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  bool all = true;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("[%s] criterion %2d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      Outcome o;
      fail(o, std::string("exception: ") + e.what());
      return o;
    }
  };

  report(1, "compatible-triple fixed point", guarded(criterion1));
  SuiteOutcome s;
  try {
    s = suite();
  } catch (const std::exception& e) {
    fail(s.invariants, e.what());
    fail(s.eigenvalues, e.what());
    fail(s.preservation, e.what());
  }
  report(2, "random-field invariant suite", s.invariants);
  report(3, "eigenvalue bound", s.eigenvalues);
  report(4, "preservation of calibrated planes", s.preservation);
  report(5, "comass oracle agreement", guarded(criterion5));
  report(6, "unit comass of Omega and holomorphic planes", guarded(criterion6));
  report(7, "Pfaffian oracle", guarded(criterion7));
  report(8, "power-form comass and inclusion", guarded(criterion8));
  report(9, "gap handling", guarded(criterion9));
  report(10, "determinism", guarded(criterion10));

  const double seconds = std::chrono::duration<double>(clock::now() - start).count();
  std::printf("acceptance: %s in %.1f s\n", all ? "all criteria pass" : "FAILURES", seconds);
  return all ? 0 : 1;
}
