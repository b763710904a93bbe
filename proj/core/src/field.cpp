#include "semical/field.hpp"

#include "json_text.hpp"
#include "semical/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

namespace semical {

namespace {

// Upper bounds that every constructed point must meet.
constexpr double kAlgebraTol = 1e-10;
constexpr double kComassTol = 1e-9;

unsigned worker_count(std::size_t jobs) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("SEMICAL_THREADS")) {
    const long requested = std::strtol(cap, nullptr, 10);
    if (requested > 0) threads = static_cast<unsigned>(requested);
  }
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, count); each index is written by exactly one worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
}

struct PointData {
  MetricTensor g;
  TwoForm omega;
  Vector coords;
};

PointData point_data(const FieldPoint& p, bool lift) {
  if (!lift) return PointData{p.g, p.omega, p.coords};
  OddLift l = lift_odd(p.g, p.omega);
  Vector x = Vector::Zero(p.coords.size() + 1);
  x.head(p.coords.size()) = p.coords;
  return PointData{std::move(l.g), std::move(l.omega), std::move(x)};
}

struct Spectral {
  std::optional<Endomorphism> a;
  std::optional<PairedSpectrum> spectrum;
  std::string error;
};

}  // namespace

ConstructionField process_field(const FieldGrid& grid, const ProcessConfig& config) {
  if (grid.points.empty()) throw Error("process_field: empty grid");
  const bool lift = grid.dim % 2 != 0;
  const std::size_t count = grid.points.size();

  std::vector<PointData> data;
  data.reserve(count);
  for (const auto& p : grid.points) data.push_back(point_data(p, lift));

  // The spectral work is independent per point.
  std::vector<Spectral> spectral(count);
  parallel_for(count, [&](std::size_t i) {
    try {
      Endomorphism a = build_A(data[i].g, data[i].omega);
      spectral[i].spectrum = paired_spectrum(a, data[i].g, config.tol);
      spectral[i].a = std::move(a);
    } catch (const Error& e) {
      spectral[i].error = e.what();
    }
  });

  ConstructionField cf;
  cf.original_dim = grid.dim;
  cf.dim = lift ? grid.dim + 1 : grid.dim;

  const Spectral& base = spectral.front();
  if (!base.spectrum) throw EpsilonError("cannot infer epsilon: " + base.error);
  if (config.epsilon.mode == EpsilonPolicy::Mode::fixed) {
    if (!(config.epsilon.value > 0.0)) throw Error("process_field: epsilon must be positive");
    cf.epsilon = config.epsilon.value;
  } else {
    cf.epsilon = auto_epsilon(*base.spectrum);
    if (!(cf.epsilon > 0.0)) {
      throw EpsilonError("cannot infer epsilon: base point has no positive eigenvalue");
    }
  }
  {
    const double slack = config.tol.cluster * base.spectrum->lambda_max();
    const SpaceSplit split = classify_bands(*base.spectrum, cf.epsilon, slack);
    if (!split.gap_ok) {
      split_spaces(*base.spectrum, cf.epsilon, slack);  // throws GapViolation
    }
  }

  // Sequential sweep: each frame is aligned to the previous included one.
  std::optional<Frame> previous;
  for (std::size_t i = 0; i < count; ++i) {
    PointResult r;
    r.index = grid.points[i].index;
    r.coords = data[i].coords;
    if (!spectral[i].spectrum) {
      r.error = spectral[i].error;
      cf.points.push_back(std::move(r));
      continue;
    }
    const PairedSpectrum& s = *spectral[i].spectrum;
    r.eigenvalues = s.eigenvalues;
    SpaceSplit split = classify_bands(s, cf.epsilon, config.tol.cluster * s.lambda_max());
    r.gap_ok = split.gap_ok;
    r.offending = split.offending;
    if (split.gap_ok) {
      try {
        r.construction =
            construct_from_split(data[i].g, data[i].omega, *spectral[i].a, s, std::move(split),
                                 config.frame_hints ? previous : std::nullopt, config.tol);
        previous = r.construction->tframe;
      } catch (const Error& e) {
        r.error = e.what();
      }
    }
    cf.points.push_back(std::move(r));
  }

  const PointResult* last = nullptr;
  for (const auto& r : cf.points) {
    if (!r.included()) continue;
    if (last != nullptr) {
      FrameEdge edge{last->index, r.index, std::nullopt};
      const Frame& a = last->construction->tframe;
      const Frame& b = r.construction->tframe;
      if (a.size() == b.size()) edge.deviation = (b.matrix() - a.matrix()).norm();
      cf.frame_continuity.push_back(edge);
    }
    last = &r;
  }
  return cf;
}

std::vector<ContinuityEdge> finite_difference_continuity(const ConstructionField& cf) {
  std::vector<ContinuityEdge> out;
  const PointResult* last = nullptr;
  for (const auto& r : cf.points) {
    if (!r.included()) continue;
    if (last != nullptr) {
      const PointConstruction& a = *last->construction;
      const PointConstruction& b = *r.construction;
      const double scale = 1.0 + (r.coords - last->coords).norm();
      out.push_back(ContinuityEdge{
          last->index, r.index, (b.J.matrix - a.J.matrix).norm() / scale,
          (b.gJ.matrix() - a.gJ.matrix()).norm() / scale,
          (b.Omega.matrix() - a.Omega.matrix()).norm() / scale});
    }
    last = &r;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

bool PointVerification::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

void add_check(std::vector<Check>& checks, std::string name, double value, double threshold,
               bool upper = true) {
  const bool pass = upper ? value <= threshold : value >= threshold;
  checks.push_back(Check{std::move(name), value, threshold, upper, pass});
}

double max_ratio_error(const MetricTensor& metric, const PowerForm& form,
                       const std::vector<Frame>& planes) {
  double worst = 0.0;
  for (const auto& f : planes) {
    worst = std::max(worst, std::abs(test_calibrated(metric, form, f).ratio - 1.0));
  }
  return worst;
}

std::vector<Check> verify_point(const PointConstruction& pc, const PointData& d,
                                const VerifyConfig& config, std::uint64_t seed) {
  std::vector<Check> checks;
  for (const char* name : {"j_squared", "compatibility", "omega_j_invariance", "skewness",
                           "commutation", "q_squared", "tframe_orthonormality",
                           "v_vperp_orthogonality"}) {
    add_check(checks, name, pc.residuals.at(name), kAlgebraTol);
  }
  add_check(checks, "gj_min_eigenvalue", pc.gj_min_eigenvalue,
            config.tol.pd * max_abs(pc.gJ.matrix()), false);

  const double lambda_max = pc.spectrum.lambda_max();
  const double lambda_min = pc.spectrum.eigenvalues.back();
  add_check(checks, "omega_eigenvalue_max", lambda_max, 1.0 + kComassTol);
  add_check(checks, "omega_eigenvalue_min", lambda_min, -1e-12, false);

  add_check(checks, "omega_comass_exact", comass2_exact(d.g, d.omega, config.tol).value,
            1.0 + kComassTol);
  const double exact = comass2_exact(pc.gJ, pc.Omega, config.tol).value;
  add_check(checks, "Omega_comass_exact_error", std::abs(exact - 1.0), kComassTol);
  const SearchOptions search{config.samples, config.restarts, seed};
  add_check(checks, "Omega_comass_sampled",
            comass_bruteforce(pc.gJ, pc.Omega, search).value, 1.0 + kComassTol);

  // Wirtinger: (v, J v) is Omega-calibrated for every v.
  {
    const Vector v = pc.split.m > 0 ? pc.split.v_basis[0] : pc.tframe[0];
    const Vector jv = pc.J(v);
    add_check(checks, "wirtinger_holomorphic",
              max_ratio_error(pc.gJ, pc.Omega, {Frame::from_vectors({v, jv})}), kComassTol);
  }

  // Planes calibrated by omega in (R^n, g) stay calibrated by Omega in (R^n, g_J).
  const Frame eig = calibrated_eigenspace(pc, pc.A, config.tol.cluster, d.g);
  std::vector<Frame> planes;
  for (int k = 0; k + 1 < eig.size(); k += 2) planes.push_back(Frame::from_vectors({eig[k], eig[k + 1]}));
  if (!eig.empty()) {
    Rng rng(derive_seed(seed, 0x5eed));
    for (int trial = 0; trial < 3; ++trial) {
      Vector c(eig.size());
      for (int i = 0; i < c.size(); ++i) c(i) = rng.normal();
      Vector v = eig.matrix() * c;
      v /= d.g.norm(v);
      planes.push_back(Frame::from_vectors({v, pc.A(v)}));
    }
  }
  add_check(checks, "omega_calibration_of_eigenspace_planes", max_ratio_error(d.g, d.omega, planes),
            kComassTol);
  add_check(checks, "preservation", max_ratio_error(pc.gJ, pc.Omega, planes), kComassTol);
  {
    double restriction = 0.0;
    if (!eig.empty()) {
      const Matrix& e = eig.matrix();
      restriction = std::max(max_abs(pc.J.matrix * e - pc.A.matrix * e),
                             max_abs(e.transpose() * (pc.gJ.matrix() - d.g.matrix()) * e));
    }
    add_check(checks, "restriction_identity", restriction, kComassTol);
  }
  {
    double deficit = 0.0;
    if (pc.split.m > 0) {
      const Matrix& b = pc.split.v_basis.matrix();
      const Matrix diff = Matrix::Identity(b.cols(), b.cols()) - b.transpose() * pc.gJ.matrix() * b;
      Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
      deficit = std::max(0.0, -es.eigenvalues()(0)) / max_abs(d.g.matrix());
    }
    add_check(checks, "metric_comparison", deficit, kComassTol);
  }

  for (int p : config.powers) {
    if (p < 1 || 2 * p > d.g.dim()) continue;
    const std::string prefix = "power" + std::to_string(p) + "_";
    const SearchOptions ps{config.samples, config.restarts, derive_seed(seed, 100 + p)};
    add_check(checks, prefix + "comass_sampled",
              comass_bruteforce(d.g, PowerForm(d.omega, p), ps).value, 1.0 + kComassTol);
    add_check(checks, prefix + "Omega_comass_sampled",
              comass_bruteforce(pc.gJ, PowerForm(pc.Omega, p), ps).value, 1.0 + kComassTol);
    double inclusion = 0.0;
    if (eig.size() >= 2 * p) {
      const Frame f(Matrix(eig.matrix().leftCols(2 * p)));
      const double r_omega = test_calibrated(d.g, PowerForm(d.omega, p), f).ratio;
      if (std::abs(r_omega - 1.0) <= kComassTol) {
        inclusion = std::abs(test_calibrated(pc.gJ, PowerForm(pc.Omega, p), f).ratio - 1.0);
      }
    }
    add_check(checks, prefix + "inclusion", inclusion, kComassTol);
  }
  return checks;
}

}  // namespace

VerificationReport verify_field(const ConstructionField& cf, const FieldGrid& grid,
                                const VerifyConfig& config) {
  const bool lift = cf.lifted();
  VerificationReport report;
  report.points.resize(cf.points.size());
  parallel_for(cf.points.size(), [&](std::size_t i) {
    const PointResult& r = cf.points[i];
    PointVerification& pv = report.points[i];
    pv.index = r.index;
    pv.included = r.included();
    if (!r.included()) {
      if (!r.error.empty()) add_check(pv.checks, "construction_error", 1.0, 0.0);
      return;
    }
    const auto it = std::find_if(grid.points.begin(), grid.points.end(),
                                 [&](const FieldPoint& p) { return p.index == r.index; });
    const PointData d = point_data(*it, lift);
    pv.checks = verify_point(*r.construction, d, config, derive_seed(config.seed, r.index));
  });

  std::map<std::string, double> maxima;
  for (std::size_t i = 0; i < cf.points.size(); ++i) {
    const PointResult& r = cf.points[i];
    if (!r.gap_ok) report.gap_violations.push_back(r.index);
    for (const auto& c : report.points[i].checks) {
      if (c.upper) {
        auto [it, inserted] = maxima.emplace(c.name, c.value);
        if (!inserted && !(it->second >= c.value)) it->second = c.value;
      }
      if (!c.pass) {
        report.failed_checks.push_back("point " + std::to_string(r.index) + ": " + c.name);
      }
    }
  }
  report.max_residuals.assign(maxima.begin(), maxima.end());
  report.pass = report.failed_checks.empty();
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json point_json(const PointResult& r) {
  json p;
  p["index"] = r.index;
  p["coordinates"] = vector_json(r.coords);
  p["gap_ok"] = r.gap_ok;
  p["eigenvalues"] = r.eigenvalues;
  p["offending_eigenvalues"] = r.offending;
  p["included"] = r.included();
  if (!r.error.empty()) p["error"] = r.error;
  if (r.included()) {
    const PointConstruction& pc = *r.construction;
    p["m"] = pc.rank();
    p["J"] = matrix_json(pc.J.matrix);
    p["gJ"] = matrix_json(pc.gJ.matrix());
    p["Omega"] = matrix_json(pc.Omega.matrix());
    p["tframe"] = matrix_json(pc.tframe.matrix());
    p["residuals"] = pc.residuals;
  } else {
    p["m"] = nullptr;
    p["J"] = nullptr;
    p["gJ"] = nullptr;
    p["Omega"] = nullptr;
    p["residuals"] = nullptr;
  }
  return p;
}

json field_json(const ConstructionField& cf) {
  json top;
  top["format_version"] = 1;
  top["epsilon"] = cf.epsilon;
  top["dim"] = cf.dim;
  top["original_dim"] = cf.original_dim;
  if (cf.lifted()) {
    top["annotation"] =
        "lifted from " + std::to_string(cf.original_dim) + " to " + std::to_string(cf.dim);
  }
  json points = json::array();
  for (const auto& r : cf.points) points.push_back(point_json(r));
  top["points"] = std::move(points);

  json frames = json::array();
  for (const auto& e : cf.frame_continuity) {
    json edge{{"from", e.from}, {"to", e.to}};
    if (e.deviation) {
      edge["deviation"] = *e.deviation;
    } else {
      edge["deviation"] = nullptr;
    }
    frames.push_back(std::move(edge));
  }
  top["frame_continuity"] = std::move(frames);

  json cont = json::array();
  for (const auto& e : finite_difference_continuity(cf)) {
    cont.push_back(
        {{"from", e.from}, {"to", e.to}, {"d_J", e.d_J}, {"d_gJ", e.d_gJ}, {"d_Omega", e.d_Omega}});
  }
  top["continuity"] = std::move(cont);
  return top;
}

}  // namespace

std::string build_report_json(const ConstructionField& cf) {
  json top = field_json(cf);
  std::map<std::string, double> maxima;
  std::vector<int> gaps;
  bool pass = true;
  int included = 0;
  for (const auto& r : cf.points) {
    if (!r.gap_ok) gaps.push_back(r.index);
    if (!r.error.empty()) pass = false;
    if (!r.included()) continue;
    ++included;
    for (const auto& [name, value] : r.construction->residuals) {
      auto [it, inserted] = maxima.emplace(name, value);
      if (!inserted && !(it->second >= value)) it->second = value;
      if (!(value <= kAlgebraTol)) pass = false;
    }
  }
  top["summary"] = {{"max_residuals", maxima},
                    {"pass", pass},
                    {"included_points", included},
                    {"gap_violations", gaps}};
  return detail::dump_json(top);
}

std::string verify_report_json(const ConstructionField& cf, const VerificationReport& report) {
  json top = field_json(cf);
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    json checks = json::object();
    for (const auto& c : report.points[i].checks) {
      checks[c.name] = {{"value", c.value},
                        {"threshold", c.threshold},
                        {"bound", c.upper ? "upper" : "lower"},
                        {"pass", c.pass}};
    }
    top["points"][i]["checks"] = std::move(checks);
    top["points"][i]["pass"] = report.points[i].pass();
  }
  json maxima = json::object();
  for (const auto& [name, value] : report.max_residuals) maxima[name] = value;
  top["summary"] = {{"max_residuals", maxima},
                    {"pass", report.pass},
                    {"gap_violations", report.gap_violations},
                    {"failed_checks", report.failed_checks}};
  return detail::dump_json(top);
}

std::vector<ComassRow> comass_table(const FieldGrid& grid, int p, const SearchOptions& options) {
  std::vector<ComassRow> rows(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t i) {
    const FieldPoint& pt = grid.points[i];
    ComassRow& row = rows[i];
    row.index = pt.index;
    row.p = p;
    if (p == 1) row.exact = comass2_exact(pt.g, pt.omega).value;
    SearchOptions local = options;
    local.seed = derive_seed(options.seed, static_cast<std::uint64_t>(pt.index));
    const ComassEstimate est = comass_bruteforce(pt.g, PowerForm(pt.omega, p), local);
    row.sampled = est.value;
    row.samples = est.samples;
    row.restarts = est.restarts;
  });
  return rows;
}

std::string comass_report_json(const std::vector<ComassRow>& rows) {
  json top;
  top["format_version"] = 1;
  json points = json::array();
  for (const auto& r : rows) {
    json p{{"index", r.index},
           {"p", r.p},
           {"sampled", r.sampled},
           {"samples", r.samples},
           {"restarts", r.restarts}};
    if (r.exact) {
      p["exact"] = *r.exact;
    } else {
      p["exact"] = nullptr;
    }
    points.push_back(std::move(p));
  }
  top["points"] = std::move(points);
  return detail::dump_json(top);
}

std::string verdict_json(const CalibrationVerdict& verdict, int point, int p) {
  json top{{"format_version", 1},
           {"point", point},
           {"p", p},
           {"ratio", verdict.ratio},
           {"calibrated", verdict.calibrated},
           {"tolerance", verdict.tolerance}};
  return detail::dump_json(top);
}

}  // namespace semical
