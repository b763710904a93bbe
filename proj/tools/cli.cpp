#include "cli.hpp"

#include <CLI11.hpp>

#include "semical/demo.hpp"
#include "semical/field.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace semical::cli {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string epsilon = "auto";
  std::uint64_t seed = 0;
  std::vector<int> powers;
  long samples = 0;
  int restarts = 0;
  int point = 0;
  std::vector<std::string> vectors;
  double plane_tol = 1e-9;
  std::string demo;
  bool no_frame_hints = false;
  Tolerances tol;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.output + "'");
  f << text;
}

EpsilonPolicy parse_epsilon(const std::string& text) {
  if (text == "auto") return EpsilonPolicy::automatic();
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value) || value <= 0.0) {
    throw UsageError("--epsilon must be 'auto' or a positive number, got '" + text + "'");
  }
  return EpsilonPolicy::fixed(value);
}

// Accepts values separated by whitespace or commas, possibly split across
// several arguments.
std::vector<double> parse_reals(const std::vector<std::string>& parts) {
  std::vector<double> values;
  for (std::string part : parts) {
    for (char& c : part)
      if (c == ',') c = ' ';
    std::istringstream ss(part);
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      const char* end = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(tok.data(), end, v);
      if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw UsageError("--vectors: not a finite number: '" + tok + "'");
      }
      values.push_back(v);
    }
  }
  return values;
}

FieldGrid load(const Options& o) { return parse_calfield(read_file(o.input), o.tol); }

ProcessConfig process_config(const Options& o) {
  ProcessConfig c;
  c.epsilon = parse_epsilon(o.epsilon);
  c.frame_hints = !o.no_frame_hints;
  c.tol = o.tol;
  return c;
}

int cmd_build(const Options& o, std::ostream& out) {
  const ProcessConfig config = process_config(o);
  const FieldGrid grid = load(o);
  const ConstructionField cf = process_field(grid, config);
  emit(o, build_report_json(cf), out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const ProcessConfig config = process_config(o);
  const FieldGrid grid = load(o);
  const ConstructionField cf = process_field(grid, config);
  VerifyConfig vc;
  vc.powers = o.powers;
  vc.samples = o.samples > 0 ? o.samples : 2000;
  vc.restarts = o.restarts > 0 ? o.restarts : 4;
  vc.seed = o.seed;
  vc.tol = o.tol;
  const VerificationReport report = verify_field(cf, grid, vc);
  emit(o, verify_report_json(cf, report), out);
  for (const auto& f : report.failed_checks) err << "verify: failed " << f << "\n";
  if (!report.gap_violations.empty()) {
    err << "verify: " << report.gap_violations.size()
        << " point(s) excluded by the spectral gap\n";
  }
  return report.pass ? kOk : kVerificationFailed;
}

int cmd_comass(const Options& o, std::ostream& out) {
  const FieldGrid grid = load(o);
  const std::vector<int> powers = o.powers.empty() ? std::vector<int>{1} : o.powers;
  SearchOptions search;
  if (o.samples > 0) search.samples = o.samples;
  if (o.restarts > 0) search.restarts = o.restarts;
  search.seed = o.seed;
  std::vector<ComassRow> rows;
  for (int p : powers) {
    if (p < 1 || 2 * p > grid.dim) {
      throw UsageError("--power " + std::to_string(p) + " needs 1 <= p <= dim/2");
    }
    auto part = comass_table(grid, p, search);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  emit(o, comass_report_json(rows), out);
  return kOk;
}

int cmd_plane_test(const Options& o, std::ostream& out) {
  const FieldGrid grid = load(o);
  const auto it = std::find_if(grid.points.begin(), grid.points.end(),
                               [&](const FieldPoint& p) { return p.index == o.point; });
  if (it == grid.points.end()) throw UsageError("--point " + std::to_string(o.point) + " not in file");
  const std::vector<double> values = parse_reals(o.vectors);
  const auto n = static_cast<std::size_t>(grid.dim);
  if (values.empty() || values.size() % (2 * n) != 0) {
    throw UsageError("--vectors needs 2p x " + std::to_string(n) + " reals, got " +
                     std::to_string(values.size()));
  }
  const int p = static_cast<int>(values.size() / (2 * n));
  if (!o.powers.empty() && (o.powers.size() != 1 || o.powers.front() != p)) {
    throw UsageError("--power disagrees with the number of vectors");
  }
  if (2 * p > grid.dim) throw UsageError("--vectors: more than dim vectors");
  Matrix columns(grid.dim, 2 * p);
  for (int k = 0; k < 2 * p; ++k)
    for (int i = 0; i < grid.dim; ++i) columns(i, k) = values[k * n + i];
  const CalibrationVerdict v =
      test_calibrated(it->g, PowerForm(it->omega, p), Frame(columns), o.plane_tol);
  emit(o, verdict_json(v, o.point, p), out);
  return kOk;
}

int cmd_demo(const Options& o, std::ostream& out) {
  emit(o, demo_calfield(o.demo), out);
  return kOk;
}

void add_common(CLI::App* sub, Options& o, bool input = true) {
  if (input) sub->add_option("file", o.input, "CALFIELD input file")->required();
  sub->add_option("-o,--output", o.output, "Write the report here instead of stdout");
  sub->add_option("--tol-pd", o.tol.pd, "Relative positive-definiteness threshold");
  sub->add_option("--tol-ortho", o.tol.ortho, "Orthonormality tolerance");
  sub->add_option("--tol-rank", o.tol.rank, "Rank tolerance of Gram-Schmidt");
  sub->add_option("--tol-cluster", o.tol.cluster, "Relative eigenvalue clustering tolerance");
  sub->add_option("--tol-zero", o.tol.zero, "Relative kernel threshold");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-calibrations to compatible triples (Omega, J, g_J)", "semical"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Construct (Omega, J, g_J) at every point");
  add_common(build, o);
  build->add_option("--epsilon", o.epsilon, "Gap parameter: auto or a positive number");
  build->add_option("--seed", o.seed, "Random seed (accepted for symmetry with verify)");
  build->add_flag("--no-frame-hints", o.no_frame_hints, "Do not align frames across points");

  auto* verify = app.add_subcommand("verify", "Construct and check every per-point property");
  add_common(verify, o);
  verify->add_option("--epsilon", o.epsilon, "Gap parameter: auto or a positive number");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--power", o.powers, "Also check omega^p/p! (repeatable)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--samples", o.samples, "Comass samples per point (default 2000)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--restarts", o.restarts, "Comass ascent restarts (default 4)")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--no-frame-hints", o.no_frame_hints, "Do not align frames across points");

  auto* comass = app.add_subcommand("comass", "Per-point comass of omega^p/p!");
  add_common(comass, o);
  comass->add_option("--power", o.powers, "Degree p (repeatable, default 1)")
      ->check(CLI::PositiveNumber);
  comass->add_option("--samples", o.samples, "Random samples (default 100000)")
      ->check(CLI::PositiveNumber);
  comass->add_option("--restarts", o.restarts, "Ascent restarts (default 20)")
      ->check(CLI::PositiveNumber);
  comass->add_option("--seed", o.seed, "Random seed");

  auto* plane = app.add_subcommand("plane-test", "Test whether a 2p-plane is calibrated");
  add_common(plane, o);
  plane->add_option("--point", o.point, "Point index")->required();
  plane->add_option("--vectors", o.vectors, "2p vectors of n reals, row after row")
      ->required()
      ->allow_extra_args();
  plane->add_option("--power", o.powers, "Expected p (inferred from --vectors)");
  plane->add_option("--tol", o.plane_tol, "Tolerance on |ratio - 1|");

  auto* demo = app.add_subcommand("demo", "Write a built-in demo field in CALFIELD format");
  demo->add_option("--name", o.demo, "Demo name")
      ->required()
      ->check(CLI::IsMember(demo_names()));
  demo->add_option("-o,--output", o.output, "Write the file here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (build->parsed()) return cmd_build(o, out);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (comass->parsed()) return cmd_comass(o, out);
    if (plane->parsed()) return cmd_plane_test(o, out);
    return cmd_demo(o, out);
  } catch (const GapViolation& e) {
    err << "error: base point: " << e.what() << "\n";
    return kBaseGapViolation;
  } catch (const EpsilonError& e) {
    err << "error: " << e.what() << "\n";
    return kBaseGapViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace semical::cli
