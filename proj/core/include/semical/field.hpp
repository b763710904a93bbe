#pragma once

// Field-level orchestration: the pointwise construction over a sampled grid,
// frame propagation, verification and JSON reports.

#include "semical/calfield.hpp"
#include "semical/comass.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semical {

struct ProcessConfig {
  EpsilonPolicy epsilon;
  /// Align each V-perp frame to the previous included point's frame.
  bool frame_hints = true;
  Tolerances tol;
};

struct PointResult {
  int index = 0;
  Vector coords;
  bool gap_ok = true;
  std::vector<double> offending;
  std::vector<double> eigenvalues;
  /// Non-empty when the spectrum could not be paired at this point.
  std::string error;
  std::optional<PointConstruction> construction;

  bool included() const { return construction.has_value(); }
};

struct FrameEdge {
  int from = 0;
  int to = 0;
  /// Frobenius norm of tframe(to) - tframe(from); absent if the sizes differ.
  std::optional<double> deviation;
};

struct ConstructionField {
  double epsilon = 0.0;
  int dim = 0;
  /// Dimension of the input grid; differs from dim when it was lifted.
  int original_dim = 0;
  std::vector<PointResult> points;
  std::vector<FrameEdge> frame_continuity;

  bool lifted() const { return dim != original_dim; }
};

/// Runs the construction at every point. Odd-dimensional grids are lifted
/// pointwise. epsilon comes from point 0. Points whose spectrum violates the
/// gap are flagged and excluded.
///
/// Throws EpsilonError if the automatic policy finds no positive eigenvalue
/// at the base point, and GapViolation if a fixed epsilon is violated there.
ConstructionField process_field(const FieldGrid& grid, const ProcessConfig& config = {});

struct ContinuityEdge {
  int from = 0;
  int to = 0;
  double d_J = 0.0;
  double d_gJ = 0.0;
  double d_Omega = 0.0;
};

/// For consecutive included points, |X(next) - X(prev)| / (1 + |dx|) in the
/// Frobenius norm, for X = J, g_J, Omega.
std::vector<ContinuityEdge> finite_difference_continuity(const ConstructionField& cf);

struct VerifyConfig {
  std::vector<int> powers;
  long samples = 2000;
  int restarts = 4;
  std::uint64_t seed = 0;
  Tolerances tol;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// true: pass iff value <= threshold; false: pass iff value >= threshold.
  bool upper = true;
  bool pass = true;
};

struct PointVerification {
  int index = 0;
  bool included = false;
  std::vector<Check> checks;

  bool pass() const;
};

struct VerificationReport {
  std::vector<PointVerification> points;
  /// Largest value of every upper-bounded check across included points.
  std::vector<std::pair<std::string, double>> max_residuals;
  std::vector<int> gap_violations;
  std::vector<std::string> failed_checks;
  bool pass = true;
};

/// Checks every included point. Excluded points are listed in
/// gap_violations and do not by themselves fail the report.
VerificationReport verify_field(const ConstructionField& cf, const FieldGrid& grid,
                                const VerifyConfig& config = {});

/// JSON of a construction (sorted keys, 17 significant digits).
std::string build_report_json(const ConstructionField& cf);
/// JSON including the verification results.
std::string verify_report_json(const ConstructionField& cf, const VerificationReport& report);

struct ComassRow {
  int index = 0;
  int p = 1;
  /// Exact value, available for degree 2 only.
  std::optional<double> exact;
  double sampled = 0.0;
  long samples = 0;
  int restarts = 0;
};

/// Per-point comass of (omega^p / p!) with respect to g, on the input data.
/// Each point searches with seed derive_seed(options.seed, index).
std::vector<ComassRow> comass_table(const FieldGrid& grid, int p, const SearchOptions& options);

std::string comass_report_json(const std::vector<ComassRow>& rows);
std::string verdict_json(const CalibrationVerdict& verdict, int point, int p);

}  // namespace semical
