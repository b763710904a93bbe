#pragma once

// CALFIELD v1: plain-text sampled (g, omega) fields.
//
//   CALFIELD 1
//   DIM n                       2 <= n <= 16
//   POINTS N                    N >= 1
//   then N blocks of
//   P idx
//   X x1 ... xn                 coordinates
//   G g11 g12 ... g1n g22 ... gnn      upper triangle incl. diagonal, row-major
//   W w12 w13 ... w1n w23 ... w(n-1)n  strict upper triangle, row-major
//
// Tokens are whitespace separated and '#' starts a comment that runs to the
// end of the line, so a record may wrap across lines.

#include "semical/forms.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace semical {

struct FieldPoint {
  int index = 0;
  Vector coords;
  MetricTensor g = MetricTensor::identity(1);
  TwoForm omega = TwoForm::zero(1);
};

/// Points sorted by index; index 0 is the base point.
struct FieldGrid {
  int dim = 0;
  std::vector<FieldPoint> points;
};

/// Throws ParseError (with a 1-based line number) on malformed input,
/// count mismatches, non-finite numbers, duplicate or missing indices and
/// metrics that are not positive definite.
FieldGrid parse_calfield(std::string_view text, const Tolerances& tol = {});

/// Writes a grid in CALFIELD v1. Each line of `header_comment` is emitted as
/// a '#' comment before the header. Numbers use 17 significant digits.
std::string write_calfield(const FieldGrid& grid, std::string_view header_comment = {});

}  // namespace semical
