#pragma once

namespace semical {

/// Largest supported ambient dimension. All algorithms are dense O(n^3).
inline constexpr int kMaxDim = 16;

/// Numerical thresholds. Each is relative to the largest entry of the
/// matrix it is applied to.
struct Tolerances {
  double pd = 1e-10;            // smallest metric eigenvalue
  double ortho = 1e-10;         // orthonormality of frames
  double rank = 1e-10;          // linear independence in Gram-Schmidt
  double cluster = 1e-8;        // eigenvalue clustering, times lambda_max
  double zero = 1e-8;           // kernel detection, times lambda_max
};

}  // namespace semical
