#pragma once

// Pointwise construction of the compatible triple (Omega, J, g_J) from a
// 2-form omega and a metric g.

#include "semical/spectral.hpp"

#include <map>
#include <optional>
#include <string>

namespace semical {

/// How the gap parameter epsilon is chosen.
struct EpsilonPolicy {
  enum class Mode { automatic, fixed };
  Mode mode = Mode::automatic;
  double value = 0.0;

  static EpsilonPolicy automatic() { return {}; }
  static EpsilonPolicy fixed(double eps) { return {Mode::fixed, eps}; }
};

struct PointConstruction {
  Endomorphism A;
  PairedSpectrum spectrum;
  SpaceSplit split;
  /// Q on V, in the paired basis of split.v_basis (2m x 2m, blocks sqrt(lambda) I_2).
  Endomorphism Q;
  Endomorphism J;
  MetricTensor gJ = MetricTensor::identity(1);
  TwoForm omega1 = TwoForm::zero(1);
  TwoForm omega2 = TwoForm::zero(1);
  TwoForm Omega = TwoForm::zero(1);
  /// The frame t_1, ..., t_{2n-2m} of V-perp used for omega2 and J.
  Frame tframe;
  /// Named residuals; every entry is "smaller is better".
  std::map<std::string, double> residuals;
  double gj_min_eigenvalue = 0.0;

  int dim() const { return J.dim(); }
  int rank() const { return split.m; }
};

struct OddLift {
  int original_dim = 0;
  MetricTensor g = MetricTensor::identity(1);
  TwoForm omega = TwoForm::zero(1);
};

/// Matrix of A restricted to V, in the g-orthonormal basis split.v_basis.
Matrix restrict_to_V(const Endomorphism& a, const SpaceSplit& split, const MetricTensor& g);

/// Square root of -A^2 on V, blockwise sqrt(lambda_i) I_2 in the paired basis.
Endomorphism sqrt_on_V(const Endomorphism& a, const SpaceSplit& split, const MetricTensor& g);

/// Default frame of V-perp: Gram-Schmidt of split.vperp_basis in spectral order.
Frame default_tframe(const SpaceSplit& split, const MetricTensor& g);

/// Rotates the current V-perp frame towards hint by the orthogonal polar factor
/// of their overlap matrix, then re-orthonormalizes. Returns current unchanged
/// when the sizes differ.
Frame align_tframe(const Frame& current, const Frame& hint, const MetricTensor& g);

/// J = Q^{-1} A on V, and J t_{2k-1} = t_{2k}, J t_{2k} = -t_{2k-1} on V-perp.
Endomorphism build_J(const Endomorphism& a, const Endomorphism& q, const SpaceSplit& split,
                     const MetricTensor& g, const Frame& tframe);

/// g_J(v, w) = omega(v, J w) on V x V, 0 across, g on V-perp x V-perp.
MetricTensor build_gJ(const TwoForm& omega, const Endomorphism& j, const SpaceSplit& split,
                      const MetricTensor& g, const Tolerances& tol = {});

struct OmegaParts {
  TwoForm omega1;
  TwoForm omega2;
  TwoForm Omega;
};

/// omega1 = omega(Pi ., Pi .), omega2 = sum t_{2k-1}* ^ t_{2k}* (g_J duality),
/// Omega = omega1 + omega2.
OmegaParts assemble_Omega(const TwoForm& omega, const SpaceSplit& split, const MetricTensor& gJ,
                          const Frame& tframe, const Tolerances& tol = {});

/// Completes a construction given the spectral data and a chosen split.
/// tframe_hint, when present, is aligned to rather than used verbatim.
PointConstruction construct_from_split(const MetricTensor& g, const TwoForm& omega,
                                       Endomorphism a, PairedSpectrum spectrum, SpaceSplit split,
                                       const std::optional<Frame>& tframe_hint,
                                       const Tolerances& tol = {});

/// Full pointwise construction. Requires even dimension (see lift_odd).
/// Throws GapViolation if a fixed epsilon puts an eigenvalue in the
/// forbidden band. With the automatic policy and omega = 0 the result has
/// m = 0 and Omega built from the V-perp frame alone (epsilon reported as 0).
PointConstruction construct_point(const MetricTensor& g, const TwoForm& omega,
                                  const EpsilonPolicy& policy = {},
                                  const std::optional<Frame>& tframe_hint = std::nullopt,
                                  const Tolerances& tol = {});

/// Embeds odd-dimensional data in R^{n+1}: g gains a unit diagonal entry,
/// omega a zero row and column.
OddLift lift_odd(const MetricTensor& g, const TwoForm& omega);

/// Recomputes the residual table of a finished construction against (g, omega).
std::map<std::string, double> construction_residuals(const PointConstruction& pc,
                                                     const MetricTensor& g);

}  // namespace semical
