#pragma once

// The g-dual endomorphism A of a 2-form, the paired spectrum of -A^2 and the
// V / V-perp split across the spectral gap.

#include "semical/forms.hpp"

#include <vector>

namespace semical {

/// Linear map of R^n, stored as its matrix in the ambient basis.
struct Endomorphism {
  Matrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  Vector operator()(const Vector& v) const { return matrix * v; }
};

/// One positive eigenvalue of -A^2 together with its g-orthonormal pair
/// (v, A v / sqrt(lambda)).
struct EigenPair {
  double lambda = 0.0;
  Vector v;
  Vector w;
};

struct PairedSpectrum {
  /// All n eigenvalues of -A^2, descending (pairs appear twice).
  std::vector<double> eigenvalues;
  /// Positive eigenvalues, one entry per pair, descending.
  std::vector<EigenPair> pairs;
  /// g-orthonormal basis of ker A.
  Frame kernel_basis;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double lambda_max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  /// Union of all pair vectors followed by the kernel, as one frame.
  Frame full_basis() const;
};

struct SpaceSplit {
  Frame v_basis;                       // v_1, w_1, ..., v_m, w_m
  Frame vperp_basis;                   // small pairs, then the kernel
  std::vector<double> v_eigenvalues;   // one per V pair
  std::vector<double> vperp_eigenvalues;  // one per V-perp pair (kernel excluded)
  std::vector<double> offending;       // eigenvalues inside (eps/4, eps/2)
  int m = 0;
  double epsilon = 0.0;
  bool gap_ok = true;
};

/// A with omega(v, w) = g(A v, w), i.e. A = -G^{-1} W.
Endomorphism build_A(const MetricTensor& g, const TwoForm& omega);

/// max |g(Av, w) + g(v, Aw)| over basis pairs, relative to |G| |A|.
double skewness_residual(const Endomorphism& a, const MetricTensor& g);

/// Eigen-decomposes -A^2 in g-orthonormal coordinates and pairs the
/// eigenvectors. Inside every cluster of nearly equal eigenvalues the paired
/// basis is chosen canonically by sweeping the ambient standard basis, with
/// each v sign-fixed so its largest-magnitude component is positive.
///
/// Throws NotSkewAdjoint if A is not g-skew-adjoint and PairingError if a
/// positive cluster has odd multiplicity.
PairedSpectrum paired_spectrum(const Endomorphism& a, const MetricTensor& g,
                               const Tolerances& tol = {});

/// Places each pair into V (lambda >= eps/2) or V-perp (lambda <= eps/4);
/// the kernel always goes to V-perp. Never throws on a gap violation, which
/// is reported through gap_ok and offending instead.
SpaceSplit classify_bands(const PairedSpectrum& s, double epsilon, double band_slack = 0.0);

/// classify_bands, throwing GapViolation if any eigenvalue lies in
/// (eps/4, eps/2). band_slack widens both bands by an absolute amount.
SpaceSplit split_spaces(const PairedSpectrum& s, double epsilon, double band_slack = 0.0);

/// Smallest pair eigenvalue, or 0 if -A^2 has no eigenvalue above the
/// kernel threshold.
double auto_epsilon(const PairedSpectrum& s);

}  // namespace semical
