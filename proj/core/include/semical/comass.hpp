#pragma once

// Comass of 2-forms and their normalized powers, and calibrated-plane tests.

#include "semical/construction.hpp"

#include <cstdint>

namespace semical {

/// The 2p-form omega^p / p!.
class PowerForm {
 public:
  PowerForm(TwoForm base, int p);
  // A 2-form is its own first power.
  PowerForm(TwoForm base) : PowerForm(std::move(base), 1) {}  // NOLINT(google-explicit-constructor)

  const TwoForm& base() const { return base_; }
  int p() const { return p_; }
  int degree() const { return 2 * p_; }
  int dim() const { return base_.dim(); }

 private:
  TwoForm base_;
  int p_;
};

struct CalibrationVerdict {
  double ratio = 0.0;
  bool calibrated = false;
  double tolerance = 0.0;
};

struct ComassEstimate {
  enum class Mode { exact, sampled };
  double value = 0.0;
  Frame maximizer;
  long samples = 0;
  int restarts = 0;
  Mode mode = Mode::exact;
};

struct SearchOptions {
  long samples = 100000;
  int restarts = 20;
  std::uint64_t seed = 0;
};

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
/// Only the strict upper triangle is read.
double pfaffian(const Matrix& m);

/// comass = sqrt(lambda_max(-A^2)); the maximizer is the top pair (v, Av/|Av|).
ComassEstimate comass2_exact(const MetricTensor& g, const TwoForm& omega,
                             const Tolerances& tol = {});

/// (omega^p / p!)(f_1, ..., f_2p) = Pf[omega(f_i, f_j)].
double eval_power(const PowerForm& form, const Frame& f);

/// Random search over oriented 2p-planes followed by local ascent.
///
/// Samples uniformly distributed g-orthonormal frames, keeps the best
/// `restarts` of them, and climbs from each by rotating one frame vector
/// towards a random direction of the orthogonal complement (initial angle
/// 0.1 rad, halved after 20 consecutive rejections, stops below 1e-6 rad).
/// The result is a lower bound on the comass and is reproducible from seed.
ComassEstimate comass_bruteforce(const MetricTensor& g, const PowerForm& form,
                                 const SearchOptions& options = {});

/// Ratio of the form on the g-orthonormalized frame (orientation of the input
/// order) to the unit volume.
CalibrationVerdict test_calibrated(const MetricTensor& g, const PowerForm& form, const Frame& f,
                                   double tol = 1e-9);

/// g-orthonormal basis (v_1, A v_1, v_2, A v_2, ...) of the eigenspace of
/// -A^2 for eigenvalues within tau of 1. Empty when no eigenvalue reaches 1.
Frame calibrated_eigenspace(const PointConstruction& pc, const Endomorphism& a, double tau,
                            const MetricTensor& g);

/// max |omega(v, t)|, |omega(w, t)| over a g-orthonormal basis t of the
/// complement of the plane, where (v, w) is the orthonormalized frame.
double first_cousin_residual(const MetricTensor& g, const TwoForm& omega, const Frame& f);

}  // namespace semical
