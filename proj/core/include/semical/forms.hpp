#pragma once

// Dense multilinear algebra on R^n: metrics, antisymmetric 2-forms,
// frames, covectors.

#include <Eigen/Dense>

#include "semical/errors.hpp"
#include "semical/tolerances.hpp"

#include <span>
#include <vector>

namespace semical {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric positive definite metric g at a point.
///
/// Only the upper triangle (including the diagonal) of the input is read;
/// the lower triangle is mirrored from it, so the stored matrix is exactly
/// symmetric. Positive definiteness is checked on construction.
class MetricTensor {
 public:
  explicit MetricTensor(const Matrix& entries, const Tolerances& tol = {});

  static MetricTensor identity(int n);
  static MetricTensor diagonal(std::span<const double> diag);
  /// Row-major upper triangle incl. diagonal, n(n+1)/2 values.
  static MetricTensor from_upper(int n, std::span<const double> upper,
                                 const Tolerances& tol = {});

  int dim() const { return static_cast<int>(g_.rows()); }
  const Matrix& matrix() const { return g_; }
  double operator()(int i, int j) const { return g_(i, j); }

  double inner(const Vector& v, const Vector& w) const;
  double norm(const Vector& v) const;

  /// Lower Cholesky factor L with G = L L^T. y = L^T x maps to
  /// g-orthonormal coordinates.
  const Matrix& cholesky_lower() const { return chol_; }
  /// Solves G x = b.
  Matrix solve(const Matrix& b) const;
  double min_eigenvalue() const { return min_eig_; }

 private:
  Matrix g_;
  Matrix chol_;
  double min_eig_ = 0.0;
};

/// Antisymmetric 2-form, omega(v, w) = v^T W w.
///
/// Only the strict upper triangle of the input is read; the lower triangle
/// is its negative, so antisymmetry holds exactly.
class TwoForm {
 public:
  explicit TwoForm(const Matrix& entries);

  static TwoForm zero(int n);
  /// coefficient * dx^i ^ dx^j, 0-based indices, i != j.
  static TwoForm elementary(int n, int i, int j, double coefficient = 1.0);
  /// Row-major strict upper triangle, n(n-1)/2 values.
  static TwoForm from_upper(int n, std::span<const double> upper);

  int dim() const { return static_cast<int>(w_.rows()); }
  const Matrix& matrix() const { return w_; }
  double operator()(int i, int j) const { return w_(i, j); }

  TwoForm operator+(const TwoForm& other) const;
  TwoForm scaled(double factor) const;

 private:
  Matrix w_;
};

/// Ordered list of k vectors in R^n, stored as the columns of an n x k matrix.
class Frame {
 public:
  Frame() = default;
  explicit Frame(int n) : vectors_(n, 0) {}
  explicit Frame(Matrix columns, bool orthonormal = false)
      : vectors_(std::move(columns)), orthonormal_(orthonormal) {}
  static Frame from_vectors(const std::vector<Vector>& vectors);

  int dim() const { return static_cast<int>(vectors_.rows()); }
  int size() const { return static_cast<int>(vectors_.cols()); }
  bool empty() const { return vectors_.cols() == 0; }
  Vector operator[](int k) const { return vectors_.col(k); }
  const Matrix& matrix() const { return vectors_; }
  bool flagged_orthonormal() const { return orthonormal_; }

  /// Max-abs deviation of the Gram matrix from the identity.
  double orthonormality_error(const MetricTensor& g) const;

 private:
  Matrix vectors_;
  bool orthonormal_ = false;
};

struct Covector {
  Vector components;

  int dim() const { return static_cast<int>(components.size()); }
  double operator()(const Vector& v) const;
};

/// Returns v^T W w.
double eval_two_form(const TwoForm& omega, const Vector& v, const Vector& w);

/// g-area of the parallelogram spanned by v and w.
double plane_area(const MetricTensor& g, const Vector& v, const Vector& w,
                  const Tolerances& tol = {});

/// Modified Gram-Schmidt with one reorthogonalization pass. The first output
/// vector is parallel to the first input vector.
Frame gram_schmidt(const MetricTensor& g, const Frame& f, const Tolerances& tol = {});

/// Covector with components G v.
Covector musical_dual(const MetricTensor& g, const Vector& v);

/// (a ^ b)(v, w) = a(v) b(w) - a(w) b(v).
TwoForm wedge(const Covector& a, const Covector& b);

/// Largest |M_ij|.
double max_abs(const Matrix& m);

/// g-orthonormal basis of the g-orthogonal complement of span(f), found by
/// sweeping the standard basis vectors in order.
Frame orthogonal_complement(const MetricTensor& g, const Frame& f);

void require_same_dim(int a, int b, const char* what);

}  // namespace semical
