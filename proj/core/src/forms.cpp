#include "semical/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semical {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

namespace {

void check_dim(int n, const char* what) {
  if (n < 1 || n > kMaxDim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(n) +
                         " outside [1, " + std::to_string(kMaxDim) + "]");
  }
}

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + ": non-finite entry");
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// MetricTensor

MetricTensor::MetricTensor(const Matrix& entries, const Tolerances& tol) {
  if (entries.rows() != entries.cols()) throw DimensionError("metric: matrix not square");
  const int n = static_cast<int>(entries.rows());
  check_dim(n, "metric");
  check_finite(entries, "metric");

  g_ = entries.triangularView<Eigen::Upper>();
  g_.triangularView<Eigen::StrictlyLower>() = g_.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(g_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues()(0);
  const double scale = max_abs(g_);
  if (!(min_eig_ > tol.pd * scale) || scale == 0.0) {
    throw NotPositiveDefinite("metric not positive definite (smallest eigenvalue " +
                              std::to_string(min_eig_) + ")");
  }
  Eigen::LLT<Matrix> llt(g_);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("metric: Cholesky failed");
  chol_ = llt.matrixL();
}

MetricTensor MetricTensor::identity(int n) {
  check_dim(n, "metric");
  return MetricTensor(Matrix::Identity(n, n));
}

MetricTensor MetricTensor::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  check_dim(n, "metric");
  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = diag[i];
  return MetricTensor(g);
}

MetricTensor MetricTensor::from_upper(int n, std::span<const double> upper,
                                      const Tolerances& tol) {
  check_dim(n, "metric");
  if (static_cast<int>(upper.size()) != n * (n + 1) / 2) {
    throw DimensionError("metric: expected " + std::to_string(n * (n + 1) / 2) +
                         " upper-triangle entries, got " + std::to_string(upper.size()));
  }
  Matrix g = Matrix::Zero(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = upper[k++];
  return MetricTensor(g, tol);
}

double MetricTensor::inner(const Vector& v, const Vector& w) const {
  require_same_dim(dim(), static_cast<int>(v.size()), "metric inner");
  require_same_dim(dim(), static_cast<int>(w.size()), "metric inner");
  return v.dot(g_ * w);
}

double MetricTensor::norm(const Vector& v) const { return std::sqrt(std::max(0.0, inner(v, v))); }

Matrix MetricTensor::solve(const Matrix& b) const {
  const auto lower = chol_.triangularView<Eigen::Lower>();
  Matrix y = lower.solve(b);
  return lower.transpose().solve(y);
}

// ---------------------------------------------------------------------------
// TwoForm

TwoForm::TwoForm(const Matrix& entries) {
  if (entries.rows() != entries.cols()) throw DimensionError("two-form: matrix not square");
  const int n = static_cast<int>(entries.rows());
  check_dim(n, "two-form");
  check_finite(entries, "two-form");
  w_ = entries.triangularView<Eigen::StrictlyUpper>();
  w_.triangularView<Eigen::StrictlyLower>() = -w_.transpose();
}

TwoForm TwoForm::zero(int n) {
  check_dim(n, "two-form");
  return TwoForm(Matrix::Zero(n, n));
}

TwoForm TwoForm::elementary(int n, int i, int j, double coefficient) {
  check_dim(n, "two-form");
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw DimensionError("two-form: invalid elementary index pair");
  }
  Matrix w = Matrix::Zero(n, n);
  if (i < j) {
    w(i, j) = coefficient;
  } else {
    w(j, i) = -coefficient;
  }
  return TwoForm(w);
}

TwoForm TwoForm::from_upper(int n, std::span<const double> upper) {
  check_dim(n, "two-form");
  if (static_cast<int>(upper.size()) != n * (n - 1) / 2) {
    throw DimensionError("two-form: expected " + std::to_string(n * (n - 1) / 2) +
                         " strict-upper entries, got " + std::to_string(upper.size()));
  }
  Matrix w = Matrix::Zero(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = upper[k++];
  return TwoForm(w);
}

TwoForm TwoForm::operator+(const TwoForm& other) const {
  require_same_dim(dim(), other.dim(), "two-form sum");
  return TwoForm(Matrix(w_ + other.w_));
}

TwoForm TwoForm::scaled(double factor) const { return TwoForm(Matrix(factor * w_)); }

// ---------------------------------------------------------------------------
// Frame, Covector

Frame Frame::from_vectors(const std::vector<Vector>& vectors) {
  if (vectors.empty()) return Frame();
  const auto n = vectors.front().size();
  Matrix m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != n) throw DimensionError("frame: vectors of unequal length");
    m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return Frame(std::move(m));
}

double Frame::orthonormality_error(const MetricTensor& g) const {
  if (empty()) return 0.0;
  require_same_dim(g.dim(), dim(), "frame orthonormality");
  const Matrix gram = vectors_.transpose() * g.matrix() * vectors_;
  return max_abs(gram - Matrix::Identity(size(), size()));
}

double Covector::operator()(const Vector& v) const {
  require_same_dim(dim(), static_cast<int>(v.size()), "covector");
  return components.dot(v);
}

// ---------------------------------------------------------------------------
// Operations

double eval_two_form(const TwoForm& omega, const Vector& v, const Vector& w) {
  require_same_dim(omega.dim(), static_cast<int>(v.size()), "eval_two_form");
  require_same_dim(omega.dim(), static_cast<int>(w.size()), "eval_two_form");
  return v.dot(omega.matrix() * w);
}

double plane_area(const MetricTensor& g, const Vector& v, const Vector& w,
                  const Tolerances& tol) {
  const double vv = g.inner(v, v);
  const double ww = g.inner(w, w);
  const double vw = g.inner(v, w);
  const double radicand = vv * ww - vw * vw;
  const double scale = vv * ww;
  if (radicand < -tol.pd * std::max(scale, 1.0)) {
    throw NotPositiveDefinite("plane_area: negative Gram determinant");
  }
  if (radicand <= tol.rank * tol.rank * scale) return 0.0;
  return std::sqrt(radicand);
}

Frame gram_schmidt(const MetricTensor& g, const Frame& f, const Tolerances& tol) {
  if (f.empty()) return Frame(Matrix(g.dim(), 0), true);
  require_same_dim(g.dim(), f.dim(), "gram_schmidt");
  const Matrix& G = g.matrix();
  Matrix out = f.matrix();
  for (int k = 0; k < out.cols(); ++k) {
    const double original = g.norm(out.col(k));
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const double c = out.col(j).dot(G * out.col(k));
        out.col(k) -= c * out.col(j);
      }
    }
    const double norm = g.norm(out.col(k));
    if (!(norm > tol.rank * original) || original == 0.0) {
      throw RankDeficient("gram_schmidt: vector " + std::to_string(k) +
                          " is linearly dependent on its predecessors");
    }
    out.col(k) /= norm;
  }
  return Frame(std::move(out), true);
}

Covector musical_dual(const MetricTensor& g, const Vector& v) {
  require_same_dim(g.dim(), static_cast<int>(v.size()), "musical_dual");
  return Covector{g.matrix() * v};
}

TwoForm wedge(const Covector& a, const Covector& b) {
  require_same_dim(a.dim(), b.dim(), "wedge");
  return TwoForm(Matrix(a.components * b.components.transpose() -
                        b.components * a.components.transpose()));
}

Frame orthogonal_complement(const MetricTensor& g, const Frame& f) {
  const int n = g.dim();
  Matrix basis = f.empty() ? Matrix(n, 0) : gram_schmidt(g, f).matrix();
  const int target = n - static_cast<int>(basis.cols());
  const Matrix& G = g.matrix();
  Matrix chosen(n, 0);
  auto residual = [&](int j) {
    Vector r = Vector::Unit(n, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < basis.cols(); ++c) r -= basis.col(c).dot(G * r) * basis.col(c);
      for (int c = 0; c < chosen.cols(); ++c) r -= chosen.col(c).dot(G * r) * chosen.col(c);
    }
    return r;
  };
  while (chosen.cols() < target) {
    std::vector<Vector> res(n);
    std::vector<double> norms(n);
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      res[j] = residual(j);
      norms[j] = g.norm(res[j]);
      best = std::max(best, norms[j]);
    }
    int pick = 0;
    while (norms[pick] < 0.5 * best) ++pick;
    chosen.conservativeResize(n, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = res[pick] / norms[pick];
  }
  return Frame(std::move(chosen), true);
}

}  // namespace semical
