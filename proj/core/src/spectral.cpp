#include "semical/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semical {

namespace {

// Chooses, among the projections r_j of the (g-orthonormal images of the)
// ambient basis vectors, the first whose norm is at least half the largest.
// Deterministic and insensitive to rounding-level ties.
Vector pivot(const std::vector<Vector>& residuals) {
  double best = 0.0;
  for (const auto& r : residuals) best = std::max(best, r.norm());
  for (const auto& r : residuals) {
    if (r.norm() >= 0.5 * best) return r / r.norm();
  }
  return residuals.front();
}

// Flips y so that the ambient vector x = L^{-T} y has its largest-magnitude
// component positive.
void fix_sign(Vector& y, const Matrix& chol) {
  const Vector x = chol.transpose().triangularView<Eigen::Upper>().solve(y);
  const double peak = x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= peak * (1.0 - 1e-9)) {
      if (x(i) < 0.0) y = -y;
      return;
    }
  }
}

void orthogonalize(Vector& y, const std::vector<Vector>& against) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : against) y -= u.dot(y) * u;
}

// Picks canonical orthonormal vectors, one at a time, from the subspace
// spanned by the orthonormal columns of u, avoiding those already chosen.
struct SubspaceSweep {
  const Matrix& chol;  // L, G = L L^T
  const Matrix& u;     // orthonormal basis of the subspace, g-orthonormal coords
  std::vector<Vector> chosen;

  Vector next() {
    const int n = static_cast<int>(chol.rows());
    std::vector<Vector> residuals;
    residuals.reserve(n);
    for (int j = 0; j < n; ++j) {
      const Vector c = chol.row(j).transpose();  // L^T e_j
      Vector r = u * (u.transpose() * c);
      orthogonalize(r, chosen);
      residuals.push_back(std::move(r));
    }
    Vector y = pivot(residuals);
    orthogonalize(y, chosen);
    y.normalize();
    fix_sign(y, chol);
    return y;
  }
};

Vector to_ambient(const Matrix& chol, const Vector& y) {
  return chol.transpose().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace

Frame PairedSpectrum::full_basis() const {
  std::vector<Vector> vs;
  for (const auto& p : pairs) {
    vs.push_back(p.v);
    vs.push_back(p.w);
  }
  for (int k = 0; k < kernel_basis.size(); ++k) vs.push_back(kernel_basis[k]);
  return Frame(Frame::from_vectors(vs).matrix(), true);
}

Endomorphism build_A(const MetricTensor& g, const TwoForm& omega) {
  require_same_dim(g.dim(), omega.dim(), "build_A");
  // g(Av, w) = (Av)^T G w = v^T W w for all v, w  =>  A^T G = W  =>  A = -G^{-1} W.
  return Endomorphism{-g.solve(omega.matrix())};
}

double skewness_residual(const Endomorphism& a, const MetricTensor& g) {
  require_same_dim(g.dim(), a.dim(), "skewness_residual");
  const Matrix& G = g.matrix();
  const Matrix sym = G * a.matrix + a.matrix.transpose() * G;
  const double scale = std::max(1e-300, max_abs(G) * max_abs(a.matrix));
  return max_abs(sym) / scale;
}

PairedSpectrum paired_spectrum(const Endomorphism& a, const MetricTensor& g,
                               const Tolerances& tol) {
  require_same_dim(g.dim(), a.dim(), "paired_spectrum");
  const int n = g.dim();
  if (max_abs(a.matrix) > 0.0 && skewness_residual(a, g) > 1e-8) {
    throw NotSkewAdjoint("paired_spectrum: endomorphism is not g-skew-adjoint");
  }

  // In coordinates y = L^T x the operator becomes Lt A L^{-T}, which is
  // skew-symmetric; -A^2 becomes its Gram matrix.
  const Matrix& chol = g.cholesky_lower();
  const Matrix lt_a = chol.transpose() * a.matrix;
  Matrix a_hat = chol.triangularView<Eigen::Lower>().solve(lt_a.transpose()).transpose();
  a_hat = 0.5 * (a_hat - a_hat.transpose()).eval();
  const Matrix neg_sq = a_hat.transpose() * a_hat;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(neg_sq);
  if (eig.info() != Eigen::Success) throw Error("paired_spectrum: eigensolver failed");

  PairedSpectrum out;
  Matrix basis(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues.push_back(eig.eigenvalues()(n - 1 - k));
    basis.col(k) = eig.eigenvectors().col(n - 1 - k);
  }

  const double lambda_max = std::max(0.0, out.eigenvalues.front());
  const double zero_threshold = tol.zero * lambda_max;
  const double cluster_threshold = tol.cluster * lambda_max;

  int positive = 0;
  while (positive < n && lambda_max > 0.0 && out.eigenvalues[positive] > zero_threshold) {
    ++positive;
  }

  // Every new vector is also orthogonalized against all earlier clusters.
  // Without this, rounding in w = A v / sqrt(lambda) for a small lambda
  // leaks into J through the division by sqrt(lambda).
  std::vector<Vector> chosen;
  int begin = 0;
  while (begin < positive) {
    int end = begin + 1;
    while (end < positive &&
           out.eigenvalues[end - 1] - out.eigenvalues[end] <= cluster_threshold) {
      ++end;
    }
    const int size = end - begin;
    if (size % 2 != 0) {
      throw PairingError("paired_spectrum: eigenvalue cluster [" +
                             std::to_string(out.eigenvalues[end - 1]) + ", " +
                             std::to_string(out.eigenvalues[begin]) + "] has odd multiplicity " +
                             std::to_string(size),
                         out.eigenvalues[end - 1], out.eigenvalues[begin]);
    }
    const Matrix u = basis.middleCols(begin, size);
    SubspaceSweep sweep{chol, u, std::move(chosen)};
    for (int k = 0; k < size / 2; ++k) {
      const Vector v = sweep.next();
      sweep.chosen.push_back(v);
      Vector w = a_hat * v;
      const double lambda = w.squaredNorm();
      orthogonalize(w, sweep.chosen);
      w.normalize();
      sweep.chosen.push_back(w);
      out.pairs.push_back(EigenPair{lambda, to_ambient(chol, v), to_ambient(chol, w)});
    }
    chosen = std::move(sweep.chosen);
    begin = end;
  }

  const int kernel_dim = n - positive;
  Matrix kernel(n, kernel_dim);
  if (kernel_dim > 0) {
    const Matrix u = basis.rightCols(kernel_dim);
    SubspaceSweep sweep{chol, u, std::move(chosen)};
    for (int k = 0; k < kernel_dim; ++k) {
      const Vector y = sweep.next();
      sweep.chosen.push_back(y);
      kernel.col(k) = to_ambient(chol, y);
    }
  }
  out.kernel_basis = Frame(std::move(kernel), true);
  return out;
}

SpaceSplit classify_bands(const PairedSpectrum& s, double epsilon, double band_slack) {
  if (!(epsilon > 0.0)) throw Error("split_spaces: epsilon must be positive");
  SpaceSplit split;
  split.epsilon = epsilon;
  std::vector<Vector> v_vecs;
  std::vector<Vector> perp_vecs;
  for (const auto& p : s.pairs) {
    if (p.lambda >= epsilon / 2.0 - band_slack) {
      v_vecs.push_back(p.v);
      v_vecs.push_back(p.w);
      split.v_eigenvalues.push_back(p.lambda);
    } else if (p.lambda <= epsilon / 4.0 + band_slack) {
      perp_vecs.push_back(p.v);
      perp_vecs.push_back(p.w);
      split.vperp_eigenvalues.push_back(p.lambda);
    } else {
      split.offending.push_back(p.lambda);
    }
  }
  for (int k = 0; k < s.kernel_basis.size(); ++k) perp_vecs.push_back(s.kernel_basis[k]);

  const int n = s.dim();
  split.v_basis = v_vecs.empty() ? Frame(Matrix(n, 0), true)
                                 : Frame(Frame::from_vectors(v_vecs).matrix(), true);
  split.vperp_basis = perp_vecs.empty() ? Frame(Matrix(n, 0), true)
                                        : Frame(Frame::from_vectors(perp_vecs).matrix(), true);
  split.m = static_cast<int>(split.v_eigenvalues.size());
  split.gap_ok = split.offending.empty();
  return split;
}

SpaceSplit split_spaces(const PairedSpectrum& s, double epsilon, double band_slack) {
  SpaceSplit split = classify_bands(s, epsilon, band_slack);
  if (!split.gap_ok) {
    std::string list;
    for (double x : split.offending) list += (list.empty() ? "" : ", ") + std::to_string(x);
    throw GapViolation("eigenvalue(s) " + list + " inside the forbidden band (" +
                           std::to_string(epsilon / 4.0) + ", " + std::to_string(epsilon / 2.0) +
                           ")",
                       epsilon, split.offending);
  }
  return split;
}

double auto_epsilon(const PairedSpectrum& s) {
  return s.pairs.empty() ? 0.0 : s.pairs.back().lambda;
}

}  // namespace semical
