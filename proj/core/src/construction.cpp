#include "semical/construction.hpp"

#include <cmath>
#include <limits>

namespace semical {

namespace {

Matrix stack(const Frame& a, const Frame& b) {
  Matrix out(a.dim(), a.size() + b.size());
  if (a.size() > 0) out.leftCols(a.size()) = a.matrix();
  if (b.size() > 0) out.rightCols(b.size()) = b.matrix();
  return out;
}

double band_slack(const PairedSpectrum& s, const Tolerances& tol) {
  return tol.cluster * s.lambda_max();
}

}  // namespace

Matrix restrict_to_V(const Endomorphism& a, const SpaceSplit& split, const MetricTensor& g) {
  const Matrix& b = split.v_basis.matrix();
  return b.transpose() * g.matrix() * a.matrix * b;
}

Endomorphism sqrt_on_V(const Endomorphism& a, const SpaceSplit& split, const MetricTensor& g) {
  require_same_dim(g.dim(), a.dim(), "sqrt_on_V");
  if (!split.gap_ok) throw ConstructionError("sqrt_on_V: split has a gap violation");
  const int m = split.m;
  Matrix q = Matrix::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double lambda = split.v_eigenvalues[i];
    if (!(lambda > 0.0)) {
      throw ConstructionError("sqrt_on_V: non-positive eigenvalue inside V");
    }
    q(2 * i, 2 * i) = std::sqrt(lambda);
    q(2 * i + 1, 2 * i + 1) = std::sqrt(lambda);
  }
  return Endomorphism{std::move(q)};
}

Frame default_tframe(const SpaceSplit& split, const MetricTensor& g) {
  return gram_schmidt(g, split.vperp_basis);
}

Frame align_tframe(const Frame& current, const Frame& hint, const MetricTensor& g) {
  if (current.size() != hint.size() || current.dim() != hint.dim() || current.empty()) {
    return current;
  }
  // Maximize trace(R^T T^T G H) over orthogonal R: R = U V^T from the SVD of
  // the overlap T^T G H.
  const Matrix overlap = current.matrix().transpose() * g.matrix() * hint.matrix();
  Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix rotation = svd.matrixU() * svd.matrixV().transpose();
  return gram_schmidt(g, Frame(Matrix(current.matrix() * rotation)));
}

Endomorphism build_J(const Endomorphism& a, const Endomorphism& q, const SpaceSplit& split,
                     const MetricTensor& g, const Frame& tframe) {
  require_same_dim(g.dim(), a.dim(), "build_J");
  if (tframe.size() % 2 != 0) {
    throw ConstructionError("build_J: V-perp frame has odd length");
  }
  const int n = g.dim();
  const Matrix& G = g.matrix();
  Matrix j = Matrix::Zero(n, n);

  if (split.m > 0) {
    const Matrix& b = split.v_basis.matrix();
    const Matrix a_v = restrict_to_V(a, split, g);
    const Matrix j_v = q.matrix.diagonal().cwiseInverse().asDiagonal() * a_v;
    j += b * j_v * b.transpose() * G;
  }
  for (int k = 0; k + 1 < tframe.size(); k += 2) {
    const Vector t1 = tframe[k];
    const Vector t2 = tframe[k + 1];
    j += (t2 * t1.transpose() - t1 * t2.transpose()) * G;
  }
  return Endomorphism{std::move(j)};
}

MetricTensor build_gJ(const TwoForm& omega, const Endomorphism& j, const SpaceSplit& split,
                      const MetricTensor& g, const Tolerances& tol) {
  require_same_dim(g.dim(), omega.dim(), "build_gJ");
  const int n = g.dim();
  const int v_dim = split.v_basis.size();
  const Matrix basis = stack(split.v_basis, split.vperp_basis);
  if (basis.cols() != n) throw ConstructionError("build_gJ: split does not span R^n");

  // Block matrix of g_J in the g-orthonormal basis (V, V-perp).
  Matrix blocks = Matrix::Identity(n, n);
  if (v_dim > 0) {
    const Matrix& bv = split.v_basis.matrix();
    blocks.topLeftCorner(v_dim, v_dim) = bv.transpose() * omega.matrix() * j.matrix * bv;
    blocks.topRightCorner(v_dim, n - v_dim).setZero();
    blocks.bottomLeftCorner(n - v_dim, v_dim).setZero();
  }
  // basis^{-1} = basis^T G because basis is g-orthonormal.
  const Matrix coframe = basis.transpose() * g.matrix();
  const Matrix gj = coframe.transpose() * blocks * coframe;
  try {
    return MetricTensor(gj, tol);
  } catch (const NotPositiveDefinite& e) {
    throw ConstructionError(std::string("build_gJ: result is not positive definite: ") +
                            e.what());
  }
}

OmegaParts assemble_Omega(const TwoForm& omega, const SpaceSplit& split, const MetricTensor& gJ,
                          const Frame& tframe, const Tolerances& tol) {
  require_same_dim(gJ.dim(), omega.dim(), "assemble_Omega");
  const int n = gJ.dim();
  if (tframe.size() != split.vperp_basis.size()) {
    throw ConstructionError("assemble_Omega: frame size differs from dim V-perp");
  }
  if (tframe.orthonormality_error(gJ) > tol.ortho * std::max(1.0, max_abs(gJ.matrix())) *
                                            static_cast<double>(n)) {
    throw ConstructionError("assemble_Omega: V-perp frame is not gJ-orthonormal");
  }

  Matrix projector = Matrix::Zero(n, n);
  if (split.v_basis.size() > 0) {
    // V-perp is the g_J-orthogonal complement of V, so the g_J-orthogonal
    // projection is the projection along V-perp.
    const Matrix& bv = split.v_basis.matrix();
    projector =bv * (bv.transpose() * gJ.matrix() * bv).inverse() * bv.transpose() *
                gJ.matrix();
  }
  TwoForm omega1(Matrix(projector.transpose() * omega.matrix() * projector));

  TwoForm omega2 = TwoForm::zero(n);
  for (int k = 0; k + 1 < tframe.size(); k += 2) {
    omega2 = omega2 + wedge(musical_dual(gJ, tframe[k]), musical_dual(gJ, tframe[k + 1]));
  }
  TwoForm big = omega1 + omega2;
  return OmegaParts{std::move(omega1), std::move(omega2), std::move(big)};
}

std::map<std::string, double> construction_residuals(const PointConstruction& pc,
                                                     const MetricTensor& g) {
  const int n = pc.dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& j = pc.J.matrix;
  const Matrix& w = pc.Omega.matrix();
  std::map<std::string, double> r;
  r["j_squared"] = max_abs(j * j + id);
  r["compatibility"] = max_abs(pc.gJ.matrix() - w * j);
  r["omega_j_invariance"] = max_abs(j.transpose() * w * j - w);
  r["skewness"] = max_abs(pc.A.matrix) > 0.0 ? skewness_residual(pc.A, g) : 0.0;
  if (pc.split.m > 0) {
    const Matrix a_v = restrict_to_V(pc.A, pc.split, g);
    const Matrix& q = pc.Q.matrix;
    r["commutation"] = max_abs(q * a_v - a_v * q);
    r["q_squared"] = max_abs(q * q + a_v * a_v);
  } else {
    r["commutation"] = 0.0;
    r["q_squared"] = 0.0;
  }
  r["tframe_orthonormality"] = pc.tframe.orthonormality_error(pc.gJ);
  r["v_vperp_orthogonality"] =
      (pc.split.v_basis.empty() || pc.split.vperp_basis.empty())
          ? 0.0
          : max_abs(pc.split.v_basis.matrix().transpose() * g.matrix() *
                    pc.split.vperp_basis.matrix());
  return r;
}

PointConstruction construct_from_split(const MetricTensor& g, const TwoForm& omega,
                                       Endomorphism a, PairedSpectrum spectrum, SpaceSplit split,
                                       const std::optional<Frame>& tframe_hint,
                                       const Tolerances& tol) {
  Frame tframe = default_tframe(split, g);
  if (tframe_hint) tframe = align_tframe(tframe, *tframe_hint, g);

  Endomorphism q = sqrt_on_V(a, split, g);
  Endomorphism j = build_J(a, q, split, g, tframe);
  MetricTensor gj = build_gJ(omega, j, split, g, tol);
  OmegaParts parts = assemble_Omega(omega, split, gj, tframe, tol);

  PointConstruction pc{
      .A = std::move(a),
      .spectrum = std::move(spectrum),
      .split = std::move(split),
      .Q = std::move(q),
      .J = std::move(j),
      .gJ = std::move(gj),
      .omega1 = std::move(parts.omega1),
      .omega2 = std::move(parts.omega2),
      .Omega = std::move(parts.Omega),
      .tframe = std::move(tframe),
      .residuals = {},
      .gj_min_eigenvalue = 0.0,
  };
  pc.gj_min_eigenvalue = pc.gJ.min_eigenvalue();
  pc.residuals = construction_residuals(pc, g);
  return pc;
}

PointConstruction construct_point(const MetricTensor& g, const TwoForm& omega,
                                  const EpsilonPolicy& policy,
                                  const std::optional<Frame>& tframe_hint,
                                  const Tolerances& tol) {
  require_same_dim(g.dim(), omega.dim(), "construct_point");
  if (g.dim() % 2 != 0) {
    throw DimensionError("construct_point: odd dimension " + std::to_string(g.dim()) +
                         " (lift to n+1 first)");
  }
  Endomorphism a = build_A(g, omega);
  PairedSpectrum spectrum = paired_spectrum(a, g, tol);

  SpaceSplit split;
  if (policy.mode == EpsilonPolicy::Mode::fixed) {
    split = split_spaces(spectrum, policy.value, band_slack(spectrum, tol));
  } else {
    const double eps = auto_epsilon(spectrum);
    if (eps > 0.0) {
      split = split_spaces(spectrum, eps, band_slack(spectrum, tol));
    } else {
      // Degenerate omega: everything is V-perp.
      split = classify_bands(spectrum, std::numeric_limits<double>::infinity());
      split.epsilon = 0.0;
    }
  }
  return construct_from_split(g, omega, std::move(a), std::move(spectrum), std::move(split),
                              tframe_hint, tol);
}

OddLift lift_odd(const MetricTensor& g, const TwoForm& omega) {
  require_same_dim(g.dim(), omega.dim(), "lift_odd");
  const int n = g.dim();
  if (n % 2 == 0) throw DimensionError("lift_odd: dimension " + std::to_string(n) + " is even");
  Matrix lg = Matrix::Zero(n + 1, n + 1);
  lg.topLeftCorner(n, n) = g.matrix();
  lg(n, n) = 1.0;
  Matrix lw = Matrix::Zero(n + 1, n + 1);
  lw.topLeftCorner(n, n) = omega.matrix();
  return OddLift{n, MetricTensor(lg), TwoForm(lw)};
}

}  // namespace semical
