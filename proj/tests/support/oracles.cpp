#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semical::testing {

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

ExpansionValue wedge_expansion(const TwoForm& omega, const Frame& f) {
  const int k = f.size();
  const int p = k / 2;
  Matrix pairing(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) pairing(i, j) = eval_two_form(omega, f[i], f[j]);

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0.0;
  double magnitude = 0.0;
  do {
    double term = permutation_sign(perm);
    for (int q = 0; q < p; ++q) term *= pairing(perm[2 * q], perm[2 * q + 1]);
    sum += term;
    magnitude += std::abs(term);
  } while (std::next_permutation(perm.begin(), perm.end()));

  double norm = 1.0;
  for (int q = 1; q <= p; ++q) norm *= 2.0 * q;
  return {sum / norm, magnitude / norm};
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

MetricTensor random_metric(Rng& rng, int n) {
  const Matrix m = random_matrix(rng, n, n);
  return MetricTensor(m.transpose() * m / n + 0.5 * Matrix::Identity(n, n));
}

TwoForm random_two_form(Rng& rng, int n) { return TwoForm(random_matrix(rng, n, n)); }

TwoForm rescale_to_unit_comass(const MetricTensor& g, const TwoForm& omega) {
  return omega.scaled(1.0 / comass2_exact(g, omega).value);
}

Matrix random_orthogonal(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  Matrix q = qr.householderQ();
  return q;
}

TwoForm planted_form(Rng& rng, const MetricTensor& g, const std::vector<double>& sigmas) {
  const int n = g.dim();
  Matrix block = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const int i = 2 * static_cast<int>(k);
    block(i, i + 1) = sigmas[k];
    block(i + 1, i) = -sigmas[k];
  }
  const Matrix o = random_orthogonal(rng, n);
  const Matrix& l = g.cholesky_lower();
  return TwoForm(l * o * block * o.transpose() * l.transpose());
}

Vector random_in_span(Rng& rng, const MetricTensor& g, const Frame& e) {
  Vector c(e.size());
  for (int i = 0; i < c.size(); ++i) c(i) = rng.normal();
  Vector v = e.matrix() * c;
  return v / g.norm(v);
}

Frame complex_frame_in(Rng& rng, const MetricTensor& g, const Endomorphism& a, const Frame& e,
                       int p) {
  std::vector<Vector> out;
  for (int q = 0; q < p; ++q) {
    Vector u = random_in_span(rng, g, e);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& prev : out) u -= g.inner(prev, u) * prev;
    u /= g.norm(u);
    Vector au = a(u);
    au /= g.norm(au);
    out.push_back(u);
    out.push_back(au);
  }
  return Frame::from_vectors(out);
}

}  // namespace semical::testing
