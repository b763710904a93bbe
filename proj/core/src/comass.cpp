#include "semical/comass.hpp"

#include "semical/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace semical {

PowerForm::PowerForm(TwoForm base, int p) : base_(std::move(base)), p_(p) {
  if (p_ < 1) throw DimensionError("power form: p must be positive");
  if (2 * p_ > base_.dim()) {
    throw DimensionError("power form: degree " + std::to_string(2 * p_) +
                         " exceeds dimension " + std::to_string(base_.dim()));
  }
}

namespace {

double pfaffian_rec(const Matrix& m, std::array<int, kMaxDim>& idx, int count) {
  if (count == 0) return 1.0;
  if (count == 2) return m(idx[0], idx[1]);
  if (count == 4) {
    const int a = idx[0], b = idx[1], c = idx[2], d = idx[3];
    return m(a, b) * m(c, d) - m(a, c) * m(b, d) + m(a, d) * m(b, c);
  }
  const int first = idx[0];
  double total = 0.0;
  std::array<int, kMaxDim> rest{};
  for (int k = 1; k < count; ++k) {
    const double entry = m(first, idx[k]);
    if (entry == 0.0) continue;
    int r = 0;
    for (int j = 1; j < count; ++j)
      if (j != k) rest[r++] = idx[j];
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    total += sign * entry * pfaffian_rec(m, rest, count - 2);
  }
  return total;
}

// Form in g-orthonormal coordinates: omega(x, x') = y^T W_hat y' with y = L^T x.
Matrix orthonormal_coordinates(const MetricTensor& g, const TwoForm& omega) {
  const auto lower = g.cholesky_lower().triangularView<Eigen::Lower>();
  const Matrix left = lower.solve(omega.matrix());
  Matrix w_hat = lower.solve(left.transpose()).transpose();
  return 0.5 * (w_hat - w_hat.transpose());
}

void orthonormalize_columns(Matrix& y) {
  for (int k = 0; k < y.cols(); ++k) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) y.col(k) -= y.col(j).dot(y.col(k)) * y.col(j);
    y.col(k).normalize();
  }
}

class PlaneObjective {
 public:
  PlaneObjective(Matrix w_hat, int k) : w_hat_(std::move(w_hat)), k_(k) {}

  double operator()(const Matrix& y) {
    if (k_ == 2) return y.col(0).dot(w_hat_ * y.col(1));
    gram_ = y.transpose() * (w_hat_ * y);
    return pfaffian(gram_);
  }

 private:
  Matrix w_hat_;
  int k_;
  Matrix gram_;
};

struct Candidate {
  double value;
  Matrix frame;
};

void orient(Matrix& y, double& value) {
  if (value < 0.0) {
    y.col(0).swap(y.col(1));
    value = -value;
  }
}

void climb(Candidate& c, PlaneObjective& objective, Rng& rng) {
  const int n = static_cast<int>(c.frame.rows());
  const int k = static_cast<int>(c.frame.cols());
  if (k >= n) return;
  double angle = 0.1;
  int rejections = 0;
  constexpr long kMaxSteps = 50000;
  Matrix trial(n, k);
  Vector t(n);
  for (long step = 0; step < kMaxSteps && angle >= 1e-6; ++step) {
    const int col = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    for (int i = 0; i < n; ++i) t(i) = rng.normal();
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) t -= c.frame.col(j).dot(t) * c.frame.col(j);
    const double tn = t.norm();
    if (tn < 1e-12) continue;
    t /= tn;
    trial = c.frame;
    trial.col(col) = std::cos(angle) * c.frame.col(col) + std::sin(angle) * t;
    orthonormalize_columns(trial);
    const double value = objective(trial);
    if (value > c.value) {
      c.value = value;
      c.frame = trial;
      rejections = 0;
    } else if (++rejections >= 20) {
      angle *= 0.5;
      rejections = 0;
    }
  }
}

}  // namespace

double pfaffian(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("pfaffian: matrix not square");
  const int size = static_cast<int>(m.rows());
  if (size % 2 != 0) return 0.0;
  if (size > kMaxDim) throw DimensionError("pfaffian: matrix larger than 16 x 16");
  std::array<int, kMaxDim> idx{};
  for (int i = 0; i < size; ++i) idx[i] = i;
  return pfaffian_rec(m, idx, size);
}

ComassEstimate comass2_exact(const MetricTensor& g, const TwoForm& omega,
                             const Tolerances& tol) {
  const Endomorphism a = build_A(g, omega);
  const PairedSpectrum s = paired_spectrum(a, g, tol);
  ComassEstimate out;
  out.mode = ComassEstimate::Mode::exact;
  out.value = std::sqrt(std::max(0.0, s.lambda_max()));
  if (!s.pairs.empty()) {
    out.maximizer = Frame::from_vectors({s.pairs.front().v, s.pairs.front().w});
  } else if (g.dim() >= 2) {
    out.maximizer = gram_schmidt(g, Frame(Matrix(Matrix::Identity(g.dim(), 2))));
  }
  out.maximizer = Frame(out.maximizer.matrix(), true);
  return out;
}

double eval_power(const PowerForm& form, const Frame& f) {
  if (f.size() != form.degree()) {
    throw DimensionError("eval_power: frame has " + std::to_string(f.size()) +
                         " vectors, form degree is " + std::to_string(form.degree()));
  }
  require_same_dim(form.dim(), f.dim(), "eval_power");
  const Matrix gram = f.matrix().transpose() * form.base().matrix() * f.matrix();
  return pfaffian(gram);
}

ComassEstimate comass_bruteforce(const MetricTensor& g, const PowerForm& form,
                                 const SearchOptions& options) {
  require_same_dim(g.dim(), form.dim(), "comass_bruteforce");
  if (options.samples < 1) throw Error("comass_bruteforce: samples must be >= 1");
  const int n = g.dim();
  const int k = form.degree();
  PlaneObjective objective(orthonormal_coordinates(g, form.base()), k);
  Rng rng(options.seed);

  const auto keep = static_cast<std::size_t>(std::max(1, options.restarts));
  std::vector<Candidate> best;
  best.reserve(keep + 1);
  Matrix y(n, k);
  for (long s = 0; s < options.samples; ++s) {
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) y(i, j) = rng.normal();
    orthonormalize_columns(y);
    double value = objective(y);
    orient(y, value);
    if (best.size() < keep || value > best.back().value) {
      auto pos = std::upper_bound(best.begin(), best.end(), value,
                                  [](double v, const Candidate& c) { return v > c.value; });
      best.insert(pos, Candidate{value, y});
      if (best.size() > keep) best.pop_back();
    }
  }

  if (options.restarts > 0) {
    for (std::size_t r = 0; r < best.size(); ++r) {
      Rng local(derive_seed(options.seed, r));
      climb(best[r], objective, local);
    }
  }
  // Earliest candidate wins ties.
  const Candidate* winner = &best.front();
  for (const auto& c : best)
    if (c.value > winner->value) winner = &c;

  ComassEstimate out;
  out.mode = ComassEstimate::Mode::sampled;
  out.value = winner->value;
  out.samples = options.samples;
  out.restarts = options.restarts;
  const auto upper = g.cholesky_lower().transpose().triangularView<Eigen::Upper>();
  out.maximizer = Frame(Matrix(upper.solve(winner->frame)), true);
  return out;
}

CalibrationVerdict test_calibrated(const MetricTensor& g, const PowerForm& form, const Frame& f,
                                   double tol) {
  require_same_dim(g.dim(), f.dim(), "test_calibrated");
  if (f.size() != form.degree()) {
    throw DimensionError("test_calibrated: frame has " + std::to_string(f.size()) +
                         " vectors, form degree is " + std::to_string(form.degree()));
  }
  Frame unit;
  try {
    unit = gram_schmidt(g, f);
  } catch (const RankDeficient&) {
    throw RankDeficient("test_calibrated: degenerate frame");
  }
  CalibrationVerdict v;
  v.ratio = eval_power(form, unit);
  v.tolerance = tol;
  v.calibrated = std::abs(v.ratio - 1.0) <= tol;
  return v;
}

Frame calibrated_eigenspace(const PointConstruction& pc, const Endomorphism& a, double tau,
                            const MetricTensor& g) {
  require_same_dim(g.dim(), a.dim(), "calibrated_eigenspace");
  std::vector<Vector> vs;
  for (const auto& pair : pc.spectrum.pairs) {
    if (std::abs(pair.lambda - 1.0) > tau) continue;
    Vector w = a(pair.v);
    w /= g.norm(w);
    vs.push_back(pair.v);
    vs.push_back(w);
  }
  if (vs.empty()) return Frame(Matrix(g.dim(), 0), true);
  return Frame(Frame::from_vectors(vs).matrix(), true);
}

double first_cousin_residual(const MetricTensor& g, const TwoForm& omega, const Frame& f) {
  require_same_dim(g.dim(), omega.dim(), "first_cousin_residual");
  if (f.size() != 2) throw DimensionError("first_cousin_residual: frame must span a 2-plane");
  Frame unit;
  try {
    unit = gram_schmidt(g, f);
  } catch (const RankDeficient&) {
    throw RankDeficient("first_cousin_residual: degenerate frame");
  }
  const Frame complement = orthogonal_complement(g, unit);
  double worst = 0.0;
  for (int k = 0; k < complement.size(); ++k) {
    worst = std::max(worst, std::abs(eval_two_form(omega, unit[0], complement[k])));
    worst = std::max(worst, std::abs(eval_two_form(omega, unit[1], complement[k])));
  }
  return worst;
}

}  // namespace semical
