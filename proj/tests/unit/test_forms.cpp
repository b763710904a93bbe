#include <doctest.h>

#include "semical/forms.hpp"
#include "support/oracles.hpp"

#include <vector>

using namespace semical;

TEST_CASE("metric mirrors the upper triangle and rejects indefinite input") {
  Matrix m(2, 2);
  m << 2.0, 0.5, 99.0, 3.0;
  const MetricTensor g(m);
  CHECK(g(1, 0) == 0.5);
  CHECK(g.matrix() == g.matrix().transpose());

  const std::vector<double> bad = {1, 0, 0, 1, 0, -1};
  CHECK_THROWS_AS(MetricTensor::from_upper(3, bad), NotPositiveDefinite);
  const std::vector<double> singular = {1, 1, 1};
  CHECK_THROWS_AS(MetricTensor::from_upper(2, singular), NotPositiveDefinite);
}

TEST_CASE("two-forms are exactly antisymmetric") {
  Matrix m(3, 3);
  m << 7, 1, 2, 5, 7, 3, 6, 8, 7;
  const TwoForm w(m);
  CHECK(w.matrix() == -w.matrix().transpose());
  CHECK(w(1, 0) == -1.0);
  CHECK(w(0, 0) == 0.0);

  const std::vector<double> upper = {1, 2, 3, 4, 5, 6};
  const TwoForm u = TwoForm::from_upper(4, upper);
  CHECK(u(0, 1) == 1);
  CHECK(u(1, 2) == 4);
  CHECK(u(2, 3) == 6);
  CHECK(u(3, 2) == -6);
  CHECK_THROWS(TwoForm::elementary(3, 1, 1));
}

TEST_CASE("eval_two_form and wedge agree") {
  Rng rng(3);
  const MetricTensor g = testing::random_metric(rng, 5);
  const Vector a = testing::random_matrix(rng, 5, 1);
  const Vector b = testing::random_matrix(rng, 5, 1);
  const Vector v = testing::random_matrix(rng, 5, 1);
  const Vector w = testing::random_matrix(rng, 5, 1);
  const Covector da = musical_dual(g, a);
  const Covector db = musical_dual(g, b);
  const TwoForm ab = wedge(da, db);
  CHECK(eval_two_form(ab, v, w) == doctest::Approx(da(v) * db(w) - da(w) * db(v)));
  CHECK(eval_two_form(ab, v, v) == doctest::Approx(0.0));
}

TEST_CASE("plane_area is the Gram determinant root and zero for parallel vectors") {
  const MetricTensor g = MetricTensor::identity(3);
  Vector v(3), w(3);
  v << 2, 0, 0;
  w << 1, 3, 0;
  CHECK(plane_area(g, v, w) == doctest::Approx(6.0));
  CHECK(plane_area(g, v, 2.0 * v) == 0.0);
}

TEST_CASE("gram_schmidt orthonormalizes and detects dependence") {
  Rng rng(11);
  const MetricTensor g = testing::random_metric(rng, 6);
  const Frame f(testing::random_matrix(rng, 6, 4));
  const Frame q = gram_schmidt(g, f);
  CHECK(q.orthonormality_error(g) < 1e-13);
  // First vector keeps its direction.
  CHECK((f[0] - g.inner(q[0], f[0]) * q[0]).norm() < 1e-12 * f[0].norm());

  Matrix dep = testing::random_matrix(rng, 6, 3);
  dep.col(2) = dep.col(0) - 2.0 * dep.col(1);
  CHECK_THROWS_AS(gram_schmidt(g, Frame(dep)), RankDeficient);
}

TEST_CASE("orthogonal_complement spans the rest") {
  Rng rng(5);
  const MetricTensor g = testing::random_metric(rng, 5);
  const Frame f = gram_schmidt(g, Frame(testing::random_matrix(rng, 5, 2)));
  const Frame c = orthogonal_complement(g, f);
  REQUIRE(c.size() == 3);
  CHECK(c.orthonormality_error(g) < 1e-12);
  CHECK(max_abs(f.matrix().transpose() * g.matrix() * c.matrix()) < 1e-12);
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(TwoForm::zero(3) + TwoForm::zero(4), DimensionError);
  const Vector v = Vector::Zero(3);
  CHECK_THROWS_AS(eval_two_form(TwoForm::zero(4), v, v), DimensionError);
}
