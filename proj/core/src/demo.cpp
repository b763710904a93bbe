#include "semical/demo.hpp"

#include <cmath>
#include <functional>

namespace semical {

namespace {

struct Demo {
  std::string name;
  std::string comment;
  std::function<FieldGrid()> make;
};

FieldPoint make_point(int index, Vector coords, MetricTensor g, TwoForm omega) {
  FieldPoint p;
  p.index = index;
  p.coords = std::move(coords);
  p.g = std::move(g);
  p.omega = std::move(omega);
  return p;
}

TwoForm two_block(double a, double b) {
  return TwoForm::elementary(4, 0, 1, a) + TwoForm::elementary(4, 2, 3, b);
}

FieldGrid ramp(double s0, double step) {
  FieldGrid grid{4, {}};
  for (int k = 0; k < 5; ++k) {
    Vector x = Vector::Zero(4);
    x(0) = std::abs(step) * k;
    grid.points.push_back(make_point(k, x, MetricTensor::identity(4), two_block(1.0, s0 + step * k)));
  }
  return grid;
}

const std::vector<Demo>& demos() {
  static const std::vector<Demo> all = {
      {"standard",
       "Demo 'standard': the flat symplectic form dx1^dx2 + dx3^dx4 with the\n"
       "Euclidean metric, sampled on a 3x3 grid in the (x1, x2) plane.\n"
       "(g, omega) is already a compatible pair, so the construction returns\n"
       "J = block-diag(J2, J2), gJ = I and Omega = omega at every point.",
       [] {
         FieldGrid grid{4, {}};
         for (int i = 0; i < 3; ++i)
           for (int j = 0; j < 3; ++j) {
             Vector x = Vector::Zero(4);
             x(0) = 0.5 * i;
             x(1) = 0.5 * j;
             grid.points.push_back(
                 make_point(3 * i + j, x, MetricTensor::identity(4), two_block(1.0, 1.0)));
           }
         return grid;
       }},
      {"scaled",
       "Demo 'scaled': omega = dx1^dx2 + 0.5 dx3^dx4, g = I. The eigenvalues of\n"
       "-A^2 are 1, 1, 0.25, 0.25, so the comass is 1 and the (x1, x2) plane is\n"
       "calibrated.",
       [] {
         FieldGrid grid{4, {}};
         for (int k = 0; k < 3; ++k) {
           Vector x = Vector::Zero(4);
           x(0) = 0.5 * k;
           grid.points.push_back(make_point(k, x, MetricTensor::identity(4), two_block(1.0, 0.5)));
         }
         return grid;
       }},
      {"rank-deficient",
       "Demo 'rank-deficient': omega = dx1^dx2, g = I. The (x3, x4) plane is the\n"
       "kernel of omega; Omega adds a 2-form built from a frame of it.",
       [] {
         FieldGrid grid{4, {}};
         for (int k = 0; k < 3; ++k) {
           Vector x = Vector::Zero(4);
           x(2) = 0.5 * k;
           grid.points.push_back(
               make_point(k, x, MetricTensor::identity(4), TwoForm::elementary(4, 0, 1)));
         }
         return grid;
       }},
      {"odd3",
       "Demo 'odd3': a 3-dimensional field, omega = cos t dx1^dx2 + sin t dx2^dx3\n"
       "with t = 0, 0.1, 0.2 and g = I. Each point is lifted to R^4 by appending a\n"
       "unit, omega-null coordinate before the construction runs.",
       [] {
         FieldGrid grid{3, {}};
         for (int k = 0; k < 3; ++k) {
           const double t = 0.1 * k;
           Vector x = Vector::Zero(3);
           x(0) = t;
           const TwoForm w =
               TwoForm::elementary(3, 0, 1, std::cos(t)) + TwoForm::elementary(3, 1, 2, std::sin(t));
           grid.points.push_back(make_point(k, x, MetricTensor::identity(3), w));
         }
         return grid;
       }},
      {"ramp",
       "Demo 'ramp': omega = dx1^dx2 + s dx3^dx4 with s = 0.6, 0.7, ..., 1.0 and\n"
       "g = I. The automatic epsilon is 0.36 and every eigenvalue stays at or\n"
       "above epsilon/2, so gJ = diag(1, 1, s, s) at every point.",
       [] { return ramp(0.6, 0.1); }},
      {"ramp-gap",
       "Demo 'ramp-gap': omega = dx1^dx2 + s dx3^dx4 with s = 0.6, 0.475, ..., 0.1\n"
       "and g = I. With epsilon = 0.36 the forbidden band is (0.09, 0.18); only\n"
       "point 2 (s^2 = 0.1225) falls inside it and is excluded.",
       [] { return ramp(0.6, -0.125); }},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : demos()) out.push_back(d.name);
    return out;
  }();
  return names;
}

std::string demo_calfield(std::string_view name) {
  for (const auto& d : demos()) {
    if (d.name == name) return write_calfield(d.make(), d.comment);
  }
  std::string known;
  for (const auto& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown demo '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace semical
