#pragma once

// Closed-form potentials and their gradients, templated on the scalar type so
// they can be evaluated in double, long double or an autodiff scalar.

#include <cmath>

#include <Eigen/Core>

namespace ams {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

// V(x) = mu x, force -mu.
template <typename Scalar>
Scalar drift_potential(Scalar x, Scalar mu) {
  return mu * x;
}

// V(x) = x^4 - 2x^2, minima at -1 and 1, saddle at 0.
template <typename Scalar>
Scalar double_well_potential(Scalar x) {
  const Scalar x2 = x * x;
  return x2 * x2 - Scalar(2) * x2;
}

template <typename Scalar>
Scalar double_well_force(Scalar x) {
  return Scalar(-4) * x * x * x + Scalar(4) * x;
}

template <typename Scalar>
Scalar double_well_force_d1(Scalar x) {
  return Scalar(-12) * x * x + Scalar(4);
}

template <typename Scalar>
Scalar double_well_force_d2(Scalar x) {
  return Scalar(-24) * x;
}

/// Triple well: global minima near (+-1,0), metastable minimum near (0,1.5).
template <typename Scalar>
Scalar triple_well_potential(Scalar x, Scalar y) {
  using std::exp;
  const Scalar third = Scalar(1) / Scalar(3);
  const Scalar fiveThirds = Scalar(5) / Scalar(3);
  const Scalar x2 = x * x;
  const Scalar yLow = y - third;
  const Scalar yHigh = y - fiveThirds;
  return Scalar(0.2) * x2 * x2 + Scalar(0.2) * yLow * yLow + Scalar(3) * exp(-x2 - yLow * yLow) -
         Scalar(3) * exp(-x2 - yHigh * yHigh) - Scalar(5) * exp(-(x - Scalar(1)) * (x - Scalar(1)) - y * y) -
         Scalar(5) * exp(-(x + Scalar(1)) * (x + Scalar(1)) - y * y);
}

template <typename Scalar>
Vec2<Scalar> triple_well_gradient(Scalar x, Scalar y) {
  using std::exp;
  const Scalar third = Scalar(1) / Scalar(3);
  const Scalar fiveThirds = Scalar(5) / Scalar(3);
  const Scalar x2 = x * x;
  const Scalar yLow = y - third;
  const Scalar yHigh = y - fiveThirds;
  const Scalar eLow = exp(-x2 - yLow * yLow);
  const Scalar eHigh = exp(-x2 - yHigh * yHigh);
  const Scalar eRight = exp(-(x - Scalar(1)) * (x - Scalar(1)) - y * y);
  const Scalar eLeft = exp(-(x + Scalar(1)) * (x + Scalar(1)) - y * y);
  Vec2<Scalar> g;
  g(0) = Scalar(0.8) * x2 * x - Scalar(6) * x * eLow + Scalar(6) * x * eHigh + Scalar(10) * (x - Scalar(1)) * eRight +
         Scalar(10) * (x + Scalar(1)) * eLeft;
  g(1) = Scalar(0.4) * yLow - Scalar(6) * yLow * eLow + Scalar(6) * yHigh * eHigh + Scalar(10) * y * eRight +
         Scalar(10) * y * eLeft;
  return g;
}

/// Two saddles: minima at (+-1,0), maximum at the origin, saddles at (0,+-1).
/// The coupling enters with a plus sign; with a minus sign the potential is
/// unbounded below in y and (+-1,0) are not minima.
template <typename Scalar>
Scalar two_saddles_potential(Scalar x, Scalar y) {
  const Scalar x2 = x * x;
  const Scalar y2 = y * y;
  return x2 * x2 / Scalar(4) - x2 / Scalar(2) + Scalar(0.3) * (y2 * y2 / Scalar(4) - y2 / Scalar(2) + x2 * y2);
}

template <typename Scalar>
Vec2<Scalar> two_saddles_gradient(Scalar x, Scalar y) {
  const Scalar x2 = x * x;
  const Scalar y2 = y * y;
  Vec2<Scalar> g;
  g(0) = x2 * x - x + Scalar(0.6) * x * y2;
  g(1) = Scalar(0.3) * (y2 * y - y + Scalar(2) * x2 * y);
  return g;
}

}  // namespace ams
