#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "ams/error.hpp"

namespace ams {

struct QuadratureResult {
  double value = 0.0;
  double errorEstimate = 0.0;
  int intervals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1,1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gauss_kronrod_15(const F& f, double a, double b, double& kronrod, double& gauss) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  kronrod = fc * kKronrodWeights[7];
  gauss = fc * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[k] * sum;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
}

template <typename F>
void adaptive_gk(const F& f, double a, double b, double tol, int depth, QuadratureResult& acc) {
  double kronrod = 0.0, gauss = 0.0;
  gauss_kronrod_15(f, a, b, kronrod, gauss);
  const double err = std::abs(kronrod - gauss);
  if (err <= tol || depth == 0) {
    if (err > tol && depth == 0) {
      throw Error(ErrorKind::QuadratureFailure, "adaptive Gauss-Kronrod hit the subdivision limit");
    }
    acc.value += kronrod;
    acc.errorEstimate += err;
    ++acc.intervals;
    return;
  }
  const double mid = 0.5 * (a + b);
  adaptive_gk(f, a, mid, 0.5 * tol, depth - 1, acc);
  adaptive_gk(f, mid, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a,b] to absolute tolerance.
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, double absTol = 1e-12, int maxDepth = 40) {
  QuadratureResult acc;
  if (a == b) return acc;
  detail::adaptive_gk(f, a, b, absTol, maxDepth, acc);
  return acc;
}

}  // namespace ams
