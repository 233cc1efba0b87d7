#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Core>

#include "ams/committor_grid.hpp"
#include "ams/error.hpp"
#include "ams/models.hpp"

namespace ams {

/// Committor of Brownian motion with constant drift -mu between xA and xB.
/// Falls back to the linear profile when beta*mu = 0.
template <typename Scalar>
Scalar committor_drift(Scalar x, Scalar xA, Scalar xB, Scalar beta, Scalar mu) {
  using std::exp;
  using std::sinh;
  const Scalar c = beta * mu;
  if (c == Scalar(0)) return (x - xA) / (xB - xA);
  return sinh(c * (xA - x) / Scalar(2)) / sinh(c * (xA - xB) / Scalar(2)) * exp(c * (x - xB) / Scalar(2));
}

/// Ratio of integrals of exp(beta V) over [xA, x] and [xA, xB] for a 1-D
/// gradient model, evaluated with exponent shifting so that large beta does
/// not overflow.
double committor_1d_quadrature(double x, const SdeModel& model, double xA, double xB);

/// Saddle-point approximation around the maximum x_s of V, with the sign of
/// x - x_s taken as 0 at x = x_s.
double committor_saddle_approx(double x, const SdeModel& model, double xA, double xB, double xs);

/// Quadrature committor tabulated on `points` uniform nodes of [xA, xB].
CommittorTable1d tabulate_committor_1d(const SdeModel& model, double xA, double xB, int points = 20001);

struct CommittorSolveOptions {
  double x0 = -1.5, x1 = 1.5;
  double y0 = -1.0, y1 = 2.0;
  double dx = 0.03, dy = 0.03;
  State pointA = State(-1.0, 0.0);
  State pointB = State(1.0, 0.0);
  double tol = 1e-8;
  // When set, every node inside the region is a Dirichlet node and the
  // corresponding point above is ignored.
  std::function<bool(const State&)> regionA;
  std::function<bool(const State&)> regionB;
};

/// Finite-difference solve of F . grad q + (1/beta) Laplacian q = 0 with
/// q = 0 at the node nearest pointA, q = 1 at the node nearest pointB and
/// reflecting (mirrored ghost node) conditions on the rectangle.
/// Advection is centred where the cell Peclet number |F| h beta / 2 <= 1 and
/// upwinded otherwise, so every off-diagonal coefficient stays nonnegative.
CommittorGrid solve_committor_2d(const SdeModel& model, const CommittorSolveOptions& options = {});

/// Max-norm of the discrete equation residual, scaled by the diagonal coefficient.
double committor_residual(const SdeModel& model, const CommittorGrid& grid);

/// Options whose Dirichlet regions are the sets A and B of `problem`.
/// With dt > 0 both boundaries move away from C by 0.5826 sqrt(2 dt / beta),
/// the first-order correction that makes the continuous committor match a
/// path monitored only at multiples of dt (Broadie, Glasserman and Kou).
CommittorSolveOptions set_dirichlet_options(const ProblemSpec& problem, double spacing = 0.03, double dt = 0.0);

/// Average of q over rho_C on the problem's start surface, by the rho_C tabulation.
double committor_average_on_c(const CommittorGrid& grid, const ProblemSpec& problem, int points = 2000);

}  // namespace ams
