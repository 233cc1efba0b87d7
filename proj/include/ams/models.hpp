#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ams/committor_grid.hpp"
#include "ams/potentials.hpp"
#include "ams/rng.hpp"

namespace ams {

/// Phase-space point. One-dimensional models use component 0 and keep y = 0.
using State = Eigen::Vector2d;

enum class ModelKind { Drift, DoubleWell, TripleWell, TwoSaddles, Custom };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Extension seam for user-supplied force fields.
class ForceField {
 public:
  virtual ~ForceField() = default;
  virtual int dimension() const = 0;
  virtual State force(const State& x) const = 0;
  virtual std::optional<double> potential(const State&) const { return std::nullopt; }
  // First and second derivative of a 1-D force; required by the order-1.5 scheme.
  virtual std::optional<double> force_d1(double) const { return std::nullopt; }
  virtual std::optional<double> force_d2(double) const { return std::nullopt; }
};

/// Overdamped Langevin model dX = F(X) dt + sqrt(2/beta) dW.
struct SdeModel {
  ModelKind kind = ModelKind::DoubleWell;
  int dimension = 1;
  double beta = 1.0;
  double mu = 0.0;  // drift model only
  std::shared_ptr<const ForceField> custom;

  static SdeModel drift(double mu, double beta) { return {ModelKind::Drift, 1, beta, mu, nullptr}; }
  static SdeModel double_well(double beta) { return {ModelKind::DoubleWell, 1, beta, 0.0, nullptr}; }
  static SdeModel triple_well(double beta) { return {ModelKind::TripleWell, 2, beta, 0.0, nullptr}; }
  static SdeModel two_saddles(double beta) { return {ModelKind::TwoSaddles, 2, beta, 0.0, nullptr}; }
  static SdeModel from_field(std::shared_ptr<const ForceField> field, double beta) {
    const int dim = field->dimension();
    return {ModelKind::Custom, dim, beta, 0.0, std::move(field)};
  }

  State force(const State& x) const {
    switch (kind) {
      case ModelKind::Drift: return State(-mu, 0.0);
      case ModelKind::DoubleWell: return State(double_well_force(x(0)), 0.0);
      case ModelKind::TripleWell: return -triple_well_gradient(x(0), x(1));
      case ModelKind::TwoSaddles: return -two_saddles_gradient(x(0), x(1));
      case ModelKind::Custom: return custom->force(x);
    }
    return State::Zero();
  }

  std::optional<double> potential(const State& x) const {
    switch (kind) {
      case ModelKind::Drift: return drift_potential(x(0), mu);
      case ModelKind::DoubleWell: return double_well_potential(x(0));
      case ModelKind::TripleWell: return triple_well_potential(x(0), x(1));
      case ModelKind::TwoSaddles: return two_saddles_potential(x(0), x(1));
      case ModelKind::Custom: return custom->potential(x);
    }
    return std::nullopt;
  }

  bool is_gradient() const { return kind != ModelKind::Custom || custom->potential(State::Zero()).has_value(); }

  std::optional<double> force_d1(double x) const {
    switch (kind) {
      case ModelKind::Drift: return 0.0;
      case ModelKind::DoubleWell: return double_well_force_d1(x);
      case ModelKind::Custom: return custom->force_d1(x);
      default: return std::nullopt;
    }
  }

  std::optional<double> force_d2(double x) const {
    switch (kind) {
      case ModelKind::Drift: return 0.0;
      case ModelKind::DoubleWell: return double_well_force_d2(x);
      case ModelKind::Custom: return custom->force_d2(x);
      default: return std::nullopt;
    }
  }
};

enum class CoordinateKind {
  Linear,                // (x - xA) / (xB - xA) on the first component
  Norm,                  // 0.5 * sqrt((x+1)^2 + y^2 / 2)
  ClosedFormCommittor,   // drift committor
  QuadratureCommittor,   // tabulated 1-D quadrature committor
  SaddleApproxCommittor, // saddle-point approximation of the 1-D committor
  CommittorGridInterp,   // bilinear interpolation of a solved 2-D grid
};

std::string_view to_string(CoordinateKind kind);

/// Reaction coordinate Phi, clamped to [0,1].
struct ReactionCoordinate {
  CoordinateKind kind = CoordinateKind::Linear;
  double xA = -1.0;
  double xB = 1.0;
  // ClosedFormCommittor: q = expm1(c (x - xA)) / expm1(c (xB - xA)), c = beta*mu.
  double rate = 0.0;
  // SaddleApproxCommittor
  double saddle = 0.0;
  double omega = 0.0;
  std::shared_ptr<const CommittorTable1d> table;
  std::shared_ptr<const CommittorGrid> grid;

  static ReactionCoordinate linear(double xA, double xB);
  static ReactionCoordinate norm();
  static ReactionCoordinate drift_committor(double xA, double xB, double beta, double mu);
  static ReactionCoordinate quadrature_committor(std::shared_ptr<const CommittorTable1d> table);
  static ReactionCoordinate saddle_committor(double xA, double xB, double saddle, double omega);
  static ReactionCoordinate grid_committor(std::shared_ptr<const CommittorGrid> grid);

  double operator()(const State& x) const;
};

/// Reaction coordinate value at x, clamped to [0,1].
inline double phi_eval(const ReactionCoordinate& phi, const State& x) {
  double value = 0.0;
  switch (phi.kind) {
    case CoordinateKind::Linear: value = (x(0) - phi.xA) / (phi.xB - phi.xA); break;
    case CoordinateKind::Norm: {
      const double dx = x(0) + 1.0;
      value = 0.5 * std::sqrt(dx * dx + 0.5 * x(1) * x(1));
      break;
    }
    case CoordinateKind::ClosedFormCommittor:
      if (phi.rate == 0.0) {
        value = (x(0) - phi.xA) / (phi.xB - phi.xA);
      } else {
        value = std::expm1(phi.rate * (x(0) - phi.xA)) / std::expm1(phi.rate * (phi.xB - phi.xA));
      }
      break;
    case CoordinateKind::QuadratureCommittor: value = (*phi.table)(x(0)); break;
    case CoordinateKind::SaddleApproxCommittor: {
      if (x(0) <= phi.xA) return 0.0;
      if (x(0) >= phi.xB) return 1.0;
      const auto lobe = [&](double p) { return std::sqrt(-std::expm1(-phi.omega * (p - phi.saddle) * (p - phi.saddle))); };
      const double offset = x(0) - phi.saddle;
      const double sign = offset > 0.0 ? 1.0 : (offset < 0.0 ? -1.0 : 0.0);
      value = (lobe(phi.xA) + sign * lobe(x(0))) / (lobe(phi.xA) + lobe(phi.xB));
      break;
    }
    case CoordinateKind::CommittorGridInterp: {
      // Outside the solved rectangle the reflecting boundary condition
      // continues q along the outward normal, so project onto the rectangle.
      const CommittorGrid& g = *phi.grid;
      return committor_interpolate(g, State(std::clamp(x(0), g.x0, g.x1), std::clamp(x(1), g.y0, g.y1)));
    }
  }
  return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

inline double ReactionCoordinate::operator()(const State& x) const { return phi_eval(*this, x); }

enum class SurfaceKind { Point, VerticalLine, Ellipse };

/// Starting hypersurface C.
struct SurfaceC {
  SurfaceKind kind = SurfaceKind::Point;
  State point = State::Zero();      // Point
  double lineX = -0.9;              // VerticalLine x = lineX, y in [yMin, yMax]
  double yMin = -1.0;
  double yMax = 2.0;
  State center = State(-1.0, 0.0);  // Ellipse sqrt((x-cx)^2 + yWeight (y-cy)^2) = radius
  double radius = 0.1;
  double yWeight = 0.5;

  /// Point on C for a curve parameter (y on the line, angle on the ellipse).
  State at(double param) const;
  /// |d(point)/d(param)|.
  double speed(double param) const;
};

/// Tabulated inverse CDF of the restricted equilibrium density on C.
struct RhoCTable {
  std::vector<double> params;
  std::vector<double> cdf;  // nondecreasing, cdf.front() = 0, cdf.back() = 1

  double inverse(double u) const;
};

RhoCTable tabulate_rho_c(const SdeModel& model, const SurfaceC& surface, int points = 2000);

/// Sets A = {setPhi <= a}, B = {setPhi >= b}, ranking coordinate phi, start surface C.
struct ProblemSpec {
  SdeModel model;
  ReactionCoordinate phi;
  ReactionCoordinate setPhi;
  double a = 0.05;
  double b = 0.95;
  SurfaceC surfaceC;
  std::shared_ptr<const RhoCTable> rhoC;  // null for point surfaces

  bool in_A(const State& x) const { return setPhi(x) <= a; }
  bool in_B(const State& x) const { return setPhi(x) >= b; }

  bool sameCoordinate = true;  // setPhi is the ranking coordinate
};

/// Which coordinate family to rank trajectories with.
enum class CoordinateChoice { Linear, Norm, Committor, SaddleApprox };

std::string_view to_string(CoordinateChoice choice);
CoordinateChoice coordinate_choice_from_string(std::string_view name);

struct DriftGeometry {
  double xA = 0.0;
  double x0 = 1.0;
  double xB = 2.0;
};

ProblemSpec make_drift_problem(double mu, double beta, CoordinateChoice coord, DriftGeometry geometry = {});
ProblemSpec make_double_well_problem(double beta, CoordinateChoice coord, double xC = -0.9);
/// grid is required when coord == Committor.
ProblemSpec make_triple_well_problem(double beta, CoordinateChoice coord,
                                     std::shared_ptr<const CommittorGrid> grid = nullptr);
ProblemSpec make_two_saddles_problem(double beta, CoordinateChoice coord,
                                     std::shared_ptr<const CommittorGrid> grid = nullptr);

/// Draw an initial condition from rho_C.
State sample_rho_c(const ProblemSpec& problem, RandomStream& rng);

/// Newton iteration on grad V = 0 for 2-D gradient models (analytic Hessian by
/// central differences of the gradient).
struct CriticalPoint {
  State location;
  double potential;
  Eigen::Matrix2d hessian;
  int iterations;
};
CriticalPoint find_critical_point(const SdeModel& model, const State& guess, double tol = 1e-12, int maxIter = 100);

}  // namespace ams
