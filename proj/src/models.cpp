#include "ams/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ams/committor.hpp"
#include "ams/error.hpp"

namespace ams {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Drift: return "drift";
    case ModelKind::DoubleWell: return "double_well";
    case ModelKind::TripleWell: return "triple_well";
    case ModelKind::TwoSaddles: return "two_saddles";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "drift") return ModelKind::Drift;
  if (name == "double_well") return ModelKind::DoubleWell;
  if (name == "triple_well") return ModelKind::TripleWell;
  if (name == "two_saddles") return ModelKind::TwoSaddles;
  throw Error(ErrorKind::ConfigError, "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(CoordinateKind kind) {
  switch (kind) {
    case CoordinateKind::Linear: return "linear";
    case CoordinateKind::Norm: return "norm";
    case CoordinateKind::ClosedFormCommittor: return "closed_form_committor";
    case CoordinateKind::QuadratureCommittor: return "quadrature_committor";
    case CoordinateKind::SaddleApproxCommittor: return "saddle_approx_committor";
    case CoordinateKind::CommittorGridInterp: return "committor_grid";
  }
  return "unknown";
}

std::string_view to_string(CoordinateChoice choice) {
  switch (choice) {
    case CoordinateChoice::Linear: return "linear";
    case CoordinateChoice::Norm: return "norm";
    case CoordinateChoice::Committor: return "committor";
    case CoordinateChoice::SaddleApprox: return "saddle_approx";
  }
  return "unknown";
}

CoordinateChoice coordinate_choice_from_string(std::string_view name) {
  if (name == "linear") return CoordinateChoice::Linear;
  if (name == "norm") return CoordinateChoice::Norm;
  if (name == "committor") return CoordinateChoice::Committor;
  if (name == "saddle_approx") return CoordinateChoice::SaddleApprox;
  throw Error(ErrorKind::ConfigError, "unknown coordinate '" + std::string(name) + "'");
}

ReactionCoordinate ReactionCoordinate::linear(double xA, double xB) {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::Linear;
  phi.xA = xA;
  phi.xB = xB;
  return phi;
}

ReactionCoordinate ReactionCoordinate::norm() {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::Norm;
  return phi;
}

ReactionCoordinate ReactionCoordinate::drift_committor(double xA, double xB, double beta, double mu) {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::ClosedFormCommittor;
  phi.xA = xA;
  phi.xB = xB;
  phi.rate = beta * mu;
  return phi;
}

ReactionCoordinate ReactionCoordinate::quadrature_committor(std::shared_ptr<const CommittorTable1d> table) {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::QuadratureCommittor;
  phi.xA = table->xA;
  phi.xB = table->xB;
  phi.table = std::move(table);
  return phi;
}

ReactionCoordinate ReactionCoordinate::saddle_committor(double xA, double xB, double saddle, double omega) {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::SaddleApproxCommittor;
  phi.xA = xA;
  phi.xB = xB;
  phi.saddle = saddle;
  phi.omega = omega;
  return phi;
}

ReactionCoordinate ReactionCoordinate::grid_committor(std::shared_ptr<const CommittorGrid> grid) {
  ReactionCoordinate phi;
  phi.kind = CoordinateKind::CommittorGridInterp;
  phi.grid = std::move(grid);
  return phi;
}

State SurfaceC::at(double param) const {
  switch (kind) {
    case SurfaceKind::Point: return point;
    case SurfaceKind::VerticalLine: return State(lineX, param);
    case SurfaceKind::Ellipse:
      return State(center(0) + radius * std::cos(param), center(1) + radius / std::sqrt(yWeight) * std::sin(param));
  }
  return point;
}

double SurfaceC::speed(double param) const {
  switch (kind) {
    case SurfaceKind::Point: return 0.0;
    case SurfaceKind::VerticalLine: return 1.0;
    case SurfaceKind::Ellipse: {
      const double sx = radius * std::sin(param);
      const double sy = radius / std::sqrt(yWeight) * std::cos(param);
      return std::hypot(sx, sy);
    }
  }
  return 0.0;
}

double RhoCTable::inverse(double u) const {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.begin()) return params.front();
  if (it == cdf.end()) return params.back();
  const auto hi = static_cast<std::size_t>(it - cdf.begin());
  const std::size_t lo = hi - 1;
  const double width = cdf[hi] - cdf[lo];
  const double frac = width > 0.0 ? (u - cdf[lo]) / width : 0.0;
  return params[lo] + frac * (params[hi] - params[lo]);
}

RhoCTable tabulate_rho_c(const SdeModel& model, const SurfaceC& surface, int points) {
  if (surface.kind == SurfaceKind::Point) {
    throw Error(ErrorKind::InvalidArgument, "point surfaces have no density to tabulate");
  }
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "need at least two tabulation points");
  const bool line = surface.kind == SurfaceKind::VerticalLine;
  const double lo = line ? surface.yMin : 0.0;
  const double hi = line ? surface.yMax : 2.0 * std::numbers::pi;

  RhoCTable table;
  table.params.resize(static_cast<std::size_t>(points));
  std::vector<double> logDensity(table.params.size());
  double maxLog = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < table.params.size(); ++k) {
    const double p = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    table.params[k] = p;
    const auto v = model.potential(surface.at(p));
    if (!v) throw Error(ErrorKind::InvalidArgument, "rho_C sampling needs a potential");
    const double speed = surface.speed(p);
    logDensity[k] = speed > 0.0 ? -model.beta * *v + std::log(speed) : -std::numeric_limits<double>::infinity();
    maxLog = std::max(maxLog, logDensity[k]);
  }
  if (!std::isfinite(maxLog)) throw Error(ErrorKind::DegenerateDensity, "density vanishes on C");

  table.cdf.assign(table.params.size(), 0.0);
  double prev = std::exp(logDensity[0] - maxLog);
  for (std::size_t k = 1; k < table.params.size(); ++k) {
    const double cur = std::exp(logDensity[k] - maxLog);
    table.cdf[k] = table.cdf[k - 1] + 0.5 * (prev + cur) * (table.params[k] - table.params[k - 1]);
    prev = cur;
  }
  const double total = table.cdf.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::DegenerateDensity, "rho_C normalization is not positive");
  }
  for (double& c : table.cdf) c /= total;
  table.cdf.back() = 1.0;
  return table;
}

State sample_rho_c(const ProblemSpec& problem, RandomStream& rng) {
  const SurfaceC& c = problem.surfaceC;
  if (c.kind == SurfaceKind::Point) return c.point;
  if (!problem.rhoC) throw Error(ErrorKind::InvalidArgument, "problem has no rho_C table");
  return c.at(problem.rhoC->inverse(rng.uniform()));
}

namespace {

ProblemSpec make_2d_problem(SdeModel model, CoordinateChoice coord, std::shared_ptr<const CommittorGrid> grid) {
  ProblemSpec problem;
  problem.model = std::move(model);
  problem.a = 0.05;
  problem.b = 0.95;
  switch (coord) {
    case CoordinateChoice::Linear:
      problem.phi = ReactionCoordinate::linear(-1.0, 1.0);
      problem.surfaceC.kind = SurfaceKind::VerticalLine;
      problem.surfaceC.lineX = -0.9;
      break;
    case CoordinateChoice::Norm:
      problem.phi = ReactionCoordinate::norm();
      problem.surfaceC.kind = SurfaceKind::Ellipse;
      break;
    case CoordinateChoice::Committor:
      if (!grid) throw Error(ErrorKind::InvalidArgument, "committor coordinate needs a solved grid");
      problem.phi = ReactionCoordinate::grid_committor(std::move(grid));
      problem.surfaceC.kind = SurfaceKind::Ellipse;
      break;
    case CoordinateChoice::SaddleApprox:
      throw Error(ErrorKind::UnsupportedDimension, "saddle approximation is one-dimensional");
  }
  // The committor coordinate borrows A, B and C from the norm coordinate.
  problem.sameCoordinate = coord != CoordinateChoice::Committor;
  problem.setPhi = problem.sameCoordinate ? problem.phi : ReactionCoordinate::norm();
  problem.rhoC = std::make_shared<const RhoCTable>(tabulate_rho_c(problem.model, problem.surfaceC));
  return problem;
}

}  // namespace

ProblemSpec make_drift_problem(double mu, double beta, CoordinateChoice coord, DriftGeometry geometry) {
  ProblemSpec problem;
  problem.model = SdeModel::drift(mu, beta);
  problem.a = 0.0;
  problem.b = 1.0;
  switch (coord) {
    case CoordinateChoice::Linear: problem.phi = ReactionCoordinate::linear(geometry.xA, geometry.xB); break;
    case CoordinateChoice::Committor:
      problem.phi = ReactionCoordinate::drift_committor(geometry.xA, geometry.xB, beta, mu);
      break;
    default: throw Error(ErrorKind::InvalidArgument, "drift model supports linear or committor coordinates");
  }
  problem.setPhi = problem.phi;
  problem.surfaceC.kind = SurfaceKind::Point;
  problem.surfaceC.point = State(geometry.x0, 0.0);
  return problem;
}

ProblemSpec make_double_well_problem(double beta, CoordinateChoice coord, double xC) {
  ProblemSpec problem;
  problem.model = SdeModel::double_well(beta);
  problem.a = 0.0;
  problem.b = 1.0;
  switch (coord) {
    case CoordinateChoice::Linear: problem.phi = ReactionCoordinate::linear(-1.0, 1.0); break;
    case CoordinateChoice::Committor:
      problem.phi = ReactionCoordinate::quadrature_committor(
          std::make_shared<const CommittorTable1d>(tabulate_committor_1d(problem.model, -1.0, 1.0)));
      break;
    case CoordinateChoice::SaddleApprox:
      problem.phi = ReactionCoordinate::saddle_committor(-1.0, 1.0, 0.0, -0.5 * beta * -double_well_force_d1(0.0));
      break;
    case CoordinateChoice::Norm: throw Error(ErrorKind::InvalidArgument, "norm coordinate is two-dimensional");
  }
  problem.setPhi = problem.phi;
  problem.surfaceC.kind = SurfaceKind::Point;
  problem.surfaceC.point = State(xC, 0.0);
  return problem;
}

ProblemSpec make_triple_well_problem(double beta, CoordinateChoice coord, std::shared_ptr<const CommittorGrid> grid) {
  return make_2d_problem(SdeModel::triple_well(beta), coord, std::move(grid));
}

ProblemSpec make_two_saddles_problem(double beta, CoordinateChoice coord, std::shared_ptr<const CommittorGrid> grid) {
  return make_2d_problem(SdeModel::two_saddles(beta), coord, std::move(grid));
}

CriticalPoint find_critical_point(const SdeModel& model, const State& guess, double tol, int maxIter) {
  if (model.dimension != 2) throw Error(ErrorKind::UnsupportedDimension, "critical point search is 2-D");
  const auto grad = [&](const State& p) -> State { return -model.force(p); };
  const double h = 1e-6;
  const auto hessian = [&](const State& p) {
    Eigen::Matrix2d hess;
    for (int c = 0; c < 2; ++c) {
      State step = State::Zero();
      step(c) = h;
      hess.col(c) = (grad(p + step) - grad(p - step)) / (2.0 * h);
    }
    return Eigen::Matrix2d(0.5 * (hess + hess.transpose()));
  };

  State x = guess;
  for (int it = 1; it <= maxIter; ++it) {
    const State g = grad(x);
    const Eigen::Matrix2d hess = hessian(x);
    const State delta = hess.fullPivLu().solve(g);
    x -= delta;
    if (!x.allFinite()) throw Error(ErrorKind::SolverFailed, "Newton iterate left the finite range");
    if (delta.norm() < tol || grad(x).norm() < tol) {
      return {x, *model.potential(x), hessian(x), it};
    }
  }
  throw Error(ErrorKind::SolverFailed, "Newton iteration on grad V did not converge");
}

}  // namespace ams
