#include "ams/committor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "ams/quadrature.hpp"

namespace ams {

namespace {

double potential_1d(const SdeModel& model, double x) {
  const auto v = model.potential(State(x, 0.0));
  if (!v) throw Error(ErrorKind::InvalidArgument, "1-D committor needs a potential");
  return *v;
}

double max_scaled_potential(const SdeModel& model, double xA, double xB) {
  double best = -std::numeric_limits<double>::infinity();
  constexpr int kSamples = 4001;
  for (int k = 0; k < kSamples; ++k) {
    const double x = xA + (xB - xA) * k / (kSamples - 1);
    best = std::max(best, model.beta * potential_1d(model, x));
  }
  return best;
}

void require_1d(const SdeModel& model) {
  if (model.dimension != 1) throw Error(ErrorKind::UnsupportedDimension, "1-D committor on a 2-D model");
}

}  // namespace

double committor_1d_quadrature(double x, const SdeModel& model, double xA, double xB) {
  require_1d(model);
  if (!(xA < xB)) throw Error(ErrorKind::InvalidArgument, "need xA < xB");
  if (x < xA || x > xB) throw Error(ErrorKind::InvalidArgument, "x outside [xA, xB]");
  if (x == xA) return 0.0;
  if (x == xB) return 1.0;
  const double shift = max_scaled_potential(model, xA, xB);
  const auto weight = [&](double s) { return std::exp(model.beta * potential_1d(model, s) - shift); };
  const double tol = 1e-14 * (xB - xA);
  const double total = integrate(weight, xA, xB, tol).value;
  const double partial = integrate(weight, xA, x, tol).value;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::QuadratureFailure, "normalizing integral is not positive");
  }
  return partial / total;
}

double committor_saddle_approx(double x, const SdeModel& model, double xA, double xB, double xs) {
  require_1d(model);
  double curvature = 0.0;
  if (const auto d1 = model.force_d1(xs)) {
    curvature = -*d1;
  } else {
    const double h = 1e-4;
    curvature = (potential_1d(model, xs + h) - 2.0 * potential_1d(model, xs) + potential_1d(model, xs - h)) / (h * h);
  }
  if (curvature >= 0.0) throw Error(ErrorKind::NotASaddle, "V'' at the saddle must be negative");
  const double omega = -0.5 * model.beta * curvature;
  const auto lobe = [&](double p) { return std::sqrt(-std::expm1(-omega * (p - xs) * (p - xs))); };
  const double offset = x - xs;
  const double sign = offset > 0.0 ? 1.0 : (offset < 0.0 ? -1.0 : 0.0);
  return (lobe(xA) + sign * lobe(x)) / (lobe(xA) + lobe(xB));
}

CommittorTable1d tabulate_committor_1d(const SdeModel& model, double xA, double xB, int points) {
  require_1d(model);
  if (points < 2 || !(xA < xB)) throw Error(ErrorKind::InvalidArgument, "bad committor table layout");
  const double shift = max_scaled_potential(model, xA, xB);
  const auto weight = [&](double s) { return std::exp(model.beta * potential_1d(model, s) - shift); };

  CommittorTable1d table;
  table.xA = xA;
  table.xB = xB;
  table.values.assign(static_cast<std::size_t>(points), 0.0);
  const double h = (xB - xA) / (points - 1);
  for (int k = 1; k < points; ++k) {
    double kronrod = 0.0, gauss = 0.0;
    detail::gauss_kronrod_15(weight, xA + (k - 1) * h, xA + k * h, kronrod, gauss);
    table.values[static_cast<std::size_t>(k)] = table.values[static_cast<std::size_t>(k - 1)] + kronrod;
  }
  const double total = table.values.back();
  if (!(total > 0.0)) throw Error(ErrorKind::QuadratureFailure, "normalizing integral is not positive");
  for (double& v : table.values) v /= total;
  table.values.back() = 1.0;
  return table;
}

namespace {

struct Stencil {
  double east = 0.0, west = 0.0, north = 0.0, south = 0.0;
  double diagonal() const { return east + west + north + south; }
};

// Off-diagonal weights of F . grad q + (1/beta) Laplacian q at node (i, j).
// Mirrored ghost nodes fold the outward weight onto the inward neighbour.
Stencil node_stencil(const SdeModel& model, const CommittorGrid& grid, Eigen::Index i, Eigen::Index j) {
  const State f = model.force(State(grid.x_at(i), grid.y_at(j)));
  const double diffusion = 1.0 / model.beta;
  Stencil s;
  const auto axis = [&](double force, double h, double& plus, double& minus) {
    plus = minus = diffusion / (h * h);
    if (std::abs(force) * h * model.beta / 2.0 <= 1.0) {
      plus += force / (2.0 * h);
      minus -= force / (2.0 * h);
    } else if (force > 0.0) {
      plus += force / h;
    } else {
      minus -= force / h;
    }
  };
  axis(f(0), grid.dx, s.east, s.west);
  axis(f(1), grid.dy, s.north, s.south);
  if (i == 0) { s.east += s.west; s.west = 0.0; }
  if (i == grid.nx() - 1) { s.west += s.east; s.east = 0.0; }
  if (j == 0) { s.north += s.south; s.south = 0.0; }
  if (j == grid.ny() - 1) { s.south += s.north; s.north = 0.0; }
  return s;
}

Eigen::Index nearest_node(const CommittorGrid& grid, const State& p) {
  const auto i = static_cast<Eigen::Index>(std::lround((p(0) - grid.x0) / grid.dx));
  const auto j = static_cast<Eigen::Index>(std::lround((p(1) - grid.y0) / grid.dy));
  if (i < 0 || i >= grid.nx() || j < 0 || j >= grid.ny()) {
    throw Error(ErrorKind::OutOfDomain, "Dirichlet point outside the committor domain");
  }
  return j * grid.nx() + i;
}

}  // namespace

double committor_residual(const SdeModel& model, const CommittorGrid& grid) {
  const Eigen::Index nx = grid.nx();
  const Eigen::Index ny = grid.ny();
  std::vector<char> fixed(static_cast<std::size_t>(nx * ny), 0);
  for (auto k : grid.dirichletA) fixed[static_cast<std::size_t>(k)] = 1;
  for (auto k : grid.dirichletB) fixed[static_cast<std::size_t>(k)] = 1;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      if (fixed[static_cast<std::size_t>(j * nx + i)]) continue;
      const Stencil s = node_stencil(model, grid, i, j);
      const auto& q = grid.values;
      double sum = -s.diagonal() * q(j, i);
      if (s.east != 0.0) sum += s.east * q(j, i + 1);
      if (s.west != 0.0) sum += s.west * q(j, i - 1);
      if (s.north != 0.0) sum += s.north * q(j + 1, i);
      if (s.south != 0.0) sum += s.south * q(j - 1, i);
      worst = std::max(worst, std::abs(sum) / s.diagonal());
    }
  }
  return worst;
}

CommittorGrid solve_committor_2d(const SdeModel& model, const CommittorSolveOptions& options) {
  if (model.dimension != 2) throw Error(ErrorKind::UnsupportedDimension, "2-D committor solver on a 1-D model");
  if (!(options.dx > 0.0) || !(options.dy > 0.0) || !(options.x1 > options.x0) || !(options.y1 > options.y0)) {
    throw Error(ErrorKind::InvalidArgument, "bad committor domain");
  }
  CommittorGrid grid;
  grid.x0 = options.x0;
  grid.x1 = options.x1;
  grid.y0 = options.y0;
  grid.y1 = options.y1;
  grid.dx = options.dx;
  grid.dy = options.dy;
  grid.beta = model.beta;
  const auto nx = static_cast<Eigen::Index>(std::lround((options.x1 - options.x0) / options.dx)) + 1;
  const auto ny = static_cast<Eigen::Index>(std::lround((options.y1 - options.y0) / options.dy)) + 1;
  grid.values = Eigen::MatrixXd::Zero(ny, nx);
  const Eigen::Index n = nx * ny;
  std::vector<signed char> fixed(static_cast<std::size_t>(n), -1);
  if (options.regionA || options.regionB) {
    if (!options.regionA || !options.regionB) throw Error(ErrorKind::InvalidArgument, "need both Dirichlet regions");
    for (Eigen::Index j = 0; j < ny; ++j) {
      for (Eigen::Index i = 0; i < nx; ++i) {
        const State p(grid.x_at(i), grid.y_at(j));
        const Eigen::Index k = j * nx + i;
        if (options.regionA(p)) {
          grid.dirichletA.push_back(k);
        } else if (options.regionB(p)) {
          grid.dirichletB.push_back(k);
        }
      }
    }
    if (grid.dirichletA.empty() || grid.dirichletB.empty()) {
      throw Error(ErrorKind::InvalidArgument, "a Dirichlet region contains no grid node");
    }
  } else {
    const Eigen::Index nodeA = nearest_node(grid, options.pointA);
    const Eigen::Index nodeB = nearest_node(grid, options.pointB);
    if (nodeA == nodeB) throw Error(ErrorKind::InvalidArgument, "A and B map to the same node");
    grid.dirichletA = {nodeA};
    grid.dirichletB = {nodeB};
  }
  for (auto k : grid.dirichletA) fixed[static_cast<std::size_t>(k)] = 0;
  for (auto k : grid.dirichletB) fixed[static_cast<std::size_t>(k)] = 1;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const Eigen::Index row = j * nx + i;
      if (fixed[static_cast<std::size_t>(row)] >= 0) {
        triplets.emplace_back(row, row, 1.0);
        rhs(row) = fixed[static_cast<std::size_t>(row)];
        continue;
      }
      const Stencil s = node_stencil(model, grid, i, j);
      const double diag = s.diagonal();
      // Rows are scaled by the diagonal so the residual is an update size.
      triplets.emplace_back(row, row, -1.0);
      if (s.east != 0.0) triplets.emplace_back(row, row + 1, s.east / diag);
      if (s.west != 0.0) triplets.emplace_back(row, row - 1, s.west / diag);
      if (s.north != 0.0) triplets.emplace_back(row, row + nx, s.north / diag);
      if (s.south != 0.0) triplets.emplace_back(row, row - nx, s.south / diag);
    }
  }
  Eigen::SparseMatrix<double> matrix(n, n);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(matrix);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::SolverDiverged, "sparse LU factorization failed");
  Eigen::VectorXd q = lu.solve(rhs);
  for (int refinement = 0; refinement < 3; ++refinement) {
    const Eigen::VectorXd r = rhs - matrix * q;
    if (r.lpNorm<Eigen::Infinity>() < 0.01 * options.tol) break;
    q += lu.solve(r);
  }
  if (!q.allFinite()) throw Error(ErrorKind::SolverDiverged, "committor solve produced non-finite values");

  constexpr double kRoundoff = 1e-9;
  if (q.minCoeff() < -kRoundoff || q.maxCoeff() > 1.0 + kRoundoff) {
    throw Error(ErrorKind::InternalInconsistency, "discrete maximum principle violated");
  }
  q = q.cwiseMax(0.0).cwiseMin(1.0);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) grid.values(j, i) = q(j * nx + i);
  }
  grid.residualNorm = committor_residual(model, grid);
  if (!(grid.residualNorm < options.tol)) {
    throw Error(ErrorKind::SolverDiverged, "residual " + std::to_string(grid.residualNorm) + " above tolerance");
  }
  return grid;
}

CommittorSolveOptions set_dirichlet_options(const ProblemSpec& problem, double spacing, double dt) {
  // -zeta(1/2) / sqrt(2 pi)
  constexpr double kShiftConstant = 0.5825971579390106;
  const double shift = dt > 0.0 ? kShiftConstant * std::sqrt(2.0 * dt / problem.model.beta) : 0.0;
  const auto gradNorm = [problem](const State& p) {
    constexpr double e = 1e-6;
    const State ex(e, 0.0), ey(0.0, e);
    return std::hypot((problem.setPhi(p + ex) - problem.setPhi(p - ex)) / (2 * e),
                      (problem.setPhi(p + ey) - problem.setPhi(p - ey)) / (2 * e));
  };
  CommittorSolveOptions options;
  options.dx = options.dy = spacing;
  options.regionA = [problem, shift, gradNorm](const State& p) {
    return problem.setPhi(p) <= problem.a - (shift > 0.0 ? shift * gradNorm(p) : 0.0);
  };
  options.regionB = [problem, shift, gradNorm](const State& p) {
    return problem.setPhi(p) >= problem.b + (shift > 0.0 ? shift * gradNorm(p) : 0.0);
  };
  return options;
}

double committor_average_on_c(const CommittorGrid& grid, const ProblemSpec& problem, int points) {
  const SurfaceC& c = problem.surfaceC;
  if (c.kind == SurfaceKind::Point) return committor_interpolate(grid, c.point);
  const RhoCTable table = problem.rhoC && static_cast<int>(problem.rhoC->params.size()) == points
                              ? *problem.rhoC
                              : tabulate_rho_c(problem.model, c, points);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < table.params.size(); ++k) {
    const double mass = table.cdf[k + 1] - table.cdf[k];
    if (mass == 0.0) continue;
    sum += mass * committor_interpolate(grid, c.at(0.5 * (table.params[k] + table.params[k + 1])));
  }
  return sum;
}

}  // namespace ams
