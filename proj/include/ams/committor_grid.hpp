#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ams {

/// Committor values on a rectangular node grid. values(j, i) holds the node
/// at x = x0 + i*dx, y = y0 + j*dy (rows run along y).
struct CommittorGrid {
  double x0 = -1.5, x1 = 1.5;
  double y0 = -1.0, y1 = 2.0;
  double dx = 0.03, dy = 0.03;
  double beta = 1.0;
  double residualNorm = 0.0;
  Eigen::MatrixXd values;
  std::vector<Eigen::Index> dirichletA;  // flat indices j*nx + i
  std::vector<Eigen::Index> dirichletB;

  Eigen::Index nx() const { return values.cols(); }
  Eigen::Index ny() const { return values.rows(); }
  double x_at(Eigen::Index i) const { return x0 + static_cast<double>(i) * dx; }
  double y_at(Eigen::Index j) const { return y0 + static_cast<double>(j) * dy; }
  bool contains(double x, double y) const;
};

/// Bilinear interpolation clamped to [0,1]; throws OutOfDomain outside the grid.
double committor_interpolate(const CommittorGrid& grid, const Eigen::Vector2d& x);

/// Self-describing text format: header lines then ny rows of nx values.
void write_committor_grid(std::ostream& out, const CommittorGrid& grid);
CommittorGrid read_committor_grid(std::istream& in);
void save_committor_grid(const std::string& path, const CommittorGrid& grid);
CommittorGrid load_committor_grid(const std::string& path);

/// Tabulated 1-D committor on a uniform grid over [xA, xB], linear interpolation.
struct CommittorTable1d {
  double xA = -1.0;
  double xB = 1.0;
  std::vector<double> values;

  double operator()(double x) const;
};

}  // namespace ams
