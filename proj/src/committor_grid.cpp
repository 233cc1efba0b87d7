#include "ams/committor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ams/error.hpp"

namespace ams {

bool CommittorGrid::contains(double x, double y) const {
  const double slack = 1e-12 * std::max(dx, dy);
  return x >= x0 - slack && x <= x1 + slack && y >= y0 - slack && y <= y1 + slack;
}

double committor_interpolate(const CommittorGrid& grid, const Eigen::Vector2d& x) {
  if (!grid.contains(x(0), x(1)) || !x.allFinite()) {
    throw Error(ErrorKind::OutOfDomain, "point outside the committor grid");
  }
  const Eigen::Index nx = grid.nx();
  const Eigen::Index ny = grid.ny();
  const double u = std::clamp((x(0) - grid.x0) / grid.dx, 0.0, static_cast<double>(nx - 1));
  const double v = std::clamp((x(1) - grid.y0) / grid.dy, 0.0, static_cast<double>(ny - 1));
  const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), nx - 2);
  const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(v), ny - 2);
  const double s = u - static_cast<double>(i);
  const double t = v - static_cast<double>(j);
  const auto& q = grid.values;
  const double value = (1 - s) * (1 - t) * q(j, i) + s * (1 - t) * q(j, i + 1) + (1 - s) * t * q(j + 1, i) +
                       s * t * q(j + 1, i + 1);
  return std::clamp(value, 0.0, 1.0);
}

void write_committor_grid(std::ostream& out, const CommittorGrid& grid) {
  out << std::setprecision(17);
  out << "committor-grid 1\n";
  out << "domain " << grid.x0 << ' ' << grid.x1 << ' ' << grid.y0 << ' ' << grid.y1 << '\n';
  out << "spacing " << grid.dx << ' ' << grid.dy << '\n';
  out << "size " << grid.nx() << ' ' << grid.ny() << '\n';
  out << "beta " << grid.beta << '\n';
  out << "residual " << grid.residualNorm << '\n';
  const auto indices = [&](const char* name, const std::vector<Eigen::Index>& idx) {
    out << name << ' ' << idx.size();
    for (auto k : idx) out << ' ' << k;
    out << '\n';
  };
  indices("dirichletA", grid.dirichletA);
  indices("dirichletB", grid.dirichletB);
  out << "values\n";
  for (Eigen::Index j = 0; j < grid.ny(); ++j) {
    for (Eigen::Index i = 0; i < grid.nx(); ++i) {
      if (i) out << ' ';
      out << grid.values(j, i);
    }
    out << '\n';
  }
}

namespace {

void expect(std::istream& in, const char* key) {
  std::string word;
  if (!(in >> word) || word != key) {
    throw Error(ErrorKind::ConfigError, std::string("committor grid: expected '") + key + "'");
  }
}

}  // namespace

CommittorGrid read_committor_grid(std::istream& in) {
  CommittorGrid grid;
  int version = 0;
  expect(in, "committor-grid");
  if (!(in >> version) || version != 1) throw Error(ErrorKind::ConfigError, "committor grid: unsupported version");
  Eigen::Index nx = 0, ny = 0;
  expect(in, "domain");
  in >> grid.x0 >> grid.x1 >> grid.y0 >> grid.y1;
  expect(in, "spacing");
  in >> grid.dx >> grid.dy;
  expect(in, "size");
  in >> nx >> ny;
  expect(in, "beta");
  in >> grid.beta;
  expect(in, "residual");
  in >> grid.residualNorm;
  if (!in || nx < 2 || ny < 2) throw Error(ErrorKind::ConfigError, "committor grid: bad header");
  const auto indices = [&](const char* name, std::vector<Eigen::Index>& idx) {
    expect(in, name);
    std::size_t count = 0;
    in >> count;
    idx.resize(count);
    for (auto& k : idx) {
      in >> k;
      if (k < 0 || k >= nx * ny) throw Error(ErrorKind::ConfigError, "committor grid: Dirichlet index out of range");
    }
  };
  indices("dirichletA", grid.dirichletA);
  indices("dirichletB", grid.dirichletB);
  expect(in, "values");
  grid.values.resize(ny, nx);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) in >> grid.values(j, i);
  }
  if (!in) throw Error(ErrorKind::ConfigError, "committor grid: truncated values");
  return grid;
}

void save_committor_grid(const std::string& path, const CommittorGrid& grid) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path);
  write_committor_grid(out, grid);
}

CommittorGrid load_committor_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "committor grid not found: " + path);
  return read_committor_grid(in);
}

double CommittorTable1d::operator()(double x) const {
  const auto n = values.size();
  if (x <= xA) return 0.0;
  if (x >= xB) return 1.0;
  const double u = (x - xA) / (xB - xA) * static_cast<double>(n - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(u), n - 2);
  const double s = u - static_cast<double>(k);
  return (1.0 - s) * values[k] + s * values[k + 1];
}

}  // namespace ams
