#include "zo/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "zo/errors.hpp"

namespace zo {

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw InvalidMesh("uniform_grid: need at least two nodes");
  std::vector<double> g(n);
  const double h = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) * h;
  g.back() = 1.0;
  return g;
}

void validate_axis(const std::vector<double>& coords, const char* axis) {
  const std::string name(axis);
  if (coords.size() < 3) throw InvalidMesh(name + " axis needs at least three nodes");
  if (std::abs(coords.front()) > 1e-12 || std::abs(coords.back() - 1.0) > 1e-12)
    throw InvalidMesh(name + " axis must start at 0 and end at 1");
  for (std::size_t i = 1; i < coords.size(); ++i)
    if (!(coords[i] > coords[i - 1]))
      throw InvalidMesh(name + " axis coordinates must be strictly increasing");
}

NodalGrid poisson_solve(const std::vector<double>& grid_x, const std::vector<double>& grid_y,
                        const SourceFn& source, double boundary) {
  validate_axis(grid_x, "x");
  validate_axis(grid_y, "y");
  const auto nx = static_cast<Eigen::Index>(grid_x.size());
  const auto ny = static_cast<Eigen::Index>(grid_y.size());
  const Eigen::Index mx = nx - 2;
  const Eigen::Index my = ny - 2;
  const Eigen::Index n = mx * my;

  auto hx = [&](Eigen::Index i) { return grid_x[static_cast<std::size_t>(i + 1)] - grid_x[static_cast<std::size_t>(i)]; };
  auto hy = [&](Eigen::Index j) { return grid_y[static_cast<std::size_t>(j + 1)] - grid_y[static_cast<std::size_t>(j)]; };
  auto index = [mx](Eigen::Index i, Eigen::Index j) { return (i - 1) + (j - 1) * mx; };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd rhs(n);

  // Negated and area-scaled: sum of couplings on the diagonal, -coupling off it.
  for (Eigen::Index j = 1; j <= my; ++j) {
    const double wy = 0.5 * (hy(j - 1) + hy(j));
    for (Eigen::Index i = 1; i <= mx; ++i) {
      const double wx = 0.5 * (hx(i - 1) + hx(i));
      const double cw = wy / hx(i - 1);
      const double ce = wy / hx(i);
      const double cs = wx / hy(j - 1);
      const double cn = wx / hy(j);
      const Eigen::Index k = index(i, j);
      double b = -wx * wy * source(grid_x[static_cast<std::size_t>(i)], grid_y[static_cast<std::size_t>(j)]);
      triplets.emplace_back(k, k, cw + ce + cs + cn);
      if (i > 1) triplets.emplace_back(k, index(i - 1, j), -cw); else b += cw * boundary;
      if (i < mx) triplets.emplace_back(k, index(i + 1, j), -ce); else b += ce * boundary;
      if (j > 1) triplets.emplace_back(k, index(i, j - 1), -cs); else b += cs * boundary;
      if (j < my) triplets.emplace_back(k, index(i, j + 1), -cn); else b += cn * boundary;
      rhs[k] = b;
    }
  }

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a);
  if (llt.info() != Eigen::Success) throw SolverError("poisson: Cholesky factorization failed");
  const Eigen::VectorXd interior = llt.solve(rhs);
  if (llt.info() != Eigen::Success || !interior.allFinite())
    throw SolverError("poisson: linear solve failed");

  NodalGrid out{grid_x, grid_y, Eigen::MatrixXd::Constant(nx, ny, boundary)};
  for (Eigen::Index j = 1; j <= my; ++j)
    for (Eigen::Index i = 1; i <= mx; ++i) out.values(i, j) = interior[index(i, j)];
  return out;
}

Eigen::MatrixXd apply_laplacian(const NodalGrid& grid) {
  const auto& x = grid.x;
  const auto& y = grid.y;
  const auto nx = static_cast<Eigen::Index>(x.size());
  const auto ny = static_cast<Eigen::Index>(y.size());
  const auto& u = grid.values;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, ny);
  for (Eigen::Index j = 1; j + 1 < ny; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const double hs = y[sj] - y[sj - 1];
    const double hn = y[sj + 1] - y[sj];
    for (Eigen::Index i = 1; i + 1 < nx; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const double hw = x[si] - x[si - 1];
      const double he = x[si + 1] - x[si];
      const double dxx = 2.0 / (hw + he) * ((u(i + 1, j) - u(i, j)) / he - (u(i, j) - u(i - 1, j)) / hw);
      const double dyy = 2.0 / (hs + hn) * ((u(i, j + 1) - u(i, j)) / hn - (u(i, j) - u(i, j - 1)) / hs);
      out(i, j) = dxx + dyy;
    }
  }
  return out;
}

namespace {

// Cell index c with coords[c] <= p <= coords[c + 1], clamped to the grid.
std::size_t locate(const std::vector<double>& coords, double p) {
  auto it = std::upper_bound(coords.begin(), coords.end(), p);
  std::size_t hi = static_cast<std::size_t>(it - coords.begin());
  hi = std::clamp<std::size_t>(hi, 1, coords.size() - 1);
  return hi - 1;
}

}  // namespace

double interpolate_bilinear(const NodalGrid& grid, double px, double py) {
  const std::size_t i = locate(grid.x, px);
  const std::size_t j = locate(grid.y, py);
  const double tx = std::clamp((px - grid.x[i]) / (grid.x[i + 1] - grid.x[i]), 0.0, 1.0);
  const double ty = std::clamp((py - grid.y[j]) / (grid.y[j + 1] - grid.y[j]), 0.0, 1.0);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  const auto& v = grid.values;
  return (1 - tx) * (1 - ty) * v(ii, jj) + tx * (1 - ty) * v(ii + 1, jj) +
         (1 - tx) * ty * v(ii, jj + 1) + tx * ty * v(ii + 1, jj + 1);
}

}  // namespace zo
