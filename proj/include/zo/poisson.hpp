#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace zo {

using SourceFn = std::function<double(double, double)>;

/// Nodal values on a tensor-product grid; values(i, j) sits at (x[i], y[j]).
struct NodalGrid {
  std::vector<double> x;
  std::vector<double> y;
  Eigen::MatrixXd values;
};

/// n equally spaced nodes on [0, 1], endpoints included.
std::vector<double> uniform_grid(std::size_t n);

/// Solves Laplace(phi) = source on [0, 1]^2 with phi = boundary on the edges.
///
/// Five-point finite differences on the (possibly non-uniform) tensor grid:
///   2/(h[i-1] + h[i]) * ((phi[i+1] - phi[i]) / h[i] - (phi[i] - phi[i-1]) / h[i-1])
/// in each direction. Rows are scaled by the dual-cell area so the assembled
/// system is symmetric positive definite, then factored with a sparse Cholesky.
///
/// Throws InvalidMesh for coordinates that are not strictly increasing from
/// 0 to 1 (at least three per axis) and SolverError if the factorization fails.
NodalGrid poisson_solve(const std::vector<double>& grid_x, const std::vector<double>& grid_y,
                        const SourceFn& source, double boundary);

/// The discrete operator above applied at interior nodes; boundary entries are 0.
Eigen::MatrixXd apply_laplacian(const NodalGrid& grid);

/// Bilinear interpolation of nodal values at (px, py) inside the grid's box.
double interpolate_bilinear(const NodalGrid& grid, double px, double py);

/// Throws InvalidMesh unless coords are strictly increasing with endpoints 0 and 1.
void validate_axis(const std::vector<double>& coords, const char* axis);

}  // namespace zo
