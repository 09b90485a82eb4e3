#pragma once

#include <cstdint>
#include <vector>

#include "zo/objective.hpp"

namespace zo {

/// f(x) = x^T A x with A_ij i.i.d. U[0, 1] drawn from `matrix_seed`.
/// `sparsity_mask` lists the coordinates zeroed in the query point (see
/// quadratic_query_point); the objective itself is the plain quadratic form.
struct QuadraticSpec {
  std::uint64_t matrix_seed = 0;
  std::size_t dim = 16;
  std::vector<std::size_t> sparsity_mask;
};

/// The matrix a QuadraticSpec describes (row-major fill from the seed).
Matrix quadratic_matrix(const QuadraticSpec& spec);

Objective quadratic(const QuadraticSpec& spec);
Objective quadratic(Matrix a);
/// Query point U[0.5, 1.5]^d with the spec's sparsity_mask coordinates zeroed.
Vector quadratic_query_point(const QuadraticSpec& spec, RngStream& rng);

/// f(x) = prod_i x_i.
Objective product(std::size_t d);

/// f(x) = g^T x + c. The two-point estimator is exact on this family.
Objective affine(Vector g, double c = 0.0);

/// f(x) = ||x||^2 (L = 2, strong convexity 2).
Objective squared_norm(std::size_t d);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h).
Vector fd_gradient(const Objective& obj, const Vector& x, double h);

/// Query point for the sparse synthetic setups: entries U[0.5, 1.5], with the
/// listed coordinates set to zero.
Vector sparse_query_point(std::size_t d, const std::vector<std::size_t>& zeros, RngStream& rng);

/// Every other coordinate (1, 3, 5, ...): half of the entries of x.
std::vector<std::size_t> half_mask(std::size_t d);

}  // namespace zo
