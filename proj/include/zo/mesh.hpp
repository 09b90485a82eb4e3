#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "zo/objective.hpp"
#include "zo/poisson.hpp"

namespace zo {

/// Coarse-vs-fine Poisson mesh optimization on a tensor-product grid.
///
/// The decision vector holds the interior grid-line coordinates of the coarse
/// mesh: first the (coarse_n - 2) x-lines, then the (coarse_n - 2) y-lines.
struct MeshProblem {
  std::size_t coarse_n = 10;
  std::size_t fine_n = 20;
  SourceFn source = [](double, double) { return 1.0; };
  std::string source_name = "constant";
  double boundary = 0.0;
  double min_gap = 1e-3;

  void validate() const;
  std::size_t dimension() const { return 2 * (coarse_n - 2); }
};

/// Decision vector of the uniform coarse mesh.
Vector uniform_mesh_point(const MeshProblem& problem);

/// Makes a decision vector feasible: per axis, sort, clamp into
/// [min_gap, 1 - min_gap], then sweep forward and backward so that
/// neighbouring lines (and the fixed walls at 0 and 1) are min_gap apart.
/// A feasible input is returned unchanged.
Vector project_mesh_point(const MeshProblem& problem, const Vector& z);

/// Full x and y axes (walls included) of a feasible decision vector.
std::pair<std::vector<double>, std::vector<double>> mesh_axes(const MeshProblem& problem,
                                                              const Vector& feasible);

/// Max-abs nodal gap between the coarse solution and the fine solution
/// bilinearly interpolated onto the coarse nodes.
double mesh_loss(const MeshProblem& problem, const NodalGrid& fine, const Vector& z);

/// The loss as an Objective without a gradient oracle. The fine solution is
/// solved once up front and shared read-only by every copy.
Objective mesh_objective(const MeshProblem& problem);

}  // namespace zo
