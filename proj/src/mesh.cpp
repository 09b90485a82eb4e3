#include "zo/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "zo/errors.hpp"

namespace zo {

void MeshProblem::validate() const {
  if (coarse_n < 3) throw InvalidArgument("mesh: coarse_n must be at least 3");
  if (fine_n < 3) throw InvalidArgument("mesh: fine_n must be at least 3");
  if (!(min_gap > 0.0) || min_gap * static_cast<double>(coarse_n - 1) >= 1.0)
    throw InvalidArgument("mesh: min_gap must be positive and leave room for every line");
  if (!source) throw InvalidArgument("mesh: source term is empty");
}

Vector uniform_mesh_point(const MeshProblem& problem) {
  problem.validate();
  const std::size_t m = problem.coarse_n - 2;
  const auto axis = uniform_grid(problem.coarse_n);
  Vector z(static_cast<Eigen::Index>(2 * m));
  for (std::size_t k = 0; k < m; ++k) {
    z[static_cast<Eigen::Index>(k)] = axis[k + 1];
    z[static_cast<Eigen::Index>(m + k)] = axis[k + 1];
  }
  return z;
}

namespace {

void project_axis(double* first, std::size_t m, double gap) {
  std::sort(first, first + m);
  for (std::size_t k = 0; k < m; ++k) first[k] = std::clamp(first[k], gap, 1.0 - gap);
  double prev = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    first[k] = std::max(first[k], prev + gap);
    prev = first[k];
  }
  double next = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    first[k] = std::min(first[k], next - gap);
    next = first[k];
  }
}

}  // namespace

Vector project_mesh_point(const MeshProblem& problem, const Vector& z) {
  if (static_cast<std::size_t>(z.size()) != problem.dimension())
    throw InvalidArgument("mesh: decision vector has the wrong dimension");
  if (!z.allFinite()) throw EvaluationError("mesh: non-finite decision vector", z);
  const std::size_t m = problem.coarse_n - 2;
  Vector out = z;
  project_axis(out.data(), m, problem.min_gap);
  project_axis(out.data() + m, m, problem.min_gap);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> mesh_axes(const MeshProblem& problem,
                                                              const Vector& feasible) {
  const std::size_t m = problem.coarse_n - 2;
  std::vector<double> gx(m + 2), gy(m + 2);
  gx.front() = gy.front() = 0.0;
  gx.back() = gy.back() = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    gx[k + 1] = feasible[static_cast<Eigen::Index>(k)];
    gy[k + 1] = feasible[static_cast<Eigen::Index>(m + k)];
  }
  return {std::move(gx), std::move(gy)};
}

double mesh_loss(const MeshProblem& problem, const NodalGrid& fine, const Vector& z) {
  const Vector feasible = project_mesh_point(problem, z);
  auto [gx, gy] = mesh_axes(problem, feasible);
  const NodalGrid coarse = poisson_solve(gx, gy, problem.source, problem.boundary);
  double worst = 0.0;
  for (std::size_t j = 0; j < gy.size(); ++j)
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double ref = interpolate_bilinear(fine, gx[i], gy[j]);
      const double diff = std::abs(coarse.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref);
      worst = std::max(worst, diff);
    }
  return worst;
}

Objective mesh_objective(const MeshProblem& problem) {
  problem.validate();
  const auto fine_axis = uniform_grid(problem.fine_n);
  auto fine = std::make_shared<const NodalGrid>(
      poisson_solve(fine_axis, fine_axis, problem.source, problem.boundary));
  Objective obj;
  obj.name = "mesh";
  obj.dim = problem.dimension();
  obj.eval = [problem, fine](const Vector& z) { return mesh_loss(problem, *fine, z); };
  return obj;
}

}  // namespace zo
