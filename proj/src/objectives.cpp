#include "zo/objectives.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "zo/errors.hpp"

namespace zo {

Vector Objective::gradient(const Vector& x) const {
  if (!grad_oracle) throw InvalidArgument("objective '" + name + "' has no gradient oracle");
  return grad_oracle(x);
}

Matrix quadratic_matrix(const QuadraticSpec& spec) {
  if (spec.dim == 0) throw InvalidArgument("quadratic: dimension must be positive");
  const auto d = static_cast<Eigen::Index>(spec.dim);
  RngStream rng(spec.matrix_seed);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rng.uniform();
  return a;
}

Objective quadratic(const QuadraticSpec& spec) {
  return quadratic(quadratic_matrix(spec));
}

Vector quadratic_query_point(const QuadraticSpec& spec, RngStream& rng) {
  return sparse_query_point(spec.dim, spec.sparsity_mask, rng);
}

Objective quadratic(Matrix a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InvalidArgument("quadratic: matrix must be square and non-empty");
  const Matrix sym = a + a.transpose();
  Objective obj;
  obj.name = "quadratic";
  obj.dim = static_cast<std::size_t>(a.rows());
  obj.eval = [a](const Vector& x) { return x.dot(a * x); };
  obj.grad_oracle = [sym](const Vector& x) -> Vector { return sym * x; };
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  obj.smoothness_L = eig.eigenvalues().cwiseAbs().maxCoeff();
  return obj;
}

Objective product(std::size_t d) {
  if (d < 2) throw InvalidArgument("product: dimension must be at least 2");
  Objective obj;
  obj.name = "product";
  obj.dim = d;
  obj.eval = [](const Vector& x) { return x.prod(); };
  // Prefix/suffix products so zero entries are handled without division.
  obj.grad_oracle = [](const Vector& x) {
    const Eigen::Index n = x.size();
    Vector g(n);
    double prefix = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      g[i] = prefix;
      prefix *= x[i];
    }
    double suffix = 1.0;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      g[i] *= suffix;
      suffix *= x[i];
    }
    return g;
  };
  return obj;
}

Objective affine(Vector g, double c) {
  if (g.size() == 0) throw InvalidArgument("affine: gradient must be non-empty");
  Objective obj;
  obj.name = "affine";
  obj.dim = static_cast<std::size_t>(g.size());
  obj.eval = [g, c](const Vector& x) { return g.dot(x) + c; };
  obj.grad_oracle = [g](const Vector&) { return g; };
  obj.smoothness_L = 0.0;
  return obj;
}

Objective squared_norm(std::size_t d) {
  if (d == 0) throw InvalidArgument("squared_norm: dimension must be positive");
  Objective obj;
  obj.name = "sphere";
  obj.dim = d;
  obj.eval = [](const Vector& x) { return x.squaredNorm(); };
  obj.grad_oracle = [](const Vector& x) -> Vector { return 2.0 * x; };
  obj.smoothness_L = 2.0;
  return obj;
}

Vector fd_gradient(const Objective& obj, const Vector& x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("fd_gradient: step must be positive");
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = obj(probe);
    probe[i] = x[i] - h;
    const double fm = obj(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw EvaluationError("fd_gradient: non-finite objective value", x);
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vector sparse_query_point(std::size_t d, const std::vector<std::size_t>& zeros, RngStream& rng) {
  Vector x(static_cast<Eigen::Index>(d));
  for (auto& xi : x) xi = rng.uniform(0.5, 1.5);
  for (auto i : zeros) {
    if (i >= d) throw InvalidArgument("sparse_query_point: index out of range");
    x[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return x;
}

std::vector<std::size_t> half_mask(std::size_t d) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i < d; i += 2) idx.push_back(i);
  return idx;
}

}  // namespace zo
